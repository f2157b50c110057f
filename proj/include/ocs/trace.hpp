#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "ocs/types.hpp"

namespace ocs {

/// Per-slot directional rack-to-rack demand X(t, src, dst) in bytes.
///
/// Append-only: once a later slot has been written, earlier slots are
/// frozen. Slots before 0 read as zero.
class TrafficTrace {
 public:
  explicit TrafficTrace(int racks);

  int racks() const { return racks_; }
  /// Last recorded slot, -1 when empty.
  Slot horizon() const { return slots() - 1; }
  Slot slots() const { return static_cast<Slot>(cells_.size() / cell_stride()); }

  /// Adds `bytes` to X(t, src, dst). Writing slot t freezes all slots < t.
  void record(Slot t, Rack src, Rack dst, Bytes bytes);
  /// Appends empty slots so that horizon() >= t.
  void extend_to(Slot t);

  Bytes at(Slot t, Rack src, Rack dst) const;
  /// X(t,i,j) + X(t,j,i).
  Bytes pair_demand(Slot t, RackPair p) const { return at(t, p.lo, p.hi) + at(t, p.hi, p.lo); }
  /// Sum of X(t,i,j) + X(t,j,i) over the half-open window [end-len, end).
  Bytes window_sum(Rack i, Rack j, Slot end, Slot len) const;
  /// Row-major n*n matrix for slot t.
  std::span<const Bytes> slot_matrix(Slot t) const;
  Bytes total() const;
  /// FNV-1a over racks, slots and cells.
  std::uint64_t digest() const;

  /// CSV with header `slot,src,dst,bytes`; only non-zero cells plus a
  /// zero-byte marker row when the final slot is empty.
  void save_csv(std::ostream& os) const;
  static TrafficTrace load_csv(std::istream& is, int racks);

 private:
  std::size_t cell_stride() const { return static_cast<std::size_t>(racks_) * racks_; }
  std::size_t index(Slot t, Rack src, Rack dst) const {
    return static_cast<std::size_t>(t) * cell_stride() + static_cast<std::size_t>(src) * racks_ + dst;
  }
  void check_rack(Rack r) const;

  int racks_;
  std::vector<Bytes> cells_;
};

/// Read counters kept by a DelayedView when attached.
struct AccessLog {
  Slot freshest_read = -1;
  std::size_t reads = 0;
};

/// A window onto a trace that only exposes slots t' < now - delay.
///
/// Any read past that bound throws VisibilityError; schedulers only ever
/// see the trace through one of these.
class DelayedView {
 public:
  DelayedView(const TrafficTrace& trace, Slot now, Slot delay, AccessLog* log = nullptr);

  Slot now() const { return now_; }
  Slot delay() const { return delay_; }
  /// First slot that is NOT readable.
  Slot bound() const { return now_ - delay_; }
  bool readable(Slot t) const { return t < bound(); }
  int racks() const { return trace_->racks(); }

  Bytes at(Slot t, Rack src, Rack dst) const;
  Bytes window_sum(Rack i, Rack j, Slot end, Slot len) const;

 private:
  void touch(Slot freshest) const;

  const TrafficTrace* trace_;
  Slot now_;
  Slot delay_;
  AccessLog* log_;
};

}  // namespace ocs
