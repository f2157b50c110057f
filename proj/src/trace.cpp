#include "ocs/trace.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace ocs {

TrafficTrace::TrafficTrace(int racks) : racks_(racks) {
  if (racks < 2) throw std::invalid_argument("TrafficTrace: need at least 2 racks");
}

void TrafficTrace::check_rack(Rack r) const {
  if (r < 0 || r >= racks_) throw std::out_of_range("TrafficTrace: rack id " + std::to_string(r) + " out of range");
}

void TrafficTrace::extend_to(Slot t) {
  if (t > horizon()) cells_.resize(static_cast<std::size_t>(t + 1) * cell_stride(), 0);
}

void TrafficTrace::record(Slot t, Rack src, Rack dst, Bytes bytes) {
  check_rack(src);
  check_rack(dst);
  if (src == dst) throw std::invalid_argument("TrafficTrace: intra-rack demand is not recorded");
  if (bytes < 0) throw std::invalid_argument("TrafficTrace: negative demand");
  if (t < 0 || t < horizon())
    throw std::logic_error("TrafficTrace: slot " + std::to_string(t) + " is frozen (horizon " +
                           std::to_string(horizon()) + ")");
  extend_to(t);
  cells_[index(t, src, dst)] += bytes;
}

Bytes TrafficTrace::at(Slot t, Rack src, Rack dst) const {
  if (t < 0) return 0;
  if (t > horizon()) throw std::out_of_range("TrafficTrace: slot " + std::to_string(t) + " beyond horizon");
  return cells_[index(t, src, dst)];
}

Bytes TrafficTrace::window_sum(Rack i, Rack j, Slot end, Slot len) const {
  if (len < 1) throw std::invalid_argument("window_sum: len must be >= 1");
  if (end > slots()) throw std::out_of_range("window_sum: window ends past the horizon");
  Bytes sum = 0;
  for (Slot t = std::max<Slot>(0, end - len); t < end; ++t) sum += cells_[index(t, i, j)] + cells_[index(t, j, i)];
  return sum;
}

std::span<const Bytes> TrafficTrace::slot_matrix(Slot t) const {
  if (t < 0 || t > horizon()) throw std::out_of_range("slot_matrix: slot out of range");
  return {cells_.data() + index(t, 0, 0), cell_stride()};
}

Bytes TrafficTrace::total() const { return std::accumulate(cells_.begin(), cells_.end(), Bytes{0}); }

std::uint64_t TrafficTrace::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(racks_));
  mix(static_cast<std::uint64_t>(slots()));
  for (Bytes c : cells_) mix(static_cast<std::uint64_t>(c));
  return h;
}

void TrafficTrace::save_csv(std::ostream& os) const {
  os << "slot,src,dst,bytes\n";
  bool last_written = false;
  for (Slot t = 0; t < slots(); ++t) {
    for (Rack i = 0; i < racks_; ++i)
      for (Rack j = 0; j < racks_; ++j)
        if (Bytes b = cells_[index(t, i, j)]; b != 0) {
          os << t << ',' << i << ',' << j << ',' << b << '\n';
          last_written = (t == horizon());
        }
  }
  if (horizon() >= 0 && !last_written) os << horizon() << ",0,1,0\n";
}

TrafficTrace TrafficTrace::load_csv(std::istream& is, int racks) {
  TrafficTrace trace(racks);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line.rfind("slot", 0) == 0) continue;
    std::istringstream ss(line);
    Slot t;
    Rack i, j;
    Bytes b;
    char c1, c2, c3;
    if (!(ss >> t >> c1 >> i >> c2 >> j >> c3 >> b) || c1 != ',' || c2 != ',' || c3 != ',')
      throw std::runtime_error("trace csv line " + std::to_string(lineno) + ": malformed row");
    trace.record(t, i, j, b);
  }
  return trace;
}

DelayedView::DelayedView(const TrafficTrace& trace, Slot now, Slot delay, AccessLog* log)
    : trace_(&trace), now_(now), delay_(delay), log_(log) {
  if (delay < 0) throw std::invalid_argument("DelayedView: negative delay");
}

void DelayedView::touch(Slot freshest) const {
  if (freshest >= bound())
    throw VisibilityError("read of slot " + std::to_string(freshest) + " at now=" + std::to_string(now_) +
                          " with delay " + std::to_string(delay_) + " (visible: t' < " +
                          std::to_string(bound()) + ")");
  if (log_) {
    log_->freshest_read = std::max(log_->freshest_read, freshest);
    ++log_->reads;
  }
}

Bytes DelayedView::at(Slot t, Rack src, Rack dst) const {
  touch(t);
  return trace_->at(t, src, dst);
}

Bytes DelayedView::window_sum(Rack i, Rack j, Slot end, Slot len) const {
  touch(end - 1);
  if (end <= 0) return 0;
  return trace_->window_sum(i, j, end, len);
}

}  // namespace ocs
