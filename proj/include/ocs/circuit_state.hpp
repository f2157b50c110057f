#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ocs/types.hpp"

namespace ocs {

enum class Origin { Centralized, Distributed };

/// The symmetric circuit relation C_t with per-node degree bound k.
///
/// Every mutation keeps dest(i) and the pair map in lockstep; connect()
/// refuses to exceed the degree bound.
class CircuitState {
 public:
  CircuitState(int racks, int degree);

  int racks() const { return static_cast<int>(dest_.size()); }
  int degree() const { return degree_; }

  void connect(RackPair p, Origin origin);
  void disconnect(RackPair p);
  void set_origin(RackPair p, Origin origin);
  void clear();

  bool contains(RackPair p) const { return circuits_.contains(p); }
  std::optional<Origin> origin(RackPair p) const;
  /// Sorted neighbours of rack r.
  std::span<const Rack> dest(Rack r) const { return dest_.at(static_cast<std::size_t>(r)); }
  std::size_t size() const { return circuits_.size(); }
  const std::map<RackPair, Origin>& circuits() const { return circuits_; }
  std::vector<RackPair> pairs() const;

  /// Re-derives symmetry and degree from scratch; throws ProtocolError.
  void validate() const;

  /// Pair-set equality (origins ignored).
  bool same_pairs(const CircuitState& other) const;

 private:
  void check_pair(RackPair p) const;

  int degree_;
  std::map<RackPair, Origin> circuits_;
  std::vector<std::vector<Rack>> dest_;
};

/// Number of pairs present in exactly one of the two states.
std::size_t symmetric_difference_size(const CircuitState& a, const CircuitState& b);

/// Stored per-circuit rates R captured when a centralized allocation lands.
struct EpochBaseline {
  Slot epoch_start = 0;
  std::map<RackPair, double> rates;  // bytes per slot

  bool covers(RackPair p) const { return rates.contains(p); }
  /// Throws ProtocolError when `p` has no baseline.
  double rate(RackPair p) const;
};

}  // namespace ocs
