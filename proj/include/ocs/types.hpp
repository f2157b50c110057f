#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace ocs {

using Rack = int;
using Slot = std::int64_t;
using Bytes = std::int64_t;

/// Unordered rack pair stored as (min id, max id).
struct RackPair {
  Rack lo = 0;
  Rack hi = 0;

  RackPair() = default;
  RackPair(Rack a, Rack b) : lo(a < b ? a : b), hi(a < b ? b : a) {}

  Rack other(Rack r) const { return r == lo ? hi : lo; }
  bool contains(Rack r) const { return r == lo || r == hi; }

  auto operator<=>(const RackPair&) const = default;
};

/// A scheduler read a trace slot it is not allowed to see.
class VisibilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Circuit symmetry/degree violation or a protocol invariant broken mid-round.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ocs

template <>
struct std::hash<ocs::RackPair> {
  std::size_t operator()(const ocs::RackPair& p) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t(std::uint32_t(p.lo)) << 32) | std::uint32_t(p.hi));
  }
};
