#pragma once

#include <map>
#include <vector>

#include "ocs/types.hpp"

namespace ocs {

/// Undirected weighted graph over racks 0..n-1. Zero-weight edges are
/// never stored.
class DemandGraph {
 public:
  explicit DemandGraph(int nodes);

  int nodes() const { return nodes_; }
  void set_weight(Rack i, Rack j, Bytes w);
  void add_weight(Rack i, Rack j, Bytes w);
  void remove(RackPair p) { edges_.erase(p); }
  Bytes weight(RackPair p) const;
  const std::map<RackPair, Bytes>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  /// Sorted by weight descending, then pair ascending.
  std::vector<std::pair<RackPair, Bytes>> incident(Rack r) const;

  bool operator==(const DemandGraph&) const = default;

 private:
  void check(Rack i, Rack j) const;

  int nodes_;
  std::map<RackPair, Bytes> edges_;
};

}  // namespace ocs
