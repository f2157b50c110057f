#include "ocs/demand_graph.hpp"

#include <algorithm>
#include <string>

namespace ocs {

DemandGraph::DemandGraph(int nodes) : nodes_(nodes) {
  if (nodes < 0) throw std::invalid_argument("DemandGraph: negative node count");
}

void DemandGraph::check(Rack i, Rack j) const {
  if (i == j) throw std::invalid_argument("DemandGraph: self-loop on " + std::to_string(i));
  if (i < 0 || j < 0 || i >= nodes_ || j >= nodes_) throw std::out_of_range("DemandGraph: node out of range");
}

void DemandGraph::set_weight(Rack i, Rack j, Bytes w) {
  check(i, j);
  if (w < 0) throw std::invalid_argument("DemandGraph: negative weight");
  if (w == 0)
    edges_.erase(RackPair(i, j));
  else
    edges_[RackPair(i, j)] = w;
}

void DemandGraph::add_weight(Rack i, Rack j, Bytes w) {
  check(i, j);
  if (w < 0) throw std::invalid_argument("DemandGraph: negative weight");
  if (w > 0) edges_[RackPair(i, j)] += w;
}

Bytes DemandGraph::weight(RackPair p) const {
  auto it = edges_.find(p);
  return it == edges_.end() ? 0 : it->second;
}

std::vector<std::pair<RackPair, Bytes>> DemandGraph::incident(Rack r) const {
  std::vector<std::pair<RackPair, Bytes>> out;
  for (const auto& e : edges_)
    if (e.first.contains(r)) out.push_back(e);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

}  // namespace ocs
