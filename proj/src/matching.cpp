#include "ocs/matching.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

#include "ocs/detail/blossom.hpp"

namespace ocs {

namespace {

template <typename W>
std::vector<int> run_blossom(int n, const std::vector<std::pair<RackPair, Bytes>>& edges, bool perturb) {
  std::vector<detail::WeightedEdge<W>> we;
  we.reserve(edges.size());
  const int count = static_cast<int>(edges.size());
  for (int r = 0; r < count; ++r) {
    W w = static_cast<W>(edges[r].second);
    if (perturb) w = (w << count) + (W{1} << (count - 1 - r));
    we.push_back({edges[r].first.lo, edges[r].first.hi, w});
  }
  return detail::Blossom<W>(n, std::move(we)).solve();
}

Matching from_mates(const DemandGraph& g, const std::vector<int>& mate) {
  Matching m;
  for (int v = 0; v < static_cast<int>(mate.size()); ++v)
    if (mate[v] > v) {
      RackPair p(v, mate[v]);
      m.pairs.push_back(p);
      m.weight += g.weight(p);
    }
  return m;
}

}  // namespace

Matching mwm_exact(const DemandGraph& g) {
  if (g.edge_count() == 0) return {};
  std::vector<std::pair<RackPair, Bytes>> edges(g.edges().begin(), g.edges().end());
  Bytes total = 0;
  for (const auto& e : edges) total += e.second;
  const int weight_bits = std::bit_width(static_cast<std::uint64_t>(total));
  const int count = static_cast<int>(edges.size());
  // Slack is 2*w, duals start at max weight: keep three bits of headroom.
  if (count + weight_bits + 3 <= 126)
    return from_mates(g, run_blossom<__int128>(g.nodes(), edges, true));
  if (weight_bits + 3 > 62) throw std::overflow_error("mwm_exact: weights too large");
  return from_mates(g, run_blossom<std::int64_t>(g.nodes(), edges, false));
}

bool tie_preferred(const std::vector<RackPair>& a, const std::vector<RackPair>& b) {
  std::size_t i = 0;
  while (i < a.size() && i < b.size() && a[i] == b[i]) ++i;
  if (i == a.size() && i == b.size()) return false;
  if (i == a.size()) return false;  // smallest differing pair belongs to b
  if (i == b.size()) return true;
  return a[i] < b[i];
}

namespace {

struct Enumerator {
  const DemandGraph& g;
  std::vector<bool> used;
  std::vector<RackPair> current;
  Bytes current_weight = 0;
  Matching best;

  void consider() {
    std::vector<RackPair> sorted = current;
    std::sort(sorted.begin(), sorted.end());
    if (current_weight > best.weight || (current_weight == best.weight && tie_preferred(sorted, best.pairs))) {
      best.pairs = std::move(sorted);
      best.weight = current_weight;
    }
  }

  void recurse(Rack from) {
    while (from < g.nodes() && used[from]) ++from;
    if (from >= g.nodes()) {
      consider();
      return;
    }
    used[from] = true;
    recurse(from + 1);  // leave `from` unmatched
    for (Rack v = from + 1; v < g.nodes(); ++v) {
      if (used[v]) continue;
      Bytes w = g.weight(RackPair(from, v));
      if (w == 0) continue;
      used[v] = true;
      current.emplace_back(from, v);
      current_weight += w;
      recurse(from + 1);
      current_weight -= w;
      current.pop_back();
      used[v] = false;
    }
    used[from] = false;
  }
};

}  // namespace

Matching mwm_oracle(const DemandGraph& g) {
  if (g.nodes() > 12) throw std::invalid_argument("mwm_oracle: at most 12 nodes (got " + std::to_string(g.nodes()) + ")");
  Enumerator e{g, std::vector<bool>(static_cast<std::size_t>(g.nodes()), false), {}, 0, {}};
  e.recurse(0);
  return e.best;
}

BMatching iterated_b_matching(const DemandGraph& g, int b) {
  if (b < 1) throw std::invalid_argument("iterated_b_matching: b must be >= 1");
  BMatching out;
  out.bound = b;
  DemandGraph residual = g;
  for (int round = 0; round < b && residual.edge_count() > 0; ++round) {
    Matching m = mwm_exact(residual);
    if (m.pairs.empty()) break;
    for (RackPair p : m.pairs) {
      out.pairs.push_back(p);
      residual.remove(p);
    }
    out.weight += m.weight;
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

DemandGraph top_m_truncate(const DemandGraph& g, int m) {
  if (m < 1) throw std::invalid_argument("top_m_truncate: m must be >= 1");
  std::vector<std::vector<std::pair<RackPair, Bytes>>> by_node(static_cast<std::size_t>(g.nodes()));
  for (const auto& e : g.edges()) {
    by_node[e.first.lo].push_back(e);
    by_node[e.first.hi].push_back(e);
  }
  DemandGraph out(g.nodes());
  for (auto& list : by_node) {
    const auto keep = std::min<std::size_t>(list.size(), static_cast<std::size_t>(m));
    std::partial_sort(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(keep), list.end(),
                      [](const auto& a, const auto& b) {
                        return a.second != b.second ? a.second > b.second : a.first < b.first;
                      });
    for (std::size_t i = 0; i < keep; ++i) out.set_weight(list[i].first.lo, list[i].first.hi, list[i].second);
  }
  return out;
}

bool is_b_matching(const std::vector<RackPair>& pairs, int nodes, int bound) {
  std::vector<int> deg(static_cast<std::size_t>(nodes), 0);
  std::set<RackPair> seen;
  for (RackPair p : pairs) {
    if (p.lo == p.hi || p.lo < 0 || p.hi >= nodes || !seen.insert(p).second) return false;
    if (++deg[p.lo] > bound || ++deg[p.hi] > bound) return false;
  }
  return true;
}

}  // namespace ocs
