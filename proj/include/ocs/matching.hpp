#pragma once

#include <vector>

#include "ocs/demand_graph.hpp"

namespace ocs {

struct Matching {
  std::vector<RackPair> pairs;  // sorted
  Bytes weight = 0;
};

struct BMatching {
  std::vector<RackPair> pairs;  // sorted
  int bound = 1;
  Bytes weight = 0;
};

/// Maximum-weight matching (not necessarily maximum cardinality).
///
/// Among equal-weight optima the result prefers the matching that contains
/// the lexicographically smallest pair of the two sets' symmetric
/// difference. That preference is exact whenever the graph's weights can be
/// perturbed within 128-bit arithmetic (edge count + log2 of total weight
/// below ~120, e.g. every graph with n <= 15); beyond that the result is
/// still deterministic but the tie rule is not guaranteed.
Matching mwm_exact(const DemandGraph& g);

/// Exhaustive enumeration with the same tie rule as mwm_exact. n <= 12.
Matching mwm_oracle(const DemandGraph& g);

/// Union of b successive maximum-weight matchings, each computed on the
/// graph with the previous rounds' edges removed.
BMatching iterated_b_matching(const DemandGraph& g, int b);

/// Keeps an edge iff it is among the m heaviest edges of either endpoint
/// (weight descending, then pair order).
DemandGraph top_m_truncate(const DemandGraph& g, int m);

/// True iff `a` beats `b` under the shared equal-weight tie rule.
bool tie_preferred(const std::vector<RackPair>& a, const std::vector<RackPair>& b);

/// Every node appears in at most `bound` pairs and no pair repeats.
bool is_b_matching(const std::vector<RackPair>& pairs, int nodes, int bound);

}  // namespace ocs
