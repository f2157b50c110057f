#include "ocs/circuit_state.hpp"

#include <algorithm>
#include <string>

namespace ocs {

namespace {
std::string pair_str(RackPair p) { return "{" + std::to_string(p.lo) + "," + std::to_string(p.hi) + "}"; }

void insert_sorted(std::vector<Rack>& v, Rack r) { v.insert(std::lower_bound(v.begin(), v.end(), r), r); }

void erase_sorted(std::vector<Rack>& v, Rack r) {
  auto it = std::lower_bound(v.begin(), v.end(), r);
  if (it != v.end() && *it == r) v.erase(it);
}
}  // namespace

CircuitState::CircuitState(int racks, int degree) : degree_(degree), dest_(static_cast<std::size_t>(racks)) {
  if (racks < 2 || degree < 1) throw std::invalid_argument("CircuitState: need racks >= 2 and degree >= 1");
}

void CircuitState::check_pair(RackPair p) const {
  if (p.lo == p.hi) throw ProtocolError("circuit " + pair_str(p) + " is a self-pair");
  if (p.lo < 0 || p.hi >= racks()) throw std::out_of_range("circuit " + pair_str(p) + " references unknown rack");
}

void CircuitState::connect(RackPair p, Origin origin) {
  check_pair(p);
  if (auto it = circuits_.find(p); it != circuits_.end()) {
    it->second = origin;
    return;
  }
  for (Rack r : {p.lo, p.hi})
    if (static_cast<int>(dest_[r].size()) >= degree_)
      throw ProtocolError("connecting " + pair_str(p) + " exceeds degree " + std::to_string(degree_) +
                          " at rack " + std::to_string(r));
  circuits_.emplace(p, origin);
  insert_sorted(dest_[p.lo], p.hi);
  insert_sorted(dest_[p.hi], p.lo);
}

void CircuitState::disconnect(RackPair p) {
  if (circuits_.erase(p) == 0) return;
  erase_sorted(dest_[p.lo], p.hi);
  erase_sorted(dest_[p.hi], p.lo);
}

void CircuitState::set_origin(RackPair p, Origin origin) {
  auto it = circuits_.find(p);
  if (it == circuits_.end()) throw ProtocolError("set_origin on missing circuit " + pair_str(p));
  it->second = origin;
}

void CircuitState::clear() {
  circuits_.clear();
  for (auto& d : dest_) d.clear();
}

std::optional<Origin> CircuitState::origin(RackPair p) const {
  if (auto it = circuits_.find(p); it != circuits_.end()) return it->second;
  return std::nullopt;
}

std::vector<RackPair> CircuitState::pairs() const {
  std::vector<RackPair> out;
  out.reserve(circuits_.size());
  for (const auto& [p, o] : circuits_) out.push_back(p);
  return out;
}

void CircuitState::validate() const {
  std::size_t endpoint_count = 0;
  for (Rack i = 0; i < racks(); ++i) {
    const auto& d = dest_[i];
    if (static_cast<int>(d.size()) > degree_)
      throw ProtocolError("rack " + std::to_string(i) + " has degree " + std::to_string(d.size()));
    for (Rack j : d) {
      if (j == i) throw ProtocolError("rack " + std::to_string(i) + " lists itself");
      if (!std::binary_search(dest_[j].begin(), dest_[j].end(), i))
        throw ProtocolError("asymmetric circuit " + pair_str({i, j}));
      if (!circuits_.contains(RackPair(i, j))) throw ProtocolError("dest/pair map mismatch at " + pair_str({i, j}));
    }
    endpoint_count += d.size();
  }
  if (endpoint_count != 2 * circuits_.size()) throw ProtocolError("pair map holds circuits missing from dest sets");
}

bool CircuitState::same_pairs(const CircuitState& other) const {
  if (circuits_.size() != other.circuits_.size()) return false;
  return std::equal(circuits_.begin(), circuits_.end(), other.circuits_.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; });
}

std::size_t symmetric_difference_size(const CircuitState& a, const CircuitState& b) {
  std::size_t diff = 0;
  auto ia = a.circuits().begin(), ib = b.circuits().begin();
  const auto ea = a.circuits().end(), eb = b.circuits().end();
  while (ia != ea && ib != eb) {
    if (ia->first < ib->first) {
      ++diff;
      ++ia;
    } else if (ib->first < ia->first) {
      ++diff;
      ++ib;
    } else {
      ++ia;
      ++ib;
    }
  }
  return diff + static_cast<std::size_t>(std::distance(ia, ea)) + static_cast<std::size_t>(std::distance(ib, eb));
}

double EpochBaseline::rate(RackPair p) const {
  auto it = rates.find(p);
  if (it == rates.end()) throw ProtocolError("no baseline for circuit " + pair_str(p));
  return it->second;
}

}  // namespace ocs
