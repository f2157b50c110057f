#include "ocs/sched_dist.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ocs {

const char* to_string(MessageKind k) {
  switch (k) {
    case MessageKind::Request:
      return "request";
    case MessageKind::Grant:
      return "grant";
    case MessageKind::Deny:
      return "deny";
  }
  return "?";
}

void write_message_log(std::ostream& os, const std::vector<ProtocolMessage>& log) {
  os << "slot,kind,from,to\n";
  for (const auto& m : log) os << m.slot << ',' << to_string(m.kind) << ',' << m.from << ',' << m.to << '\n';
}

double local_rate(const DelayedView& view, Rack i, Rack j, Slot now, const SchedulerParams& params) {
  return static_cast<double>(view.window_sum(i, j, now - params.dist_delay, params.dist_window)) /
         static_cast<double>(params.dist_window);
}

std::set<Rack> threshold_filter(const NodeState& state, std::span<const double> rates, const EpochBaseline& baselines,
                                double alpha) {
  std::set<Rack> matched;
  for (Rack p : state.cur_nodes) {
    if (!state.centralized_nodes.contains(p)) continue;
    const double base = baselines.rate(RackPair(state.id, p));
    if (rates[static_cast<std::size_t>(p)] >= alpha * base) matched.insert(p);
  }
  return matched;
}

namespace {

// Heaviest first, ties by lower id.
std::vector<Rack> rank_by_volume(const std::set<Rack>& peers, std::span<const double> volumes) {
  std::vector<Rack> out(peers.begin(), peers.end());
  std::stable_sort(out.begin(), out.end(), [&](Rack a, Rack b) {
    return volumes[static_cast<std::size_t>(a)] > volumes[static_cast<std::size_t>(b)];
  });
  return out;
}

}  // namespace

std::set<Rack> select_requests(const NodeState& state, std::span<const double> volumes, int max_reqs) {
  std::set<Rack> eligible;
  for (Rack p = 0; p < static_cast<Rack>(volumes.size()); ++p)
    if (p != state.id && volumes[static_cast<std::size_t>(p)] > 0.0 && !state.matched_nodes.contains(p))
      eligible.insert(p);
  const auto ranked = rank_by_volume(eligible, volumes);
  const auto take = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(std::max(0, max_reqs)));
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take)};
}

GrantDecision grant_phase(NodeState& state, std::span<const double> volumes, int degree) {
  const int free_links = std::max(0, degree - static_cast<int>(state.matched_nodes.size()));
  std::set<Rack> candidates;
  std::set_intersection(state.req_nodes.begin(), state.req_nodes.end(), state.received_reqs.begin(),
                        state.received_reqs.end(), std::inserter(candidates, candidates.end()));
  const auto ranked = rank_by_volume(candidates, volumes);
  GrantDecision d;
  for (std::size_t i = 0; i < ranked.size() && static_cast<int>(i) < free_links; ++i) d.granted.insert(ranked[i]);
  std::set_difference(state.received_reqs.begin(), state.received_reqs.end(), d.granted.begin(), d.granted.end(),
                      std::inserter(d.rejected, d.rejected.end()));
  state.granted = d.granted;
  state.grant_sent = true;
  return d;
}

CircuitDelta execute_decisions(NodeState& state) {
  if (!state.grant_sent) throw ProtocolError("execute_decisions: node " + std::to_string(state.id) + " has not granted");
  std::set<Rack> replied;
  std::set_union(state.grants.begin(), state.grants.end(), state.denies.begin(), state.denies.end(),
                 std::inserter(replied, replied.end()));
  if (replied != state.req_nodes)
    throw ProtocolError("execute_decisions: node " + std::to_string(state.id) + " is missing replies");

  std::set<Rack> new_nodes;
  std::set_intersection(state.granted.begin(), state.granted.end(), state.grants.begin(), state.grants.end(),
                        std::inserter(new_nodes, new_nodes.end()));
  CircuitDelta delta;
  for (Rack p : new_nodes)
    if (!state.cur_nodes.contains(p)) delta.connects.insert(p);
  for (Rack p : state.cur_nodes)
    if (!new_nodes.contains(p) && !state.matched_nodes.contains(p)) delta.disconnects.insert(p);

  for (Rack p : delta.disconnects) state.cur_nodes.erase(p);
  state.cur_nodes.insert(delta.connects.begin(), delta.connects.end());
  state.received_reqs.clear();
  state.grant_sent = false;
  return delta;
}

std::vector<NodeState> make_node_states(const CircuitState& circuits) {
  std::vector<NodeState> states(static_cast<std::size_t>(circuits.racks()));
  for (Rack i = 0; i < circuits.racks(); ++i) {
    states[i].id = i;
    const auto d = circuits.dest(i);
    states[i].cur_nodes = {d.begin(), d.end()};
  }
  return states;
}

void set_centralized(std::vector<NodeState>& states, const std::vector<RackPair>& pairs) {
  for (auto& s : states) s.centralized_nodes.clear();
  for (const RackPair p : pairs) {
    states.at(static_cast<std::size_t>(p.lo)).centralized_nodes.insert(p.hi);
    states.at(static_cast<std::size_t>(p.hi)).centralized_nodes.insert(p.lo);
  }
}

RoundStats run_distributed_slot(std::vector<NodeState>& states, CircuitState& circuits, const DelayedView& view,
                                const EpochBaseline* baselines, const SchedulerParams& params, Slot now,
                                const DistOptions& opts) {
  const int n = circuits.racks();
  if (static_cast<int>(states.size()) != n) throw std::invalid_argument("run_distributed_slot: one state per rack");
  if (view.delay() < params.dist_delay) throw VisibilityError("run_distributed_slot: view delay is below delta");

  RoundStats stats;
  auto emit = [&](MessageKind kind, Rack from, Rack to) {
    ++stats.messages;
    if (opts.log) opts.log->push_back({kind, from, to, now});
  };

  // rates[i][j]; symmetric because the window is bidirectional
  std::vector<std::vector<double>> rates(n, std::vector<double>(n, 0.0));
  for (Rack i = 0; i < n; ++i)
    for (Rack j = i + 1; j < n; ++j) rates[i][j] = rates[j][i] = local_rate(view, i, j, now, params);

  for (Rack i = 0; i < n; ++i) {
    auto& s = states[i];
    s.id = i;
    const auto d = circuits.dest(i);
    s.cur_nodes = {d.begin(), d.end()};
    s.received_reqs.clear();
    s.grants.clear();
    s.denies.clear();
    s.granted.clear();
    s.grant_sent = false;
    if (s.centralized_nodes.empty()) {
      s.matched_nodes.clear();
    } else {
      if (!baselines) throw ProtocolError("run_distributed_slot: centralized neighbours without baselines");
      s.matched_nodes = threshold_filter(s, rates[i], *baselines, params.alpha);
    }
    s.req_nodes = select_requests(s, rates[i], params.max_reqs);
  }

  // exchange 1: requests
  ++stats.exchanges;
  for (Rack i = 0; i < n; ++i)
    for (Rack p : states[i].req_nodes) {
      const ProtocolMessage m{MessageKind::Request, i, p, now};
      if (opts.drop_request && opts.drop_request(m)) continue;
      emit(m.kind, i, p);
      states[p].received_reqs.insert(i);
    }

  // exchange 2: grants and denies
  ++stats.exchanges;
  std::vector<GrantDecision> decisions(n);
  for (Rack i = 0; i < n; ++i) decisions[i] = grant_phase(states[i], rates[i], params.degree);
  for (Rack i = 0; i < n; ++i) {
    for (Rack p : decisions[i].granted) {
      emit(MessageKind::Grant, i, p);
      states[p].grants.insert(i);
    }
    for (Rack p : decisions[i].rejected) {
      emit(MessageKind::Deny, i, p);
      states[p].denies.insert(i);
    }
  }
  // requests that never got an answer time out as denies
  for (auto& s : states)
    for (Rack p : s.req_nodes)
      if (!s.grants.contains(p)) s.denies.insert(p);

  for (auto& s : states) execute_decisions(s);

  for (Rack i = 0; i < n; ++i) {
    const auto& s = states[i];
    if (static_cast<int>(s.cur_nodes.size()) > params.degree)
      throw ProtocolError("run_distributed_slot: node " + std::to_string(i) + " exceeds degree");
    for (Rack p : s.cur_nodes)
      if (!states[p].cur_nodes.contains(i))
        throw ProtocolError("run_distributed_slot: asymmetric circuit " + std::to_string(i) + "-" + std::to_string(p));
  }

  CircuitState next(n, circuits.degree());
  for (Rack i = 0; i < n; ++i)
    for (Rack p : states[i].cur_nodes)
      if (i < p) next.connect(RackPair(i, p), states[i].matched_nodes.contains(p) ? Origin::Centralized : Origin::Distributed);
  next.validate();
  circuits = std::move(next);
  return stats;
}

}  // namespace ocs
