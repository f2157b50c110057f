#pragma once

#include <functional>
#include <iosfwd>
#include <set>
#include <span>
#include <vector>

#include "ocs/circuit_state.hpp"
#include "ocs/params.hpp"
#include "ocs/trace.hpp"

namespace ocs {

struct NodeState {
  Rack id = 0;
  std::set<Rack> cur_nodes;
  std::set<Rack> centralized_nodes;
  std::set<Rack> matched_nodes;
  std::set<Rack> req_nodes;
  std::set<Rack> received_reqs;
  std::set<Rack> grants;   // grants received
  std::set<Rack> denies;   // denies received
  std::set<Rack> granted;  // grants sent
  bool grant_sent = false;
};

enum class MessageKind { Request, Grant, Deny };

const char* to_string(MessageKind k);

struct ProtocolMessage {
  MessageKind kind;
  Rack from;
  Rack to;
  Slot slot;
  bool operator==(const ProtocolMessage&) const = default;
};

/// One line per message: `slot,kind,from,to`.
void write_message_log(std::ostream& os, const std::vector<ProtocolMessage>& log);

/// r_ij: bidirectional bytes over [now - delta - a, now - delta) divided by a.
double local_rate(const DelayedView& view, Rack i, Rack j, Slot now, const SchedulerParams& params);

/// Centralized neighbours still carrying at least alpha times their baseline.
/// `rates` is indexed by peer id.
std::set<Rack> threshold_filter(const NodeState& state, std::span<const double> rates, const EpochBaseline& baselines,
                                double alpha);

/// Up to max_reqs peers with positive volume, heaviest first (ties by id),
/// never a matched neighbour.
std::set<Rack> select_requests(const NodeState& state, std::span<const double> volumes, int max_reqs);

struct GrantDecision {
  std::set<Rack> granted;
  std::set<Rack> rejected;
};

/// Grants the heaviest mutual requesters up to the free degree and rejects
/// every other requester. Records the grants in `state`.
GrantDecision grant_phase(NodeState& state, std::span<const double> volumes, int degree);

struct CircuitDelta {
  std::set<Rack> connects;
  std::set<Rack> disconnects;
};

/// Applies mutual grants locally. Throws ProtocolError when replies are
/// missing or the grant phase has not run.
CircuitDelta execute_decisions(NodeState& state);

struct DistOptions {
  std::vector<ProtocolMessage>* log = nullptr;
  /// Returns true to drop a request in flight; the sender then treats the
  /// missing reply as a deny.
  std::function<bool(const ProtocolMessage&)> drop_request;
};

struct RoundStats {
  std::size_t messages = 0;
  int exchanges = 0;
};

/// Fresh per-node states matching `circuits`, with no centralized neighbours.
std::vector<NodeState> make_node_states(const CircuitState& circuits);

/// Records `pairs` as every node's centralized neighbour set.
void set_centralized(std::vector<NodeState>& states, const std::vector<RackPair>& pairs);

/// One synchronous protocol round across all nodes. `baselines` may be null
/// when no node has centralized neighbours.
RoundStats run_distributed_slot(std::vector<NodeState>& states, CircuitState& circuits, const DelayedView& view,
                                const EpochBaseline* baselines, const SchedulerParams& params, Slot now,
                                const DistOptions& opts = {});

}  // namespace ocs
