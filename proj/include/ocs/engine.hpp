#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocs/circuit_state.hpp"
#include "ocs/params.hpp"
#include "ocs/sched_dist.hpp"
#include "ocs/trace.hpp"

namespace ocs {

enum class PolicyKind { CentralizedOnly, DistributedOnly, Hybrid, OnlineOptimal, OptimalFuture };

/// Names: centralized, distributed, hybrid, online-optimal, optimal-future.
const char* to_string(PolicyKind k);
/// Throws std::invalid_argument for unknown names.
PolicyKind parse_policy(std::string_view name);

struct Policy {
  PolicyKind kind = PolicyKind::Hybrid;
  SchedulerParams params;
};

/// Parameters the policy actually runs with. OnlineOptimal decides every
/// slot on the previous slot's full demand graph with no delay.
SchedulerParams effective_params(const Policy& policy);

struct EngineOptions {
  bool reconf_penalty = true;
  bool keep_series = true;
  std::vector<ProtocolMessage>* message_log = nullptr;
  std::function<bool(const ProtocolMessage&)> drop_request;
  /// Called after each slot's circuits are final.
  std::function<void(Slot, const CircuitState&)> on_slot;
};

/// Capacity lost on a circuit's first slot: 11 us out of a 1 ms slot.
Bytes reconfiguration_haircut(Bytes circuit_cap);

struct SlotMetrics {
  Slot slot = 0;
  Bytes total = 0;
  Bytes optical = 0;
  Bytes optical_central = 0;
  Bytes optical_distributed = 0;
  int circuits = 0;
  int reconfigured = 0;  // |C_t xor C_{t-1}|
};

struct MetricsReport {
  std::string policy;
  int racks = 0;
  int degree = 0;
  Slot slots = 0;
  Bytes total_bytes = 0;
  Bytes optical_bytes = 0;
  Bytes electrical_bytes = 0;
  Bytes optical_central_bytes = 0;
  Bytes optical_distributed_bytes = 0;
  std::int64_t reconfigurations = 0;
  double optical_throughput_ratio = 0.0;
  /// Mean over slots of |C_t xor C_{t-1}| / (n k): changed pairs over twice
  /// the maximum circuit count, so a full swap scores 1.
  double reconfig_ratio = 0.0;
  /// Same count normalised by n instead of n k.
  double reconfig_ratio_per_node = 0.0;
  std::vector<SlotMetrics> series;
};

class Engine {
 public:
  Engine(const TrafficTrace& trace, Policy policy, EngineOptions options = {});

  /// Advances exactly one slot; slots must be stepped in order from 0.
  void step();
  Slot now() const { return now_; }
  const CircuitState& circuits() const { return circuits_; }
  const MetricsReport& report() const { return report_; }
  /// Steps through the end of the trace and returns the final report.
  MetricsReport finish();

 private:
  void apply_central();
  void apply_optimal_future();
  void account(const CircuitState& prev);

  const TrafficTrace* trace_;
  Policy policy_;
  SchedulerParams params_;
  EngineOptions options_;
  CircuitState circuits_;
  std::vector<NodeState> states_;
  std::optional<EpochBaseline> baselines_;
  MetricsReport report_;
  double reconfig_sum_ = 0.0;
  Slot now_ = 0;
};

MetricsReport run(const TrafficTrace& trace, const Policy& policy, const EngineOptions& options = {});

/// One report per policy, all replaying the same trace.
std::vector<MetricsReport> compare(const TrafficTrace& trace, const std::vector<Policy>& policies,
                                   const EngineOptions& options = {});

std::vector<std::string> summary_columns();
std::vector<std::string> summary_values(const MetricsReport& r);
void write_summary_csv(std::ostream& os, const std::vector<MetricsReport>& reports);
void write_series_csv(std::ostream& os, const MetricsReport& r);

/// Shortest round-trip decimal text for a double.
std::string format_double(double v);

}  // namespace ocs
