#include "ocs/engine.hpp"

#include <charconv>
#include <ostream>
#include <stdexcept>

#include "ocs/matching.hpp"
#include "ocs/sched_central.hpp"

namespace ocs {

namespace {
constexpr std::pair<PolicyKind, const char*> kPolicyNames[] = {
    {PolicyKind::CentralizedOnly, "centralized"},
    {PolicyKind::DistributedOnly, "distributed"},
    {PolicyKind::Hybrid, "hybrid"},
    {PolicyKind::OnlineOptimal, "online-optimal"},
    {PolicyKind::OptimalFuture, "optimal-future"},
};

bool uses_central(PolicyKind k) {
  return k == PolicyKind::CentralizedOnly || k == PolicyKind::Hybrid || k == PolicyKind::OnlineOptimal;
}
bool uses_distributed(PolicyKind k) { return k == PolicyKind::DistributedOnly || k == PolicyKind::Hybrid; }
}  // namespace

const char* to_string(PolicyKind k) {
  for (const auto& [kind, name] : kPolicyNames)
    if (kind == k) return name;
  return "?";
}

PolicyKind parse_policy(std::string_view name) {
  for (const auto& [kind, n] : kPolicyNames)
    if (name == n) return kind;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected centralized, distributed, hybrid, online-optimal or optimal-future)");
}

SchedulerParams effective_params(const Policy& policy) {
  SchedulerParams p = policy.params;
  if (policy.kind == PolicyKind::OnlineOptimal) {
    p.epoch = 1;
    p.central_delay = 0;
    p.dist_delay = 0;
    p.central_window = 1;
    p.top_m = p.racks - 1;
  }
  p.validate();
  return p;
}

Bytes reconfiguration_haircut(Bytes circuit_cap) { return circuit_cap * 11 / 1000; }

Engine::Engine(const TrafficTrace& trace, Policy policy, EngineOptions options)
    : trace_(&trace),
      policy_(policy),
      params_(effective_params(policy)),
      options_(std::move(options)),
      circuits_(params_.racks, params_.degree) {
  if (trace.racks() != params_.racks)
    throw std::invalid_argument("engine: trace has " + std::to_string(trace.racks()) + " racks, params say " +
                                std::to_string(params_.racks));
  states_ = make_node_states(circuits_);
  report_.policy = to_string(policy.kind);
  report_.racks = params_.racks;
  report_.degree = params_.degree;
}

void Engine::apply_central() {
  const auto alloc = central_compute(DelayedView(*trace_, now_, params_.central_delay), params_, now_);
  circuits_.clear();
  for (const RackPair p : alloc.pairs.pairs) circuits_.connect(p, Origin::Centralized);
  baselines_ = alloc.baselines;
  set_centralized(states_, alloc.pairs.pairs);
}

void Engine::apply_optimal_future() {
  DemandGraph g(params_.racks);
  for (Rack i = 0; i < params_.racks; ++i)
    for (Rack j = i + 1; j < params_.racks; ++j)
      g.set_weight(i, j, std::min(trace_->pair_demand(now_, RackPair(i, j)), params_.circuit_cap));
  const auto m = iterated_b_matching(g, params_.degree);
  circuits_.clear();
  for (const RackPair p : m.pairs) circuits_.connect(p, Origin::Centralized);
}

void Engine::account(const CircuitState& prev) {
  SlotMetrics s;
  s.slot = now_;
  for (const Bytes b : trace_->slot_matrix(now_)) s.total += b;
  const Bytes haircut = options_.reconf_penalty ? reconfiguration_haircut(params_.circuit_cap) : 0;
  for (const auto& [pair, origin] : circuits_.circuits()) {
    const Bytes cap = prev.contains(pair) ? params_.circuit_cap : params_.circuit_cap - haircut;
    const Bytes carried = std::min(trace_->pair_demand(now_, pair), cap);
    s.optical += carried;
    (origin == Origin::Centralized ? s.optical_central : s.optical_distributed) += carried;
  }
  s.circuits = static_cast<int>(circuits_.size());
  s.reconfigured = static_cast<int>(symmetric_difference_size(circuits_, prev));

  report_.total_bytes += s.total;
  report_.optical_bytes += s.optical;
  report_.optical_central_bytes += s.optical_central;
  report_.optical_distributed_bytes += s.optical_distributed;
  report_.reconfigurations += s.reconfigured;
  reconfig_sum_ += s.reconfigured;
  if (options_.keep_series) report_.series.push_back(s);
}

void Engine::step() {
  if (now_ >= trace_->slots()) throw std::out_of_range("engine: stepped past the end of the trace");
  const CircuitState prev = circuits_;
  const PolicyKind kind = policy_.kind;

  if (kind == PolicyKind::OptimalFuture) {
    apply_optimal_future();
  } else if (uses_central(kind) && now_ % params_.epoch == 0) {
    apply_central();
  }
  if (uses_distributed(kind)) {
    DistOptions opts;
    opts.log = options_.message_log;
    opts.drop_request = options_.drop_request;
    run_distributed_slot(states_, circuits_, DelayedView(*trace_, now_, params_.dist_delay),
                         baselines_ ? &*baselines_ : nullptr, params_, now_, opts);
  }
  circuits_.validate();
  account(prev);
  if (options_.on_slot) options_.on_slot(now_, circuits_);
  ++now_;
}

MetricsReport Engine::finish() {
  while (now_ < trace_->slots()) step();
  MetricsReport r = report_;
  r.slots = now_;
  r.electrical_bytes = r.total_bytes - r.optical_bytes;
  r.optical_throughput_ratio =
      r.total_bytes > 0 ? static_cast<double>(r.optical_bytes) / static_cast<double>(r.total_bytes) : 0.0;
  if (now_ > 0) {
    r.reconfig_ratio = reconfig_sum_ / (static_cast<double>(params_.racks) * params_.degree) / static_cast<double>(now_);
    r.reconfig_ratio_per_node = reconfig_sum_ / static_cast<double>(params_.racks) / static_cast<double>(now_);
  }
  return r;
}

MetricsReport run(const TrafficTrace& trace, const Policy& policy, const EngineOptions& options) {
  Engine e(trace, policy, options);
  return e.finish();
}

std::vector<MetricsReport> compare(const TrafficTrace& trace, const std::vector<Policy>& policies,
                                   const EngineOptions& options) {
  std::vector<MetricsReport> out;
  out.reserve(policies.size());
  for (const auto& p : policies) out.push_back(run(trace, p, options));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::vector<std::string> summary_columns() {
  return {"policy",
          "racks",
          "degree",
          "slots",
          "total_bytes",
          "optical_bytes",
          "electrical_bytes",
          "optical_central_bytes",
          "optical_distributed_bytes",
          "optical_throughput_ratio",
          "reconfig_ratio",
          "reconfig_ratio_per_node",
          "reconfigurations"};
}

std::vector<std::string> summary_values(const MetricsReport& r) {
  return {r.policy,
          std::to_string(r.racks),
          std::to_string(r.degree),
          std::to_string(r.slots),
          std::to_string(r.total_bytes),
          std::to_string(r.optical_bytes),
          std::to_string(r.electrical_bytes),
          std::to_string(r.optical_central_bytes),
          std::to_string(r.optical_distributed_bytes),
          format_double(r.optical_throughput_ratio),
          format_double(r.reconfig_ratio),
          format_double(r.reconfig_ratio_per_node),
          std::to_string(r.reconfigurations)};
}

namespace {
void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << '\n';
}
}  // namespace

void write_summary_csv(std::ostream& os, const std::vector<MetricsReport>& reports) {
  write_row(os, summary_columns());
  for (const auto& r : reports) write_row(os, summary_values(r));
}

void write_series_csv(std::ostream& os, const MetricsReport& r) {
  os << "slot,total_bytes,optical_bytes,optical_central_bytes,optical_distributed_bytes,circuits,reconfigured\n";
  for (const auto& s : r.series)
    os << s.slot << ',' << s.total << ',' << s.optical << ',' << s.optical_central << ',' << s.optical_distributed
       << ',' << s.circuits << ',' << s.reconfigured << '\n';
}

}  // namespace ocs
