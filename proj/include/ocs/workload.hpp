#pragma once

#include <cstdint>
#include <vector>

#include "ocs/flow_size.hpp"
#include "ocs/params.hpp"
#include "ocs/trace.hpp"
#include "ocs/types.hpp"

namespace ocs {

struct Dispersion {
  double hot_fraction = 0.1;
  double hot_weight = 0.7;
};

struct WorkloadConfig {
  int hosts_per_rack = 10;
  double host_rate_bps = 200e6;
  double host_link_bps = 1e9;
  double mean_flow_size = 1.7e6;
  Dispersion dispersion;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Flow {
  std::int64_t id = 0;
  Rack src = 0;
  Rack dst = 0;
  int host = 0;  // index within the source rack
  Bytes size = 0;
  Slot arrival = 0;
  Bytes remaining = 0;
  Bytes rate_cap = 0;
};

/// Flow arrivals per rack per second.
double arrival_rate(const WorkloadConfig& cfg);

/// Per-source hot destination sets, drawn once per seed.
std::vector<std::vector<Rack>> hot_sets(const WorkloadConfig& cfg, int racks);

/// Poisson arrivals in [0, horizon), sorted by arrival then id.
std::vector<Flow> generate_flows(const WorkloadConfig& cfg, const FlowSizeDistribution& dist, int racks,
                                 Slot horizon, double slot_len_s = 1e-3);

struct FluidResult {
  TrafficTrace trace;
  std::vector<Slot> completion;  // indexed by position in the sorted flow list
  std::vector<Flow> flows;       // sorted, with remaining = 0
};

/// Fluid fair-share transmission. Every flow drains, so the trace may run
/// past `horizon`; it always covers at least [0, horizon).
FluidResult build_trace(std::vector<Flow> flows, int racks, int hosts_per_rack, Bytes host_cap, Slot horizon);

TrafficTrace build_trace(const std::vector<Flow>& flows, const SchedulerParams& params, const WorkloadConfig& cfg,
                         Slot horizon);

/// generate_flows followed by build_trace.
TrafficTrace synthesize_trace(const WorkloadConfig& cfg, const FlowSizeDistribution& dist,
                              const SchedulerParams& params, Slot horizon);

}  // namespace ocs
