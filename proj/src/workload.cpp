#include "ocs/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ocs/random.hpp"

namespace ocs {

void WorkloadConfig::validate() const {
  auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
  if (hosts_per_rack < 1) fail("hosts_per_rack: must be >= 1");
  if (!(host_rate_bps >= 0.0) || !std::isfinite(host_rate_bps)) fail("host_rate: must be >= 0");
  if (!(host_link_bps > 0.0)) fail("host_link: must be > 0");
  if (!(mean_flow_size > 0.0)) fail("mean_flow_size: must be > 0");
  if (!(dispersion.hot_fraction > 0.0 && dispersion.hot_fraction <= 1.0)) fail("hot_fraction: must be in (0, 1]");
  if (!(dispersion.hot_weight >= 0.0 && dispersion.hot_weight <= 1.0)) fail("hot_weight: must be in [0, 1]");
}

double arrival_rate(const WorkloadConfig& cfg) {
  return cfg.hosts_per_rack * cfg.host_rate_bps / 8.0 / cfg.mean_flow_size;
}

namespace {
constexpr std::uint64_t kHotStream = 0x484f54;
constexpr std::uint64_t kSizeStream = 0x53495a45;
}  // namespace

std::vector<std::vector<Rack>> hot_sets(const WorkloadConfig& cfg, int racks) {
  std::vector<std::vector<Rack>> out(racks);
  if (racks < 2) return out;
  const int others = racks - 1;
  const int size = std::clamp(static_cast<int>(std::lround(cfg.dispersion.hot_fraction * others)), 1, others);
  Rng rng(derive_seed(cfg.seed, kHotStream));
  for (Rack s = 0; s < racks; ++s) {
    std::vector<Rack> cand;
    for (Rack d = 0; d < racks; ++d)
      if (d != s) cand.push_back(d);
    for (int i = 0; i < size; ++i) std::swap(cand[i], cand[i + uniform_index(rng, others - i)]);
    cand.resize(size);
    std::sort(cand.begin(), cand.end());
    out[s] = std::move(cand);
  }
  return out;
}

std::vector<Flow> generate_flows(const WorkloadConfig& cfg, const FlowSizeDistribution& dist, int racks,
                                 Slot horizon, double slot_len_s) {
  cfg.validate();
  if (horizon < 1) throw std::invalid_argument("generate_flows: horizon must be >= 1");
  if (racks < 2) throw std::invalid_argument("generate_flows: need at least 2 racks");
  const double rate = arrival_rate(cfg);
  std::vector<Flow> flows;
  if (rate <= 0.0) return flows;

  const auto hot = hot_sets(cfg, racks);
  const double end_s = static_cast<double>(horizon) * slot_len_s;
  struct Timed {
    double t;
    Flow f;
  };
  std::vector<Timed> timed;
  for (Rack s = 0; s < racks; ++s) {
    Rng arrivals(derive_seed(cfg.seed, static_cast<std::uint64_t>(s) + 1));
    Rng sizes(derive_seed(cfg.seed ^ kSizeStream, static_cast<std::uint64_t>(s) + 1));
    std::vector<Rack> cold;
    for (Rack d = 0; d < racks; ++d)
      if (d != s && !std::binary_search(hot[s].begin(), hot[s].end(), d)) cold.push_back(d);
    for (double t = exponential(arrivals, rate); t < end_s; t += exponential(arrivals, rate)) {
      Flow f;
      f.src = s;
      f.host = static_cast<int>(uniform_index(arrivals, cfg.hosts_per_rack));
      const bool to_hot = cold.empty() || unit_uniform(arrivals) < cfg.dispersion.hot_weight;
      const auto& pool = to_hot ? hot[s] : cold;
      f.dst = pool[uniform_index(arrivals, pool.size())];
      f.size = dist.sample(sizes);
      f.remaining = f.size;
      f.arrival = std::min<Slot>(horizon - 1, static_cast<Slot>(std::floor(t / slot_len_s)));
      timed.push_back({t, f});
    }
  }
  std::stable_sort(timed.begin(), timed.end(), [](const Timed& a, const Timed& b) {
    if (a.f.arrival != b.f.arrival) return a.f.arrival < b.f.arrival;
    if (a.t != b.t) return a.t < b.t;
    return a.f.src < b.f.src;
  });
  flows.reserve(timed.size());
  for (std::size_t i = 0; i < timed.size(); ++i) {
    timed[i].f.id = static_cast<std::int64_t>(i);
    flows.push_back(timed[i].f);
  }
  return flows;
}

FluidResult build_trace(std::vector<Flow> flows, int racks, int hosts_per_rack, Bytes host_cap, Slot horizon) {
  if (host_cap < 1) throw std::invalid_argument("build_trace: host capacity must be >= 1 byte per slot");
  std::stable_sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) {
    return a.arrival != b.arrival ? a.arrival < b.arrival : a.id < b.id;
  });
  for (const auto& f : flows) {
    if (f.src == f.dst || f.src < 0 || f.dst < 0 || f.src >= racks || f.dst >= racks)
      throw std::invalid_argument("build_trace: bad flow endpoints");
    if (f.host < 0 || f.host >= hosts_per_rack) throw std::invalid_argument("build_trace: bad host index");
    if (f.size < 0 || f.arrival < 0) throw std::invalid_argument("build_trace: negative size or arrival");
  }

  FluidResult res{TrafficTrace(racks), std::vector<Slot>(flows.size(), -1), {}};
  const int hosts = racks * hosts_per_rack;
  std::vector<std::vector<std::size_t>> active(hosts);
  std::vector<int> busy;  // hosts with active flows, kept sorted
  std::size_t next = 0, remaining_flows = flows.size();

  for (Slot t = 0; t < horizon || remaining_flows > 0; ++t) {
    res.trace.extend_to(t);
    for (; next < flows.size() && flows[next].arrival <= t; ++next) {
      auto& f = flows[next];
      f.remaining = f.size;
      if (f.size == 0) {
        res.completion[next] = t;
        --remaining_flows;
        continue;
      }
      const int h = f.src * hosts_per_rack + f.host;
      if (active[h].empty()) busy.insert(std::lower_bound(busy.begin(), busy.end(), h), h);
      active[h].push_back(next);
    }
    if (busy.empty() && next < flows.size() && t >= horizon) {
      t = flows[next].arrival - 1;  // skip idle gap past the horizon
      continue;
    }
    std::vector<int> still_busy;
    for (int h : busy) {
      auto& list = active[h];
      const Bytes share = std::max<Bytes>(1, host_cap / static_cast<Bytes>(list.size()));
      std::vector<std::size_t> keep;
      for (std::size_t idx : list) {
        auto& f = flows[idx];
        f.rate_cap = share;
        const Bytes sent = std::min(f.remaining, share);
        res.trace.record(t, f.src, f.dst, sent);
        f.remaining -= sent;
        if (f.remaining == 0) {
          res.completion[idx] = t;
          --remaining_flows;
        } else {
          keep.push_back(idx);
        }
      }
      list = std::move(keep);
      if (!list.empty()) still_busy.push_back(h);
    }
    busy = std::move(still_busy);
  }
  res.flows = std::move(flows);
  return res;
}

TrafficTrace build_trace(const std::vector<Flow>& flows, const SchedulerParams& params, const WorkloadConfig& cfg,
                         Slot horizon) {
  const Bytes cap = bytes_per_slot(cfg.host_link_bps, params.slot_len_s);
  return build_trace(flows, params.racks, cfg.hosts_per_rack, cap, horizon).trace;
}

TrafficTrace synthesize_trace(const WorkloadConfig& cfg, const FlowSizeDistribution& dist,
                              const SchedulerParams& params, Slot horizon) {
  return build_trace(generate_flows(cfg, dist, params.racks, horizon, params.slot_len_s), params, cfg, horizon);
}

}  // namespace ocs
