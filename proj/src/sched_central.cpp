#include "ocs/sched_central.hpp"

#include <stdexcept>

namespace ocs {

DemandGraph window_graph(const DelayedView& view, Slot end, Slot len) {
  DemandGraph g(view.racks());
  for (Rack i = 0; i < view.racks(); ++i)
    for (Rack j = i + 1; j < view.racks(); ++j) g.set_weight(i, j, view.window_sum(i, j, end, len));
  return g;
}

CentralAllocation central_compute(const DelayedView& view, const SchedulerParams& params, Slot now) {
  if (now < 0 || now % params.epoch != 0)
    throw std::invalid_argument("central_compute: slot " + std::to_string(now) + " is not an epoch boundary");
  if (view.now() != now) throw std::invalid_argument("central_compute: view is anchored at a different slot");
  if (view.delay() < params.central_delay)
    throw VisibilityError("central_compute: view delay " + std::to_string(view.delay()) + " is below Delta");

  const Slot end = now - params.central_delay;
  const DemandGraph full = window_graph(view, end, params.central_window);
  const DemandGraph reported = top_m_truncate(full, params.top_m);

  CentralAllocation out;
  out.pairs = iterated_b_matching(reported, params.degree);
  out.decided_at = end;
  out.effective_at = now;
  out.baselines.epoch_start = now;
  for (const RackPair p : out.pairs.pairs)
    out.baselines.rates[p] = static_cast<double>(full.weight(p)) / static_cast<double>(params.central_window);
  return out;
}

std::vector<EpochWindow> epoch_schedule(const SchedulerParams& params, Slot horizon) {
  params.validate();
  std::vector<EpochWindow> out;
  for (Slot apply = 0; apply < horizon; apply += params.epoch) {
    const Slot decide = apply - params.central_delay;
    out.push_back({apply, decide, decide - params.central_window, decide});
  }
  return out;
}

}  // namespace ocs
