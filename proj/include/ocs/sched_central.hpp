#pragma once

#include <vector>

#include "ocs/circuit_state.hpp"
#include "ocs/demand_graph.hpp"
#include "ocs/matching.hpp"
#include "ocs/params.hpp"
#include "ocs/trace.hpp"

namespace ocs {

struct CentralAllocation {
  BMatching pairs;
  EpochBaseline baselines;
  Slot decided_at = 0;   // last slot of visible data + 1, i.e. now - Delta
  Slot effective_at = 0;
};

/// Bidirectional demand summed over [end - len, end) for every rack pair.
DemandGraph window_graph(const DelayedView& view, Slot end, Slot len);

/// One centralized decision for the epoch starting at `now`.
///
/// Throws std::invalid_argument if `now` is not an epoch boundary and
/// VisibilityError if the view is fresher than now - Delta.
CentralAllocation central_compute(const DelayedView& view, const SchedulerParams& params, Slot now);

struct EpochWindow {
  Slot apply;
  Slot decide;        // apply - Delta
  Slot window_start;  // may be negative (zero-padded history)
  Slot window_end;    // exclusive
};

/// Apply slots 0, T, 2T, ... below `horizon` with the data window each uses.
std::vector<EpochWindow> epoch_schedule(const SchedulerParams& params, Slot horizon);

}  // namespace ocs
