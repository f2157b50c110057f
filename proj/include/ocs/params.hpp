#pragma once

#include "ocs/types.hpp"

namespace ocs {

/// Scheduler and fabric parameters shared by every policy.
///
/// Times are integer slots; `slot_len_s` only matters when converting
/// bit rates into bytes per slot.
struct SchedulerParams {
  int racks = 16;              // n
  int degree = 1;              // k, circuits per node
  Slot epoch = 3;              // T, centralized epoch
  Slot central_delay = 3;      // Delta
  Slot dist_delay = 1;         // delta
  Slot central_window = 3;     // A
  Slot dist_window = 1;        // a
  double alpha = 0.7;          // threshold for keeping centralized circuits
  int top_m = 5;               // flows reported per ToR to the controller
  int max_reqs = 2;            // request budget per node per round
  double slot_len_s = 1e-3;
  Bytes circuit_cap = 1'250'000;  // 10 Gbps over a 1 ms slot

  /// Defaults for a given size: T = Delta = A = 3, a = delta = 1,
  /// m = min(5, n-1), max_reqs = 2k.
  static SchedulerParams defaults(int racks, int degree);

  /// Throws std::invalid_argument naming the first offending field.
  void validate() const;
};

/// Bytes a link of `bits_per_second` carries in one slot (floored).
Bytes bytes_per_slot(double bits_per_second, double slot_len_s);

}  // namespace ocs
