#include "ocs/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ocs {

SchedulerParams SchedulerParams::defaults(int racks, int degree) {
  SchedulerParams p;
  p.racks = racks;
  p.degree = degree;
  p.top_m = std::max(1, std::min(5, racks - 1));
  p.max_reqs = 2 * degree;
  return p;
}

namespace {
void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw std::invalid_argument(std::string(field) + ": " + what);
}
}  // namespace

void SchedulerParams::validate() const {
  require(racks >= 2, "racks", "need at least 2 racks");
  require(degree >= 1 && degree < racks, "degree", "must satisfy 1 <= k < n");
  require(epoch >= 1, "epoch", "must be >= 1");
  require(dist_delay >= 0, "dist_delay", "must be >= 0");
  require(central_delay >= dist_delay, "central_delay", "must be >= dist_delay");
  require(central_window >= 1, "central_window", "must be >= 1");
  require(dist_window >= 1, "dist_window", "must be >= 1");
  require(std::isfinite(alpha) && alpha >= 0.0, "alpha", "must be a finite value >= 0");
  require(top_m >= 1 && top_m <= racks - 1, "top_m", "must satisfy 1 <= m <= n-1");
  require(max_reqs > degree, "max_reqs", "must exceed the degree");
  require(slot_len_s > 0.0, "slot_len_s", "must be positive");
  require(circuit_cap > 0, "circuit_cap", "must be positive");
}

Bytes bytes_per_slot(double bits_per_second, double slot_len_s) {
  return static_cast<Bytes>(std::floor(bits_per_second * slot_len_s / 8.0 + 1e-9));
}

}  // namespace ocs
