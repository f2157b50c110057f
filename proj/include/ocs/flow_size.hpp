#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ocs/random.hpp"
#include "ocs/types.hpp"

namespace ocs {

struct BoundedPareto {
  double shape;
  double min;
  double max;
};

struct LogNormal {
  double mu;
  double sigma;
};

/// Piecewise-linear CDF: point mass p0 at the first size, linear between
/// consecutive points.
struct EmpiricalCdf {
  std::vector<std::pair<double, double>> points;  // (size bytes, cumulative prob)
};

class FlowSizeDistribution {
 public:
  using Variant = std::variant<BoundedPareto, LogNormal, EmpiricalCdf>;

  static FlowSizeDistribution bounded_pareto(double shape, double min, double max);
  static FlowSizeDistribution lognormal(double mu, double sigma);
  static FlowSizeDistribution empirical(std::vector<std::pair<double, double>> points);
  /// Two-column CSV `size_bytes,cum_prob`; a non-numeric first line is a header.
  static FlowSizeDistribution empirical_csv(std::istream& is);

  const Variant& variant() const { return variant_; }
  double mean() const { return mean_; }
  /// Same shape, sizes rescaled so the analytic mean becomes `mean`.
  FlowSizeDistribution scaled_to_mean(double mean) const;
  /// Whole bytes, at least 1.
  Bytes sample(Rng& rng) const;

 private:
  FlowSizeDistribution(Variant v, double mean) : variant_(std::move(v)), mean_(mean) {}

  Variant variant_;
  double mean_;
};

double bounded_pareto_mean(double shape, double min, double max);

/// HULL-like Pareto tail cutoff, as a multiple of the mean.
inline constexpr double kDefaultParetoCutoff = 1e4;

/// Named workload families scaled to `mean_bytes`:
///  - "hull":    bounded Pareto, shape 1.05, max = cutoff * mean
///  - "pfabric": lognormal with std/mean = 3.9/1.7
///  - "vl2":     lognormal with std/mean = 85/12
FlowSizeDistribution make_distribution(std::string_view name, double mean_bytes,
                                       double pareto_cutoff = kDefaultParetoCutoff);

/// Anchor mean of each named family (100 KB, 1.7 MB, 12 MB).
double anchor_mean(std::string_view name);

}  // namespace ocs
