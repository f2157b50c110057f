#include "ocs/flow_size.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace ocs {

double bounded_pareto_mean(double shape, double min, double max) {
  const double ratio = min / max;
  if (std::abs(shape - 1.0) < 1e-12) return min * std::log(max / min) / (1.0 - ratio);
  return shape / (shape - 1.0) * min * (1.0 - std::pow(ratio, shape - 1.0)) / (1.0 - std::pow(ratio, shape));
}

FlowSizeDistribution FlowSizeDistribution::bounded_pareto(double shape, double min, double max) {
  if (!(shape > 0.0)) throw std::invalid_argument("bounded_pareto: shape must be > 0");
  if (!(min > 0.0 && min < max)) throw std::invalid_argument("bounded_pareto: need 0 < min < max");
  return {BoundedPareto{shape, min, max}, bounded_pareto_mean(shape, min, max)};
}

FlowSizeDistribution FlowSizeDistribution::lognormal(double mu, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("lognormal: need finite mu and sigma > 0");
  return {LogNormal{mu, sigma}, std::exp(mu + 0.5 * sigma * sigma)};
}

FlowSizeDistribution FlowSizeDistribution::empirical(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw std::invalid_argument("empirical cdf: no points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [s, p] = points[i];
    if (!(s >= 1.0) || !(p > 0.0) || p > 1.0) throw std::invalid_argument("empirical cdf: sizes must be >= 1 and probs in (0,1]");
    if (i > 0 && !(s > points[i - 1].first && p > points[i - 1].second))
      throw std::invalid_argument("empirical cdf: points must be strictly increasing in size and probability");
  }
  if (std::abs(points.back().second - 1.0) > 1e-12) throw std::invalid_argument("empirical cdf: last probability must be 1");
  points.back().second = 1.0;
  double mean = points[0].first * points[0].second;
  for (std::size_t i = 1; i < points.size(); ++i)
    mean += (points[i].second - points[i - 1].second) * 0.5 * (points[i].first + points[i - 1].first);
  return {EmpiricalCdf{std::move(points)}, mean};
}

FlowSizeDistribution FlowSizeDistribution::empirical_csv(std::istream& is) {
  std::vector<std::pair<double, double>> pts;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double s, p;
    if (!(ss >> s >> p)) {
      if (first) {
        first = false;
        continue;
      }
      throw std::invalid_argument("empirical cdf: malformed line '" + line + "'");
    }
    first = false;
    pts.emplace_back(s, p);
  }
  return empirical(std::move(pts));
}

FlowSizeDistribution FlowSizeDistribution::scaled_to_mean(double mean) const {
  if (!(mean > 0.0)) throw std::invalid_argument("scaled_to_mean: mean must be positive");
  const double f = mean / mean_;
  return std::visit(
      [&](const auto& d) -> FlowSizeDistribution {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BoundedPareto>) {
          return bounded_pareto(d.shape, d.min * f, d.max * f);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return lognormal(d.mu + std::log(f), d.sigma);
        } else {
          auto pts = d.points;
          for (auto& p : pts) p.first = std::max(1.0, p.first * f);
          return empirical(std::move(pts));
        }
      },
      variant_);
}

Bytes FlowSizeDistribution::sample(Rng& rng) const {
  const double x = std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        const double u = unit_uniform(rng);
        if constexpr (std::is_same_v<T, BoundedPareto>) {
          const double tail = 1.0 - std::pow(d.min / d.max, d.shape);
          return d.min * std::pow(1.0 - u * tail, -1.0 / d.shape);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          // consume a second uniform for Box-Muller
          const double u2 = unit_uniform(rng);
          const double z = std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * u2);
          return std::exp(d.mu + d.sigma * z);
        } else {
          const auto& pts = d.points;
          if (u <= pts[0].second) return pts[0].first;
          auto it = std::lower_bound(pts.begin(), pts.end(), u, [](const auto& pt, double v) { return pt.second < v; });
          const auto& hi = *it;
          const auto& lo = *(it - 1);
          return lo.first + (u - lo.second) / (hi.second - lo.second) * (hi.first - lo.first);
        }
      },
      variant_);
  return std::max<Bytes>(1, static_cast<Bytes>(std::llround(x)));
}

double anchor_mean(std::string_view name) {
  if (name == "hull") return 100e3;
  if (name == "pfabric") return 1.7e6;
  if (name == "vl2") return 12e6;
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "' (expected hull, pfabric or vl2)");
}

namespace {

FlowSizeDistribution lognormal_with_cv(double mean, double cv) {
  const double s2 = std::log1p(cv * cv);
  return FlowSizeDistribution::lognormal(std::log(mean) - 0.5 * s2, std::sqrt(s2));
}

// Smallest Pareto minimum whose bounded mean reaches `mean` for a fixed cap.
double solve_pareto_min(double shape, double mean, double max) {
  double lo = mean * 1e-12, hi = std::min(mean, max) * (1.0 - 1e-15);
  for (int i = 0; i < 300; ++i) {
    const double mid = std::sqrt(lo * hi);
    (bounded_pareto_mean(shape, mid, max) < mean ? lo : hi) = mid;
    if (hi / lo - 1.0 < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FlowSizeDistribution make_distribution(std::string_view name, double mean_bytes, double pareto_cutoff) {
  if (!(mean_bytes > 0.0)) throw std::invalid_argument("make_distribution: mean_flow_size must be positive");
  if (name == "hull") {
    if (!(pareto_cutoff > 1.0)) throw std::invalid_argument("make_distribution: pareto cutoff must exceed 1");
    constexpr double shape = 1.05;
    const double max = pareto_cutoff * mean_bytes;
    return FlowSizeDistribution::bounded_pareto(shape, solve_pareto_min(shape, mean_bytes, max), max);
  }
  if (name == "pfabric") return lognormal_with_cv(mean_bytes, 3.9 / 1.7);
  if (name == "vl2") return lognormal_with_cv(mean_bytes, 85.0 / 12.0);
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "' (expected hull, pfabric or vl2)");
}

}  // namespace ocs
