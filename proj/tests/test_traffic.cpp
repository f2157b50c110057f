#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ocs/flow_size.hpp"
#include "ocs/workload.hpp"

using namespace ocs;

namespace {

// Mean of a bounded Pareto by log-spaced trapezoid quadrature of x * pdf(x).
double quadrature_pareto_mean(double a, double lo, double hi) {
  const double norm = a * std::pow(lo, a) / (1.0 - std::pow(lo / hi, a));
  const int steps = 2'000'000;
  const double step = std::log(hi / lo) / steps;
  double acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double x = lo * std::exp(i * step);
    // integrand in log space: x * pdf(x) * x
    const double f = norm * std::pow(x, -a) * x;
    acc += (i == 0 || i == steps) ? 0.5 * f : f;
  }
  return acc * step;
}

double sample_mean(const FlowSizeDistribution& d, std::uint64_t seed, int draws) {
  Rng rng(seed);
  long double sum = 0;
  for (int i = 0; i < draws; ++i) sum += static_cast<long double>(d.sample(rng));
  return static_cast<double>(sum / draws);
}

Flow make_flow(std::int64_t id, Rack src, Rack dst, int host, Bytes size, Slot arrival) {
  Flow f;
  f.id = id;
  f.src = src;
  f.dst = dst;
  f.host = host;
  f.size = size;
  f.remaining = size;
  f.arrival = arrival;
  return f;
}

}  // namespace

TEST_CASE("make_distribution: analytic means") {
  const auto hull = make_distribution("hull", 100e3);
  REQUIRE(std::holds_alternative<BoundedPareto>(hull.variant()));
  const auto bp = std::get<BoundedPareto>(hull.variant());
  CHECK(bp.shape == 1.05);
  CHECK(bp.max == doctest::Approx(1e9));
  CHECK(hull.mean() == doctest::Approx(100e3).epsilon(1e-12));
  CHECK(quadrature_pareto_mean(bp.shape, bp.min, bp.max) == doctest::Approx(100e3).epsilon(1e-6));

  const auto vl2 = make_distribution("vl2", 12e6);
  REQUIRE(std::holds_alternative<LogNormal>(vl2.variant()));
  const auto ln = std::get<LogNormal>(vl2.variant());
  const double mean = std::exp(ln.mu + ln.sigma * ln.sigma / 2);
  const double sd = std::sqrt(std::expm1(ln.sigma * ln.sigma)) * mean;
  CHECK(mean == doctest::Approx(12e6).epsilon(1e-12));
  CHECK(sd == doctest::Approx(85e6).epsilon(1e-12));

  const auto pf = make_distribution("pfabric", 1.7e6);
  const auto pl = std::get<LogNormal>(pf.variant());
  CHECK(std::exp(pl.mu + pl.sigma * pl.sigma / 2) == doctest::Approx(1.7e6).epsilon(1e-12));
  CHECK(std::sqrt(std::expm1(pl.sigma * pl.sigma)) * 1.7e6 == doctest::Approx(3.9e6).epsilon(1e-12));

  // proportional scaling keeps the coefficient of variation
  const auto pf10 = make_distribution("pfabric", 17e6);
  CHECK(std::get<LogNormal>(pf10.variant()).sigma == doctest::Approx(pl.sigma));
  CHECK(pf10.mean() == doctest::Approx(17e6));

  CHECK_THROWS_AS(make_distribution("websearch", 1e5), std::invalid_argument);
  CHECK_THROWS_AS(make_distribution("hull", 0), std::invalid_argument);
  CHECK_THROWS_AS(make_distribution("vl2", -5), std::invalid_argument);
}

TEST_CASE("sample mean within 5% of analytic mean over 1e6 draws") {
  const FlowSizeDistribution dists[] = {
      make_distribution("hull", 100e3),
      make_distribution("pfabric", 1.7e6),
      make_distribution("vl2", 12e6),
      FlowSizeDistribution::empirical({{100, 0.2}, {1e4, 0.6}, {1e6, 1.0}}),
  };
  for (const auto& d : dists) {
    const double m = sample_mean(d, 2024, 1'000'000);
    CHECK(std::abs(m / d.mean() - 1.0) < 0.05);
  }
}

TEST_CASE("samples are whole bytes >= 1") {
  Rng rng(3);
  const auto d = FlowSizeDistribution::lognormal(-2.0, 1.0);  // mostly below one byte
  for (int i = 0; i < 10000; ++i) CHECK(d.sample(rng) >= 1);
}

TEST_CASE("empirical cdf") {
  const auto d = FlowSizeDistribution::empirical({{100, 0.5}, {300, 1.0}});
  // point mass 0.5 at 100, uniform on (100, 300] with mass 0.5
  CHECK(d.mean() == doctest::Approx(0.5 * 100 + 0.5 * 200));

  std::istringstream csv("size_bytes,cum_prob\n100,0.5\n300,1.0\n");
  const auto e = FlowSizeDistribution::empirical_csv(csv);
  CHECK(e.mean() == doctest::Approx(d.mean()));

  const auto scaled = d.scaled_to_mean(1500);
  CHECK(scaled.mean() == doctest::Approx(1500));
  CHECK(std::get<EmpiricalCdf>(scaled.variant()).points[1].first == doctest::Approx(3000));

  using P = std::vector<std::pair<double, double>>;
  CHECK_THROWS_AS(FlowSizeDistribution::empirical(P{}), std::invalid_argument);
  CHECK_THROWS_AS(FlowSizeDistribution::empirical(P{{100, 0.5}, {50, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(FlowSizeDistribution::empirical(P{{100, 0.5}, {200, 0.5}, {300, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(FlowSizeDistribution::empirical(P{{100, 0.5}, {200, 0.9}}), std::invalid_argument);
  std::istringstream bad("size_bytes,cum_prob\n100,x\n");
  CHECK_THROWS_AS(FlowSizeDistribution::empirical_csv(bad), std::invalid_argument);

  CHECK_THROWS_AS(FlowSizeDistribution::bounded_pareto(0, 1, 2), std::invalid_argument);
  CHECK_THROWS_AS(FlowSizeDistribution::bounded_pareto(1.05, 2, 2), std::invalid_argument);
}

TEST_CASE("hull heavy tail: 95% of flows below 10 KB" * doctest::should_fail()) {
  const auto d = make_distribution("hull", 100e3);
  Rng rng(11);
  int small = 0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) small += d.sample(rng) < 10'000;
  CHECK(static_cast<double>(small) / draws >= 0.95 - 0.02);
}

TEST_CASE("hull small-flow fraction matches its closed form") {
  const auto d = make_distribution("hull", 100e3);
  const auto bp = std::get<BoundedPareto>(d.variant());
  // the minimum needed for a 100 KB mean already exceeds 10 KB
  CHECK(bp.min > 10'000);
  const double below = std::max(0.0, (1.0 - std::pow(bp.min / 1e4, bp.shape)) / (1.0 - std::pow(bp.min / bp.max, bp.shape)));
  Rng rng(11);
  int small = 0, under_min = 0;
  const int draws = 1'000'000;
  for (int i = 0; i < draws; ++i) {
    const Bytes s = d.sample(rng);
    small += s < 10'000;
    under_min += s < std::llround(bp.min);
  }
  CHECK(static_cast<double>(small) / draws == doctest::Approx(below));
  CHECK(under_min == 0);
}

TEST_CASE("generate_flows: zero rate") {
  WorkloadConfig cfg;
  cfg.host_rate_bps = 0;
  CHECK(generate_flows(cfg, make_distribution("pfabric", 1.7e6), 16, 1000).empty());
}

TEST_CASE("generate_flows: poisson arrival counts") {
  WorkloadConfig cfg;
  cfg.hosts_per_rack = 10;
  cfg.host_rate_bps = 200e6;
  cfg.mean_flow_size = 1.7e6;
  cfg.seed = 99;
  const double lambda = arrival_rate(cfg);
  CHECK(lambda == doctest::Approx(147.06).epsilon(1e-3));

  const int racks = 16;
  const auto flows = generate_flows(cfg, make_distribution("pfabric", 1.7e6), racks, 10'000);
  std::vector<int> per_rack(racks, 0);
  for (const auto& f : flows) {
    ++per_rack[f.src];
    CHECK(f.src != f.dst);
    CHECK(f.arrival >= 0);
    CHECK(f.arrival < 10'000);
  }
  const double expect = 10.0 * lambda;
  for (int r = 0; r < racks; ++r) CHECK(std::abs(per_rack[r] - expect) <= 4 * std::sqrt(expect));
  CHECK(std::abs(per_rack[0] - expect) <= 3 * std::sqrt(expect));
  const double total_expect = racks * expect;
  CHECK(std::abs(static_cast<double>(flows.size()) - total_expect) <= 3 * std::sqrt(total_expect));

  for (std::size_t i = 1; i < flows.size(); ++i) {
    CHECK(flows[i].id == flows[i - 1].id + 1);
    CHECK(flows[i].arrival >= flows[i - 1].arrival);
  }
}

TEST_CASE("generate_flows: dispersion") {
  SUBCASE("degenerate: one hot rack with all the weight") {
    WorkloadConfig cfg;
    cfg.dispersion = {0.1, 1.0};  // 0.1 * 10 peers = 1 rack
    cfg.seed = 5;
    const auto flows = generate_flows(cfg, make_distribution("hull", 100e3), 11, 2000);
    REQUIRE(!flows.empty());
    std::map<Rack, std::set<Rack>> dsts;
    for (const auto& f : flows) dsts[f.src].insert(f.dst);
    for (const auto& [src, set] : dsts) CHECK(set.size() == 1);
  }
  SUBCASE("hot weight fraction") {
    WorkloadConfig cfg;
    cfg.seed = 8;
    const int racks = 16;
    const auto hot = hot_sets(cfg, racks);
    for (Rack s = 0; s < racks; ++s) {
      CHECK(hot[s].size() == 2);  // round(0.1 * 15)
      for (Rack d : hot[s]) CHECK(d != s);
    }
    const auto flows = generate_flows(cfg, make_distribution("hull", 100e3), racks, 5000);
    std::size_t to_hot = 0;
    for (const auto& f : flows) to_hot += std::binary_search(hot[f.src].begin(), hot[f.src].end(), f.dst);
    const double n = static_cast<double>(flows.size());
    CHECK(std::abs(to_hot / n - 0.7) <= 4 * std::sqrt(0.7 * 0.3 / n));
  }
}

TEST_CASE("build_trace: single 500 KB flow") {
  const auto res = build_trace({make_flow(0, 0, 1, 0, 500'000, 0)}, 2, 1, 125'000, 1);
  REQUIRE(res.trace.slots() == 4);
  for (Slot t = 0; t < 4; ++t) CHECK(res.trace.at(t, 0, 1) == 125'000);
  CHECK(res.completion[0] == 3);
}

TEST_CASE("build_trace: remainder rides in the final slot") {
  const auto res = build_trace({make_flow(0, 0, 1, 0, 1000, 0), make_flow(1, 0, 2, 0, 1000, 0),
                                make_flow(2, 0, 2, 0, 1000, 0)},
                               3, 1, 100, 1);
  // share floor(100/3) = 33 per flow
  CHECK(res.trace.at(0, 0, 1) == 33);
  CHECK(res.trace.at(0, 0, 2) == 66);
  CHECK(res.trace.total() == 3000);
}

TEST_CASE("build_trace: hand-simulated three-flow fixture") {
  // host cap 100 B/slot; A and B share host (0,0), C sits on host (0,1)
  //   slot 0: A 100 (rem 150), C 80 (done)
  //   slot 1: A 50, B 50 (rem 100, 50)
  //   slot 2: A 50, B 50 (B done, A rem 50)
  //   slot 3: A 50 (done)
  std::vector<Flow> flows{make_flow(0, 0, 1, 0, 250, 0), make_flow(1, 0, 2, 0, 100, 1), make_flow(2, 0, 1, 1, 80, 0)};
  const auto res = build_trace(flows, 3, 2, 100, 2);
  std::map<std::int64_t, Slot> done;
  for (std::size_t i = 0; i < res.flows.size(); ++i) done[res.flows[i].id] = res.completion[i];
  CHECK(done[0] == 3);
  CHECK(done[1] == 2);
  CHECK(done[2] == 0);
  CHECK(res.trace.slots() == 4);
  CHECK(res.trace.at(0, 0, 1) == 180);
  CHECK(res.trace.at(1, 0, 1) == 50);
  CHECK(res.trace.at(1, 0, 2) == 50);
  CHECK(res.trace.at(2, 0, 1) == 50);
  CHECK(res.trace.at(2, 0, 2) == 50);
  CHECK(res.trace.at(3, 0, 1) == 50);
  CHECK(res.trace.at(3, 0, 2) == 0);
  for (const auto& f : res.flows) CHECK(f.remaining == 0);
}

TEST_CASE("build_trace: covers the horizon even when idle") {
  const auto res = build_trace({}, 4, 2, 100, 25);
  CHECK(res.trace.slots() == 25);
  CHECK(res.trace.total() == 0);
}

TEST_CASE("conservation and determinism on generated workloads") {
  SchedulerParams params = SchedulerParams::defaults(16, 1);
  for (const char* name : {"hull", "pfabric", "vl2"}) {
    CAPTURE(name);
    WorkloadConfig cfg;
    cfg.mean_flow_size = anchor_mean(name);
    cfg.seed = 77;
    const auto dist = make_distribution(name, cfg.mean_flow_size);
    const auto flows = generate_flows(cfg, dist, params.racks, 2000);
    Bytes sizes = 0;
    for (const auto& f : flows) sizes += f.size;
    const auto a = build_trace(flows, params, cfg, 2000);
    CHECK(a.total() == sizes);
    CHECK(a.slots() >= 2000);

    const auto b = build_trace(generate_flows(cfg, dist, params.racks, 2000), params, cfg, 2000);
    CHECK(a.digest() == b.digest());

    cfg.seed = 78;
    const auto c = build_trace(generate_flows(cfg, dist, params.racks, 2000), params, cfg, 2000);
    CHECK(a.digest() != c.digest());
  }
}

TEST_CASE("workload config validation") {
  WorkloadConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.dispersion.hot_fraction = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.dispersion.hot_fraction = 0.5;
  cfg.dispersion.hot_weight = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.dispersion.hot_weight = 0.5;
  cfg.host_rate_bps = -1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
