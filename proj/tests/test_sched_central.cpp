#include <random>

#include "doctest.h"
#include "ocs/sched_central.hpp"

using namespace ocs;

namespace {

SchedulerParams params_for(int n, int k) {
  auto p = SchedulerParams::defaults(n, k);
  return p;
}

TrafficTrace random_trace(int n, Slot slots, std::mt19937_64& rng, double density = 0.3) {
  TrafficTrace tr(n);
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<Bytes> bytes(1, 1000);
  for (Slot t = 0; t < slots; ++t) {
    tr.extend_to(t);
    for (Rack i = 0; i < n; ++i)
      for (Rack j = 0; j < n; ++j)
        if (i != j && coin(rng) < density) tr.record(t, i, j, bytes(rng));
  }
  return tr;
}

}  // namespace

TEST_CASE("central_compute: all-zero window") {
  TrafficTrace tr(4);
  tr.extend_to(10);
  const auto p = params_for(4, 1);
  const auto a = central_compute(DelayedView(tr, 6, 3), p, 6);
  CHECK(a.pairs.pairs.empty());
  CHECK(a.baselines.rates.empty());
  CHECK(a.effective_at == 6);
  CHECK(a.decided_at == 3);
}

TEST_CASE("central_compute: n=4 k=1 example") {
  TrafficTrace tr(4);
  tr.record(0, 0, 1, 60);
  tr.record(0, 1, 0, 40);
  tr.record(1, 0, 2, 10);
  tr.record(2, 2, 3, 80);
  tr.extend_to(8);
  const auto p = params_for(4, 1);
  const DelayedView view(tr, 6, 3);
  const auto a = central_compute(view, p, 6);
  const std::vector<RackPair> expect{{0, 1}, {2, 3}};
  CHECK(a.pairs.pairs == expect);
  CHECK(mwm_oracle(window_graph(view, 3, 3)).pairs == expect);
  CHECK(a.baselines.rate({0, 1}) == doctest::Approx(100.0 / 3));
  CHECK(a.baselines.rate({2, 3}) == doctest::Approx(80.0 / 3));
  CHECK_FALSE(a.baselines.covers({0, 2}));
}

TEST_CASE("central_compute: top-1 truncation loses the full optimum") {
  TrafficTrace tr(5);
  tr.record(0, 0, 1, 10);
  tr.record(0, 0, 2, 6);
  tr.record(0, 1, 3, 5);
  tr.record(0, 2, 3, 4);
  tr.record(0, 3, 4, 2);
  tr.extend_to(6);
  auto p = params_for(5, 1);
  p.top_m = 1;
  const DelayedView view(tr, 6, 3);
  const auto full = mwm_oracle(window_graph(view, 3, 3));
  CHECK(full.pairs == std::vector<RackPair>{{0, 1}, {2, 3}});
  CHECK(full.weight == 14);

  const auto a = central_compute(view, p, 6);
  CHECK(a.pairs.pairs == std::vector<RackPair>{{0, 1}, {3, 4}});
  CHECK(a.pairs.weight == 12);

  p.top_m = 4;
  CHECK(central_compute(view, p, 6).pairs.pairs == full.pairs);
}

TEST_CASE("central_compute: preconditions") {
  TrafficTrace tr(4);
  tr.extend_to(20);
  const auto p = params_for(4, 1);
  CHECK_THROWS_AS(central_compute(DelayedView(tr, 7, 3), p, 7), std::invalid_argument);
  CHECK_THROWS_AS(central_compute(DelayedView(tr, 6, 2), p, 6), VisibilityError);
  CHECK_THROWS_AS(central_compute(DelayedView(tr, 9, 3), p, 6), std::invalid_argument);
}

TEST_CASE("epoch_schedule") {
  auto p = params_for(16, 1);
  const auto s = epoch_schedule(p, 12);
  REQUIRE(s.size() == 4);
  CHECK(s[3].apply == 9);
  CHECK(s[3].window_start == 3);
  CHECK(s[3].window_end == 6);
  CHECK(s[0].apply == 0);
  CHECK(s[0].window_end <= 0);

  p.epoch = p.central_delay = p.central_window = 20;
  const auto s20 = epoch_schedule(p, 100);
  // third epoch [40, 60) runs on the first epoch's data [0, 20)
  CHECK(s20[2].apply == 40);
  CHECK(s20[2].window_start == 0);
  CHECK(s20[2].window_end == 20);

  // cold start: nothing visible at apply = 0
  TrafficTrace tr(16);
  tr.extend_to(5);
  tr.record(5, 0, 1, 1000);
  CHECK(central_compute(DelayedView(tr, 0, 20), p, 0).pairs.pairs.empty());
}

TEST_CASE("central_compute: properties on random traces") {
  std::mt19937_64 rng(31);
  for (int iter = 0; iter < 60; ++iter) {
    const int n = 4 + iter % 9;
    const int k = 1 + iter % std::min(4, n - 1);
    auto p = params_for(n, k);
    p.top_m = 1 + iter % (n - 1);
    const Slot now = 12;
    auto tr = random_trace(n, 20, rng);
    const auto a = central_compute(DelayedView(tr, now, p.central_delay), p, now);
    CHECK(is_b_matching(a.pairs.pairs, n, k));
    CHECK(a.baselines.rates.size() == a.pairs.pairs.size());
    for (const RackPair q : a.pairs.pairs) {
      const Bytes w = tr.window_sum(q.lo, q.hi, now - p.central_delay, p.central_window);
      CHECK(a.baselines.rate(q) == static_cast<double>(w) / p.central_window);
    }

    // no lookahead: rewrite every slot >= now - Delta
    TrafficTrace perturbed(n);
    for (Slot t = 0; t < tr.slots(); ++t) {
      perturbed.extend_to(t);
      for (Rack i = 0; i < n; ++i)
        for (Rack j = 0; j < n; ++j) {
          if (i == j) continue;
          const Bytes v = t < now - p.central_delay ? tr.at(t, i, j) : static_cast<Bytes>(rng() % 5000);
          if (v) perturbed.record(t, i, j, v);
        }
    }
    const auto b = central_compute(DelayedView(perturbed, now, p.central_delay), p, now);
    CHECK(a.pairs.pairs == b.pairs.pairs);
    CHECK(a.baselines.rates == b.baselines.rates);
  }
}
