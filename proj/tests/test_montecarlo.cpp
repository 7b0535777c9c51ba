#include <doctest.h>

#include <cmath>
#include <set>

#include "storyshare/montecarlo.hpp"
#include "storyshare/statics.hpp"
#include "storyshare/verify.hpp"

using namespace storyshare;

namespace {

ModelParams kappa_family(double kappa) {
  return {1.0, kappa, 0.75, 1.0, 1.0, 0.7, 0.75};
}
// S_F = {y*_n, y*_m} with a repelling y_hat_m between them.
ModelParams two_limit_config() {
  return {13.0746, 2.4181, 0.6052, 16.5529, 11.0314, 0.9220, 0.8162};
}
// S_F = {y*_n, y*_i, y*_s}.
ModelParams three_limit_config() {
  return {11.4898, 1.0753, 0.2987, 14.9063, 11.0493, 0.5768, 0.3909};
}

}  // namespace

TEST_CASE("limit distributions are reproducible and thread-count independent") {
  const ModelParams p = two_limit_config();
  const PlatformState init{60.0, 40.0};
  const LimitDistribution a = estimate_limit_distribution(p, init, 60, 20000, 5, 0.02, 1);
  const LimitDistribution b = estimate_limit_distribution(p, init, 60, 20000, 5, 0.02, 2);
  REQUIRE(a.terminal_y.size() == b.terminal_y.size());
  for (std::size_t i = 0; i < a.terminal_y.size(); ++i) {
    CHECK(a.terminal_y[i] == b.terminal_y[i]);
  }
  REQUIRE(a.assignment.size() == b.assignment.size());
  for (std::size_t i = 0; i < a.assignment.size(); ++i) {
    CHECK(a.assignment[i].count == b.assignment[i].count);
  }
  CHECK(a.unassigned_count == b.unassigned_count);
}

TEST_CASE("counts partition the runs and keys live in S_F") {
  const ModelParams p = two_limit_config();
  const LimitAnalysis analysis = analyze(p);
  const LimitDistribution dist =
      estimate_limit_distribution(p, PlatformState{58.0, 42.0}, 80, 50000, 11, 0.02, 2);
  std::size_t total = dist.unassigned_count;
  for (const auto& entry : dist.assignment) {
    total += entry.count;
    const bool in_sf = std::any_of(
        analysis.stable_set.begin(), analysis.stable_set.end(),
        [&](const LdiSteadyState& s) { return s.location == entry.point.location; });
    CHECK(in_sf);
  }
  CHECK(total == dist.n_runs);
  CHECK(dist.terminal_y.size() == dist.n_runs);
}

TEST_CASE("deterministic N start assigns every run to y*_N") {
  const ModelParams p = kappa_family(8.0);  // S_F = {y*_n}
  const LimitAnalysis a = analyze(p);
  REQUIRE(sf_composition(a) == "{y*_n}");
  REQUIRE(a.qss.y_n < a.thresholds.lo());
  const PlatformState init{1.0, 9.0};  // y0 = 0.1 in N
  const LimitDistribution dist =
      estimate_limit_distribution(p, init, 50, 20000, 3, 0.02, 2);
  REQUIRE(dist.assignment.size() == 1);
  CHECK(dist.assignment[0].count == 50);
  CHECK(dist.unassigned_count == 0);
  // deterministic: every terminal value identical
  for (double y : dist.terminal_y) CHECK(y == dist.terminal_y[0]);
}

TEST_CASE("mass appears at the stable threshold of the flip configuration") {
  const ModelParams p{20.0, 8.0, 0.9, 1.0, 1.0, 0.65, 0.55};
  const LimitAnalysis a = analyze(p);
  REQUIRE(a.stable_set.size() == 1);
  const double y_hat = a.stable_set[0].location;
  const PlatformState init{100.0 * y_hat, 100.0 * (1.0 - y_hat)};
  const LimitDistribution dist =
      estimate_limit_distribution(p, init, 100, 100000, 17, 0.02, 2);
  CHECK(dist.assignment[0].count > 50);
}

TEST_CASE("unassigned mass shrinks as the horizon grows") {
  const ModelParams p = two_limit_config();
  const LimitAnalysis a = analyze(p);
  const double y0 = a.unstable_set.front().location;
  const PlatformState init{100.0 * y0, 100.0 * (1.0 - y0)};
  std::size_t prev_unassigned = 0;
  bool first = true;
  for (std::size_t steps : {1000ull, 10000ull, 100000ull}) {
    const LimitDistribution dist =
        estimate_limit_distribution(p, init, 150, steps, 23, 0.02, 2);
    if (!first) CHECK(dist.unassigned_count <= prev_unassigned + 5);
    prev_unassigned = dist.unassigned_count;
    first = false;
  }
  CHECK(prev_unassigned == 0);
}

TEST_CASE("nonconvergence check: empty, unstable, and stable cases") {
  const ModelParams p = two_limit_config();
  const LimitAnalysis a = analyze(p);
  REQUIRE_FALSE(a.unstable_set.empty());

  const NonconvergenceReport empty =
      nonconvergence_check(p, a.unstable_set[0], 0, 1000, 1, 2);
  CHECK(empty.n_runs == 0);
  CHECK(empty.near_count == 0);

  const NonconvergenceReport unstable =
      nonconvergence_check(p, a.unstable_set[0], 100, 100000, 31, 2);
  CHECK(unstable.fraction <= 0.02);

  // control at the well-separated stable point y*_m
  const auto control = std::find_if(
      a.stable_set.begin(), a.stable_set.end(), [](const LdiSteadyState& s) {
        return s.kind == LdiSteadyState::Kind::Quasi && s.quasi_region == Region::M;
      });
  REQUIRE(control != a.stable_set.end());
  const NonconvergenceReport stable =
      nonconvergence_check(p, *control, 100, 100000, 37, 2);
  CHECK(stable.fraction >= 0.5);
}

TEST_CASE("nonconvergence check rejects a foreign point") {
  const ModelParams p = two_limit_config();
  LdiSteadyState bogus{0.5, LdiSteadyState::Kind::Quasi, Region::S,
                       Evocativeness::I, Stability::Stable};
  CHECK_THROWS_AS(nonconvergence_check(p, bogus, 10, 100, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("path dependence: two distinct limit behaviors from one start") {
  const ModelParams p = two_limit_config();
  const LimitAnalysis a = analyze(p);
  const double y0 = a.unstable_set.front().location;
  const PlatformState init{100.0 * y0, 100.0 * (1.0 - y0)};
  const PathDependenceReport report =
      path_dependence_report(p, init, 300, 100000, 41, 0.02, 2);
  REQUIRE(report.classes.size() >= 2);
  CHECK_FALSE(report.degenerate);
  std::set<std::string> behaviors;
  for (const auto& c : report.classes) behaviors.insert(c.behavior);
  CHECK(behaviors.size() >= 2);
  CHECK(behaviors.count("no sharing") == 1);
}

TEST_CASE("path dependence: three stable points give three behavior classes") {
  const ModelParams p = three_limit_config();
  const LimitAnalysis a = analyze(p);
  REQUIRE(a.stable_set.size() == 3);
  const double y0 = a.unstable_set.front().location;
  const PlatformState init{100.0 * y0, 100.0 * (1.0 - y0)};
  const PathDependenceReport report =
      path_dependence_report(p, init, 400, 100000, 43, 0.02, 2);
  std::set<std::string> behaviors;
  for (const auto& c : report.classes) behaviors.insert(c.behavior);
  CHECK(behaviors.size() == 3);
}

TEST_CASE("path dependence requires at least two stable points") {
  const ModelParams p = kappa_family(8.0);  // S_F = {y*_n}
  CHECK_THROWS_AS(
      path_dependence_report(p, PlatformState{10, 90}, 10, 1000, 1, 0.02, 1),
      std::invalid_argument);
}

TEST_CASE("early shocks steer the limit, late shocks do not") {
  const ModelParams p = two_limit_config();
  const LimitAnalysis a = analyze(p);
  const double y_hat = a.unstable_set.front().location;
  // start above the repelling threshold, biased toward y*_m; |z0| = 300 keeps
  // the unshocked runs from being scattered by the very first draws
  const PlatformState init{300.0 * (y_hat + 0.05), 300.0 * (1.0 - y_hat - 0.05)};
  const Policy policy = OptimalPolicy{a.thresholds};
  const double y_m = a.qss.y_m;

  // the false-story mass that flips an early platform is inconsequential later
  const Shock early{10, 0.0, 150.0};
  const Shock late{50000, 0.0, 150.0};

  int to_m_plain = 0, to_m_early = 0, to_m_late = 0;
  const int runs = 60;
  for (int run = 0; run < runs; ++run) {
    const auto plain =
        run_terminal(p, policy, init, 100000, SplitMix64::stream(51, run));
    const auto early_hit = run_terminal(p, policy, init, 100000,
                                        SplitMix64::stream(51, run), early);
    const auto late_hit = run_terminal(p, policy, init, 100000,
                                       SplitMix64::stream(51, run), late);
    if (std::abs(plain.window_mean - y_m) < 0.02) ++to_m_plain;
    if (std::abs(early_hit.window_mean - y_m) < 0.02) ++to_m_early;
    if (std::abs(late_hit.window_mean - y_m) < 0.02) ++to_m_late;
  }
  // the early shock drains the y*_m basin; the late one leaves it unchanged
  CHECK(to_m_plain >= runs / 2);
  CHECK(to_m_early <= to_m_plain / 2);
  CHECK(to_m_late >= to_m_plain - 6);
}

TEST_CASE("window mean of a zero-step run is the initial share") {
  const auto stats = run_terminal(kappa_family(1.0), FixedPolicy{Region::N},
                                  PlatformState{30, 70}, 0, SplitMix64::stream(1, 0));
  CHECK(stats.window_mean == 0.3);
}
