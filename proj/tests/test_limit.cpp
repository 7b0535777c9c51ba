#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "storyshare/limit.hpp"
#include "storyshare/verify.hpp"

using namespace storyshare;

namespace {

ModelParams base() { return {1.0, 1.0, 0.75, 1.0, 1.0, 0.7, 0.75}; }
ModelParams flip_a() { return {20.0, 8.0, 0.9, 1.0, 1.0, 0.65, 0.55}; }
ModelParams flip_b() { return {1.0, 2.4, 0.9, 1.0, 1.0, 0.9, 0.65}; }

}  // namespace

TEST_CASE("limit ODE endpoints") {
  SplitMix64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = sample_valid_params(rng);
    for (Region r : {Region::N, Region::I, Region::M, Region::S}) {
      CHECK(std::abs(g(r, 0.0, p) - 1.0) <= 1e-12);
      CHECK(std::abs(g(r, 1.0, p) + p.kappa) <= 1e-12);
    }
  }
}

TEST_CASE("region N drift is affine") {
  SplitMix64 rng(42);
  for (int i = 0; i < 20; ++i) {
    const ModelParams p = sample_valid_params(rng);
    for (int k = 0; k <= 20; ++k) {
      const double y = k / 20.0;
      CHECK(g(Region::N, y, p) ==
            doctest::Approx(1.0 - (1.0 + p.kappa) * y).epsilon(1e-14));
    }
  }
}

TEST_CASE("drift equals expected inflow accounting") {
  SplitMix64 rng(43);
  for (int i = 0; i < 30; ++i) {
    const ModelParams p = sample_valid_params(rng);
    for (Region r : {Region::N, Region::I, Region::M, Region::S}) {
      for (int k = 0; k <= 40; ++k) {
        const double y = k / 40.0;
        const SharingProbs pr = sharing_probs(r, y, p);
        // expected incoming true stories minus y times expected total,
        // built branch by branch.
        const double e_true = pr.p_true * (1.0 + p.rho) + pr.p_false * 1.0 +
                              (1.0 - pr.p_true - pr.p_false) * 1.0;
        const double e_total =
            pr.p_true * (1.0 + p.rho + p.kappa) +
            pr.p_false * (1.0 + p.kappa + p.rho) +
            (1.0 - pr.p_true - pr.p_false) * (1.0 + p.kappa);
        const double expect = e_true - y * e_total;
        CHECK(std::abs(g(r, y, p) - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
      }
    }
  }
}

TEST_CASE("quasi steady state closed form and residuals") {
  ModelParams p = base();
  CHECK(quasi_steady_state(Region::N, p) == 0.5);  // kappa = 1

  SplitMix64 rng(44);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams q = sample_valid_params(rng);
    for (Region r : {Region::N, Region::I, Region::M, Region::S}) {
      const double y_star = quasi_steady_state(r, q);
      CHECK(y_star > 0.0);
      CHECK(y_star < 1.0);
      CHECK(std::abs(g(r, y_star, q)) <= 1e-12);
    }
  }
}

TEST_CASE("delta moves y*_M past y*_S across the documented crossover") {
  ModelParams p = base();
  p.delta = 0.70;
  CHECK(quasi_steady_state(Region::M, p) < quasi_steady_state(Region::S, p));
  p.delta = 0.78;
  CHECK(quasi_steady_state(Region::M, p) > quasi_steady_state(Region::S, p));
}

TEST_CASE("third derivative of the sharing drifts is positive") {
  SplitMix64 rng(45);
  const double h = 1e-3;
  for (int i = 0; i < 20; ++i) {
    const ModelParams p = sample_valid_params(rng);
    for (Region r : {Region::I, Region::M, Region::S}) {
      for (int k = 2; k <= 38; ++k) {
        const double y = k / 40.0;
        const double d3 = (g(r, y + 2 * h, p) - 2.0 * g(r, y + h, p) +
                           2.0 * g(r, y - h, p) - g(r, y - 2 * h, p)) /
                          (2.0 * h * h * h);
        CHECK(d3 > 0.0);
      }
    }
  }
}

TEST_CASE("quasi-steady-state ordering on random draws") {
  SplitMix64 rng(46);
  for (int i = 0; i < 500; ++i) {
    const QuasiSteadyStates q = quasi_steady_states(sample_valid_params(rng));
    CHECK(std::min(q.y_s, q.y_m) > std::max(q.y_i, q.y_n));
  }
}

TEST_CASE("LDI values: singletons inside regions, intervals at thresholds") {
  const ModelParams p = flip_a();
  const LimitAnalysis a = analyze(p);
  const Thresholds& th = a.thresholds;

  const double mid_s = 0.5 * (th.hi() + 1.0);
  const Interval inside = ldi_value(mid_s, th, p);
  CHECK(inside.lo == inside.hi);
  CHECK(inside.lo == g(Region::S, mid_s, p));

  const Interval at_low = ldi_value(th.lo(), th, p);
  CHECK(at_low.lo == std::min(g(Region::N, th.lo(), p), g(Region::I, th.lo(), p)));
  CHECK(at_low.hi == std::max(g(Region::N, th.lo(), p), g(Region::I, th.lo(), p)));
  CHECK(at_low.lo < at_low.hi);
  // a stable threshold has 0 in its interval
  CHECK(at_low.contains(0.0));

  // a quasi steady state interior to its region is a steady state: the
  // singleton sits within the root residual of zero
  const ModelParams q = base();
  const LimitAnalysis aq = analyze(q);
  const double y_star_s = aq.qss.y_s;
  REQUIRE(y_star_s > aq.thresholds.hi());
  const Interval at_star = ldi_value(y_star_s, aq.thresholds, q);
  CHECK(at_star.lo <= kRootTol);
  CHECK(at_star.hi >= -kRootTol);
}

TEST_CASE("analysis of the reference flip configurations") {
  const LimitAnalysis a = analyze(flip_a());
  CHECK(a.thresholds.intermediate_region == Region::I);
  CHECK(a.qss.y_i < a.thresholds.y_hat_i);
  CHECK(a.thresholds.y_hat_i < a.qss.y_n);
  REQUIRE(a.stable_set.size() == 1);
  CHECK(a.stable_set[0].kind == LdiSteadyState::Kind::Threshold);
  CHECK(a.stable_set[0].threshold_of == Evocativeness::I);
  CHECK(a.stable_set[0].location == a.thresholds.y_hat_i);

  const LimitAnalysis b = analyze(flip_b());
  CHECK(b.thresholds.intermediate_region == Region::M);
  CHECK(b.qss.y_s < b.thresholds.y_hat_i);
  CHECK(b.thresholds.y_hat_i < b.qss.y_m);
  REQUIRE(b.stable_set.size() == 1);
  CHECK(b.stable_set[0].kind == LdiSteadyState::Kind::Threshold);
  CHECK(b.stable_set[0].threshold_of == Evocativeness::I);
}

TEST_CASE("structure invariants on random draws") {
  SplitMix64 rng(47);
  for (int i = 0; i < 500; ++i) {
    const ModelParams p = sample_analyzable_params(rng);
    const LimitAnalysis a = analyze(p);

    CHECK_FALSE(a.stable_set.empty());
    for (const auto& s : a.stable_set) {
      CHECK(s.stability == Stability::Stable);
      // the stable thresholds are only ever y_hat_i
      if (s.kind == LdiSteadyState::Kind::Threshold) {
        CHECK(s.threshold_of == Evocativeness::I);
      }
      // bound from the steady-state fixed-point form
      CHECK(s.location > 1.0 / (1.0 + p.kappa + p.rho));
      CHECK(s.location < (1.0 + p.rho) / (1.0 + p.kappa + p.rho));
    }
    for (const auto& s : a.unstable_set) {
      CHECK(s.kind == LdiSteadyState::Kind::Threshold);
      CHECK(s.stability == Stability::Unstable);
    }

    // landmarks: exactly five, sorted, pairwise separated
    const auto marks = a.sorted_landmarks();
    REQUIRE(marks.size() == 5);
    for (std::size_t k = 1; k < marks.size(); ++k) {
      CHECK(marks[k].location - marks[k - 1].location >= kKnifeEdgeTol);
    }
  }
}

TEST_CASE("scan classifier agrees with the closed-form labels") {
  SplitMix64 rng(48);
  for (int i = 0; i < 300; ++i) {
    const ModelParams p = sample_analyzable_params(rng);
    const LimitAnalysis a = analyze(p);
    std::vector<LdiSteadyState> expected = a.stable_set;
    expected.insert(expected.end(), a.unstable_set.begin(), a.unstable_set.end());
    std::sort(expected.begin(), expected.end(),
              [](const LdiSteadyState& x, const LdiSteadyState& y) {
                return x.location < y.location;
              });
    const auto labels = classify_stability_by_scan(a, p);
    REQUIRE(labels.size() == expected.size());
    for (std::size_t k = 0; k < labels.size(); ++k) {
      CHECK(labels[k].location == expected[k].location);
      CHECK(labels[k].stability == expected[k].stability);
    }
  }
}

TEST_CASE("configuration index encodes the ordering") {
  const LimitAnalysis a = analyze(flip_a());
  CHECK(a.configuration.threshold_order == ConfigIndex::ThresholdOrder::IBelowM);
  // sorted landmarks: y*_i < y_hat_i < y*_n < y*_s < y_hat_m for this set
  const auto marks = a.sorted_landmarks();
  int lo_pos = 0, hi_pos = 0;
  for (int k = 0; k < 5; ++k) {
    if (marks[k].location == a.thresholds.lo()) lo_pos = k + 1;
    if (marks[k].location == a.thresholds.hi()) hi_pos = k + 1;
  }
  CHECK(a.configuration.first_threshold_pos == lo_pos);
  CHECK(a.configuration.second_threshold_pos == hi_pos);
  CHECK(a.configuration.first_threshold_pos == 2);
  CHECK(a.configuration.second_threshold_pos == 5);
  // free pair here is y*_i vs y*_n with y*_i below
  CHECK(a.configuration.free_pair_low == Region::I);

  const LimitAnalysis b = analyze(flip_b());
  CHECK(b.configuration.threshold_order == ConfigIndex::ThresholdOrder::MBelowI);
  CHECK(b.configuration.free_pair_low == Region::S);  // y*_s < y*_m there
}

TEST_CASE("configuration index stays within the 40-way taxonomy") {
  SplitMix64 rng(49);
  for (int i = 0; i < 300; ++i) {
    const LimitAnalysis a = analyze(sample_analyzable_params(rng));
    const auto& c = a.configuration;
    CHECK(c.first_threshold_pos >= 1);
    CHECK(c.first_threshold_pos < c.second_threshold_pos);
    CHECK(c.second_threshold_pos <= 5);
    if (c.threshold_order == ConfigIndex::ThresholdOrder::IBelowM) {
      CHECK((c.free_pair_low == Region::I || c.free_pair_low == Region::N));
    } else {
      CHECK((c.free_pair_low == Region::S || c.free_pair_low == Region::M));
    }
  }
}

TEST_CASE("hybrid policy construction requires a stable threshold") {
  const HybridPolicy hybrid = make_hybrid_policy(analyze(flip_a()));
  CHECK(hybrid.target.y_hat_i == thresholds(flip_a()).y_hat_i);
  // base family: S_F = {y*_s}, no stable threshold
  CHECK_THROWS_AS(make_hybrid_policy(analyze(base())), std::invalid_argument);
}

TEST_CASE("knife-edge landmarks are rejected by analyze") {
  // Tune kappa so y*_S collides with the upper threshold: thresholds are
  // constant in kappa while the quasi steady states fall.
  const ModelParams p = base();
  const double target = thresholds(p).hi();
  double lo = 0.5, hi = 4.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ModelParams q = p;
    q.kappa = mid;
    (quasi_steady_state(Region::S, q) > target ? lo : hi) = mid;
    if (hi - lo < 1e-15) break;
  }
  ModelParams q = p;
  q.kappa = 0.5 * (lo + hi);
  CHECK_THROWS_AS(analyze(q), KnifeEdgeError);
}
