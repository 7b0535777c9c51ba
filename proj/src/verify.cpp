#include "storyshare/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <vector>

#include "storyshare/detail/kernels.hpp"
#include "storyshare/montecarlo.hpp"
#include "storyshare/parallel.hpp"
#include "storyshare/statics.hpp"

namespace storyshare {

ModelParams sample_valid_params(SplitMix64& rng) {
  auto logu = [&](double lo, double hi) {
    return lo * std::exp(rng.next_unit() * std::log(hi / lo));
  };
  auto uni = [&](double lo, double hi) {
    return lo + (hi - lo) * rng.next_unit();
  };
  ModelParams p{};
  p.rho = logu(0.05, 20.0);
  p.kappa = logu(0.05, 20.0);
  p.theta = uni(0.05, 0.95);
  p.delta = uni(0.52, 0.95);
  p.lambda = uni(0.10, 0.95);
  const double mu_lo = std::max(0.05, 1.05 * (1.0 - p.lambda) / p.lambda);
  p.mu = logu(mu_lo, std::max(20.0, 2.0 * mu_lo));
  const double beta_lo = std::max(0.05, 0.525 * p.mu * p.theta);
  p.beta = logu(beta_lo, std::max(20.0, 2.0 * beta_lo));
  return p;
}

ModelParams sample_analyzable_params(SplitMix64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const ModelParams p = sample_valid_params(rng);
    try {
      analyze(p);
      return p;
    } catch (const KnifeEdgeError&) {
      continue;
    }
  }
  throw std::runtime_error("sample_analyzable_params: no draw survived");
}

namespace {

// Reference parameter sets from the numerical examples.
ModelParams flip_config_a() { return {20.0, 8.0, 0.9, 1.0, 1.0, 0.65, 0.55}; }
ModelParams flip_config_b() { return {1.0, 2.4, 0.9, 1.0, 1.0, 0.9, 0.65}; }
ModelParams delta_family(double delta) {
  return {1.0, 1.0, 0.75, 1.0, 1.0, delta, 0.75};
}
ModelParams kappa_family(double kappa) {
  return {1.0, kappa, 0.75, 1.0, 1.0, 0.7, 0.75};
}

// Pilot-located configurations with an unstable threshold steady state that
// is well separated (>= 0.025) from every stable point; each is re-verified
// structurally before the runs (criterion 13). The three cover an unstable
// y_hat_m between N and M, an unstable y_hat_i between N and I, and a
// three-stable-point diagram with an unstable y_hat_i between N and I.
// control_region names the pilot-chosen stable quasi steady state used for
// the retention control (a stable point sitting next to another repelling
// threshold would leak runs through early-platform noise and measure the
// wrong thing).
struct UnstableConfig {
  ModelParams params;
  Region control_region;
};
std::vector<UnstableConfig> unstable_threshold_configs() {
  return {
      {{13.0746, 2.4181, 0.6052, 16.5529, 11.0314, 0.9220, 0.8162}, Region::M},
      {{19.1730, 4.1506, 0.6968, 2.3118, 14.3373, 0.5353, 0.4246}, Region::N},
      {{11.4898, 1.0753, 0.2987, 14.9063, 11.0493, 0.5768, 0.3909}, Region::S},
  };
}

// Configuration for the random-limit split (criterion 14): S_F = {y*_n, y*_m}
// separated by 0.38, with the repelling threshold between them as the start
// point. Pilot split at |z0| = 100: roughly 81% / 19%.
ModelParams split_experiment_params() {
  return {13.0746, 2.4181, 0.6052, 16.5529, 11.0314, 0.9220, 0.8162};
}

struct Failure {
  bool failed = false;
  std::string message;

  void fail(const std::string& msg) {
    if (!failed) message = msg;
    failed = true;
  }
};

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. quasi_steady_state(N) = 1/(1+kappa) to 1e-12, 100 random params.

bool c01_closed_form_n(const VerifyOptions&, std::string& detail) {
  SplitMix64 rng(0x5101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ModelParams p = sample_valid_params(rng);
    const double err =
        std::abs(quasi_steady_state(Region::N, p) - 1.0 / (1.0 + p.kappa));
    worst = std::max(worst, err);
  }
  detail = "max |y*_N - 1/(1+kappa)| = " + fmt(worst) + ", tol 1e-12";
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 2. g(R,0) = 1, g(R,1) = -kappa to 1e-12, all regions, 1000 random params.

bool c02_ode_endpoints(const VerifyOptions&, std::string& detail) {
  SplitMix64 rng(0x5102);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = sample_valid_params(rng);
    for (Region r : {Region::N, Region::I, Region::M, Region::S}) {
      worst = std::max(worst, std::abs(detail::g(r, 0.0, p) - 1.0));
      worst = std::max(worst, std::abs(detail::g(r, 1.0, p) + p.kappa));
    }
  }
  detail = "max endpoint error = " + fmt(worst) + ", tol 1e-12";
  return worst <= 1e-12;
}

// ---------------------------------------------------------------------------
// 3. Quasi-steady-state ordering min{y*_S,y*_M} > max{y*_I,y*_N}, 10^4 random
//    params. Criterion name carries the "lemma3" filter token.

bool c03_lemma3_ordering(const VerifyOptions& opts, std::string& detail) {
  const int n = 10000;
  std::vector<ModelParams> draws(n);
  SplitMix64 rng(0x5103);
  for (auto& p : draws) p = sample_valid_params(rng);
  std::vector<unsigned char> ok(n, 0);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    const QuasiSteadyStates q = quasi_steady_states(draws[i]);
    ok[i] = std::min(q.y_s, q.y_m) > std::max(q.y_i, q.y_n) ? 1 : 0;
  });
  const auto bad = std::count(ok.begin(), ok.end(), 0);
  detail = fmt(static_cast<double>(n - bad)) + "/" + fmt(n) +
           " draws strictly ordered";
  return bad == 0;
}

// ---------------------------------------------------------------------------
// 4. Stable-set structure (Q subset S_F subset Q + {y_hat_i}, y_hat_m never
//    stable) and independent scan agreement, 10^4 random params.

bool c04_stable_set_structure(const VerifyOptions& opts, std::string& detail) {
  const int n = 10000;
  std::vector<ModelParams> draws(n);
  SplitMix64 rng(0x5104);
  for (auto& p : draws) p = sample_analyzable_params(rng);

  std::vector<std::string> errors(n);
  parallel_for(n, opts.threads, [&](std::size_t i) {
    const ModelParams& p = draws[i];
    std::ostringstream err;
    try {
      const LimitAnalysis a = analyze(p);
      const double lo = a.thresholds.lo();
      const double hi = a.thresholds.hi();
      const Region inter = a.thresholds.intermediate_region;

      // Q recomputed from the landmark values alone.
      std::vector<std::pair<Region, double>> q_members;
      if (a.qss.y_n < lo) q_members.push_back({Region::N, a.qss.y_n});
      if (lo < a.qss.of(inter) && a.qss.of(inter) < hi) {
        q_members.push_back({inter, a.qss.of(inter)});
      }
      if (a.qss.y_s > hi) q_members.push_back({Region::S, a.qss.y_s});

      // Q subset of S_F.
      for (const auto& [region, location] : q_members) {
        const bool found = std::any_of(
            a.stable_set.begin(), a.stable_set.end(), [&](const LdiSteadyState& s) {
              return s.kind == LdiSteadyState::Kind::Quasi &&
                     s.quasi_region == region && s.location == location;
            });
        if (!found) err << "in-region y*_" << to_string(region) << " missing from S_F; ";
      }
      // S_F subset of Q union {y_hat_i}; y_hat_m never stable.
      for (const auto& s : a.stable_set) {
        if (s.kind == LdiSteadyState::Kind::Threshold) {
          if (s.threshold_of == Evocativeness::M) err << "y_hat_m in S_F; ";
        } else {
          const bool in_q = std::any_of(
              q_members.begin(), q_members.end(), [&](const auto& m) {
                return m.first == s.quasi_region && m.second == s.location;
              });
          if (!in_q) err << "out-of-region quasi state in S_F; ";
        }
      }

      // Closed-form flip labels against the dense-scan classifier.
      std::vector<LdiSteadyState> expected = a.stable_set;
      expected.insert(expected.end(), a.unstable_set.begin(), a.unstable_set.end());
      std::sort(expected.begin(), expected.end(),
                [](const LdiSteadyState& x, const LdiSteadyState& y) {
                  return x.location < y.location;
                });
      const std::vector<ScanLabel> scanned = classify_stability_by_scan(a, p);
      if (scanned.size() != expected.size()) {
        err << "scan candidate count mismatch; ";
      } else {
        for (std::size_t k = 0; k < scanned.size(); ++k) {
          if (scanned[k].location != expected[k].location ||
              scanned[k].stability != expected[k].stability) {
            err << "scan disagrees at y=" << scanned[k].location << "; ";
          }
        }
      }
    } catch (const std::exception& e) {
      err << "exception: " << e.what();
    }
    errors[i] = err.str();
  });

  int bad = 0;
  std::string first;
  for (const auto& e : errors) {
    if (!e.empty()) {
      if (bad == 0) first = e;
      ++bad;
    }
  }
  detail = bad == 0 ? "10000/10000 draws: structure + scan agreement"
                    : fmt(bad) + " failures; first: " + first;
  return bad == 0;
}

// ---------------------------------------------------------------------------
// 5. Golden flip configurations: S_F = {y_hat_i} exactly, with the stated
//    orderings.

bool c05_golden_flip_configs(const VerifyOptions&, std::string& detail) {
  Failure f;

  const LimitAnalysis a = analyze(flip_config_a());
  if (!(a.thresholds.y_hat_i < a.thresholds.y_hat_m)) {
    f.fail("config A: expected y_hat_i < y_hat_m");
  }
  if (!(a.qss.y_i < a.thresholds.y_hat_i && a.thresholds.y_hat_i < a.qss.y_n)) {
    f.fail("config A: expected y*_I < y_hat_i < y*_N");
  }
  if (!(a.stable_set.size() == 1 &&
        a.stable_set[0].kind == LdiSteadyState::Kind::Threshold &&
        a.stable_set[0].threshold_of == Evocativeness::I)) {
    f.fail("config A: S_F != {y_hat_i} (got " + sf_composition(a) + ")");
  }

  const LimitAnalysis b = analyze(flip_config_b());
  if (!(b.thresholds.y_hat_i > b.thresholds.y_hat_m)) {
    f.fail("config B: expected y_hat_i > y_hat_m");
  }
  if (!(b.qss.y_s < b.thresholds.y_hat_i && b.thresholds.y_hat_i < b.qss.y_m)) {
    f.fail("config B: expected y*_S < y_hat_i < y*_M");
  }
  if (!(b.stable_set.size() == 1 &&
        b.stable_set[0].kind == LdiSteadyState::Kind::Threshold &&
        b.stable_set[0].threshold_of == Evocativeness::I)) {
    f.fail("config B: S_F != {y_hat_i} (got " + sf_composition(b) + ")");
  }

  detail = f.failed ? f.message
                    : "S_F = {y_hat_i} for both configurations, orderings as stated";
  return !f.failed;
}

// ---------------------------------------------------------------------------
// 6. Crossover locations in delta for the mu=beta=kappa=rho=1,
//    theta=lambda=0.75 family: 0.745, 0.751, 0.664 (+- 0.005 each).

bool c06_delta_crossovers(const VerifyOptions&, std::string& detail) {
  auto crossover = [&](const std::function<double(const ModelParams&)>& fn,
                       double lo, double hi) {
    double flo = fn(delta_family(lo));
    for (int i = 0; i < 60 && hi - lo > 1e-9; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = fn(delta_family(mid));
      if ((fmid < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  const double d1 = crossover(
      [](const ModelParams& p) {
        const QuasiSteadyStates q = quasi_steady_states(p);
        return q.y_m - q.y_s;
      },
      0.6, 0.9);
  const double d2 = crossover(
      [](const ModelParams& p) {
        const QuasiSteadyStates q = quasi_steady_states(p);
        return q.y_n - q.y_i;
      },
      0.6, 0.9);
  // The threshold crossover is located by bisecting the raw value-function
  // roots: thresholds() itself refuses the coincidence point as a knife edge.
  const double d3 = crossover(
      [](const ModelParams& p) {
        const double y_hat_i =
            bisect_unit_interval([&](double y) { return detail::value_i(y, p); });
        const double y_hat_m =
            bisect_unit_interval([&](double y) { return detail::value_m(y, p); });
        return y_hat_i - y_hat_m;
      },
      0.55, 0.8);

  detail = "crossovers at delta = " + fmt(d1) + " (0.745), " + fmt(d2) +
           " (0.751), " + fmt(d3) + " (0.664); tol 0.005";
  return std::abs(d1 - 0.745) <= 0.005 && std::abs(d2 - 0.751) <= 0.005 &&
         std::abs(d3 - 0.664) <= 0.005;
}

// ---------------------------------------------------------------------------
// 7. Sign table: every definite cell passes at >= 20 random bases where the
//    landmark is a limit point and comparable.

bool c07_statics_sign_table(const VerifyOptions& opts, std::string& detail) {
  struct Cell {
    LandmarkId target;
    ParamName parameter;
  };
  const std::vector<Cell> cells = {
      {LandmarkId::YStarM, ParamName::Kappa}, {LandmarkId::YStarS, ParamName::Kappa},
      {LandmarkId::YStarI, ParamName::Kappa}, {LandmarkId::YHatI, ParamName::Kappa},
      {LandmarkId::YStarM, ParamName::Beta},  {LandmarkId::YStarS, ParamName::Beta},
      {LandmarkId::YStarI, ParamName::Beta},  {LandmarkId::YHatI, ParamName::Beta},
      {LandmarkId::YHatI, ParamName::Theta},  {LandmarkId::YStarM, ParamName::Delta},
      {LandmarkId::YStarI, ParamName::Delta}, {LandmarkId::YHatI, ParamName::Delta},
      {LandmarkId::YStarM, ParamName::Rho},   {LandmarkId::YStarS, ParamName::Rho},
      {LandmarkId::YHatI, ParamName::Rho},
  };

  // Anchors whose neighborhoods reliably contain bases with the landmark a
  // limit point; jittered draws alternate with unrestricted sampler draws.
  auto anchors_for = [&](LandmarkId target) -> std::vector<ModelParams> {
    switch (target) {
      case LandmarkId::YStarS:
        return {kappa_family(0.3), ModelParams{0.3, 1.5, 0.6, 0.6, 0.3, 0.55, 0.95}};
      case LandmarkId::YStarI:
        return {ModelParams{0.45, 3.0, 0.88, 0.6, 0.3, 0.53, 0.9},
                ModelParams{1.0, 3.0, 0.9, 1.0, 1.0, 0.8, 0.55}};
      case LandmarkId::YStarM:
        return {ModelParams{1.0, 8.0, 0.5, 0.6, 0.3, 0.9, 0.95},
                ModelParams{1.0, 8.0, 0.55, 0.6, 0.3, 0.9, 0.95}};
      default:
        return {flip_config_a(), flip_config_b()};
    }
  };

  std::vector<std::string> cell_errors(cells.size());
  parallel_for(cells.size(), opts.threads, [&](std::size_t ci) {
    const Cell& cell = cells[ci];
    SplitMix64 rng(0x5107 + 31 * ci);
    const auto anchors = anchors_for(cell.target);
    int passed = 0;
    int attempts = 0;
    std::ostringstream err;
    while (passed < 20 && attempts < 6000 && err.str().empty()) {
      ++attempts;
      ModelParams base{};
      if (attempts % 2 == 0) {
        base = sample_valid_params(rng);
      } else {
        base = anchors[attempts / 2 % anchors.size()];
        auto jitter = [&](double v) { return v * std::exp(0.3 * (rng.next_unit() - 0.5)); };
        base.rho = jitter(base.rho);
        base.kappa = jitter(base.kappa);
        base.mu = jitter(base.mu);
        base.beta = jitter(base.beta);
        // theta/delta/lambda jittered within their open ranges
        base.theta = std::clamp(jitter(base.theta), 0.02, 0.98);
        base.delta = std::clamp(jitter(base.delta), 0.52, 0.98);
        base.lambda = std::clamp(jitter(base.lambda), 0.05, 0.97);
        if (!is_valid(base)) continue;
      }
      LimitAnalysis analysis;
      try {
        analysis = analyze(base);
      } catch (const KnifeEdgeError&) {
        continue;
      }
      if (!landmark_is_limit_point(cell.target, analysis)) continue;
      // The stencil must stay valid (theta can sit near its assumption cap).
      const double x0 = get_param(base, cell.parameter);
      const double h = 1e-5 * std::max(1.0, std::abs(x0));
      if (!is_valid(with_param(base, cell.parameter, x0 - h)) ||
          !is_valid(with_param(base, cell.parameter, x0 + h))) {
        continue;
      }
      const SignReport report = sign_check(cell.target, cell.parameter, base);
      if (report.verdict == SignVerdict::NotComparable) continue;
      if (report.verdict == SignVerdict::Fail) {
        err << to_string(cell.target) << "/" << to_string(cell.parameter)
            << " failed at base rho=" << base.rho << " kappa=" << base.kappa
            << " theta=" << base.theta << " mu=" << base.mu
            << " beta=" << base.beta << " delta=" << base.delta
            << " lambda=" << base.lambda << ": " << report.detail;
        break;
      }
      ++passed;
    }
    if (err.str().empty() && passed < 20) {
      err << to_string(cell.target) << "/" << to_string(cell.parameter)
          << ": only " << passed << " comparable bases found";
    }
    cell_errors[ci] = err.str();
  });

  for (const auto& e : cell_errors) {
    if (!e.empty()) {
      detail = e;
      return false;
    }
  }
  detail = "15 cells x 20 bases passed (constant cells held to 1e-9)";
  return true;
}

// ---------------------------------------------------------------------------
// 8. Theta non-monotonicity goldens: sign change within +-0.03 of 0.95 (y*_S),
//    0.87 (y*_M), 0.9 (y*_I).

bool c08_theta_nonmonotonicity(const VerifyOptions&, std::string& detail) {
  struct Golden {
    LandmarkId target;
    ModelParams base;
    double quoted;
  };
  const std::vector<Golden> goldens = {
      {LandmarkId::YStarS, {0.3, 1.5, 0.5, 0.6, 0.3, 0.55, 0.95}, 0.95},
      {LandmarkId::YStarM, {1.0, 8.0, 0.5, 0.6, 0.3, 0.9, 0.95}, 0.87},
      {LandmarkId::YStarI, {0.45, 3.0, 0.5, 0.6, 0.3, 0.53, 0.9}, 0.9},
  };

  std::ostringstream out;
  bool ok = true;
  for (const auto& g : goldens) {
    std::vector<double> grid;
    for (int i = 0; i <= 140; ++i) grid.push_back(0.3 + 0.699 * i / 140.0);
    const ThetaShapeReport report = theta_shape(g.target, g.base, grid);
    if (!report.theta_r) {
      ok = false;
      out << to_string(g.target) << ": no sign change found; ";
      continue;
    }
    out << to_string(g.target) << " theta_R = " << fmt(*report.theta_r) << " ("
        << fmt(g.quoted) << "); ";
    if (std::abs(*report.theta_r - g.quoted) > 0.03) ok = false;
  }
  detail = out.str() + "tol 0.03";
  return ok;
}

// ---------------------------------------------------------------------------
// 9. Kappa regime bounds for the rho=mu=beta=1, theta=0.75, delta=0.7,
//    lambda=0.75 family.

bool c09_kappa_regime_bounds(const VerifyOptions&, std::string& detail) {
  const ModelParams base = kappa_family(1.0);
  const KappaBounds bounds = kappa_bounds(base, 0.05, 30.0);
  if (!(0.0 < bounds.kappa1 && bounds.kappa1 < bounds.kappa2)) {
    detail = "bounds out of order: kappa1 = " + fmt(bounds.kappa1) +
             ", kappa2 = " + fmt(bounds.kappa2);
    return false;
  }
  auto sf_at = [&](double kappa) {
    return sf_composition(analyze(with_param(base, ParamName::Kappa, kappa)));
  };
  for (int i = 0; i < 20; ++i) {
    const double below =
        0.05 + (bounds.kappa1 - 1e-4 - 0.05) * static_cast<double>(i) / 19.0;
    if (sf_at(below) != "{y*_s}") {
      detail = "S_F != {y*_s} at kappa = " + fmt(below);
      return false;
    }
    const double above =
        bounds.kappa2 + 1e-4 + (30.0 - bounds.kappa2 - 1e-4) * static_cast<double>(i) / 19.0;
    if (sf_at(above) != "{y*_n}") {
      detail = "S_F != {y*_n} at kappa = " + fmt(above);
      return false;
    }
  }
  detail = "kappa1 = " + fmt(bounds.kappa1) + ", kappa2 = " + fmt(bounds.kappa2) +
           "; 20-point grids verified on both sides";
  return true;
}

// ---------------------------------------------------------------------------
// 10. Drift identity: Monte Carlo E[dy]*|z| vs g(R,y) within 3 standard errors
//     plus the exact finite-size remainder, 50 random triples, |z| = 1e6.

bool c10_drift_identity(const VerifyOptions& opts, std::string& detail) {
  const int n_triples = 50;
  const std::size_t n_draws = 100000;
  const double z_total = 1e6;

  struct Triple {
    ModelParams p;
    Region region;
    double y;
  };
  std::vector<Triple> triples(n_triples);
  SplitMix64 rng(0x510a);
  const Region regions[4] = {Region::N, Region::I, Region::M, Region::S};
  for (auto& t : triples) {
    t.p = sample_valid_params(rng);
    t.region = regions[rng.next_u64() % 4];
    t.y = 0.05 + 0.9 * rng.next_unit();
  }

  std::vector<std::string> errors(n_triples);
  parallel_for(n_triples, opts.threads, [&](std::size_t i) {
    const Triple& t = triples[i];
    const double y = t.y;
    const ModelParams& p = t.p;
    const detail::ProbPair pr = detail::probs(t.region, y, p);
    const PlatformState state{y * z_total, (1.0 - y) * z_total};

    // One-step displacements of y for the three state increments, evaluated
    // on the discretized state itself, so the finite-size remainder below is
    // exact for the sampled process.
    auto displacement = [&](double add_t, double add_f) {
      const double t_next = state.t_count + add_t;
      const double f_next = state.f_count + add_f;
      return (t_next / (t_next + f_next) - y) * z_total;
    };
    const double d_true = displacement(1.0 + p.rho, p.kappa);
    const double d_false = displacement(1.0, p.kappa + p.rho);
    const double d_idle = displacement(1.0, p.kappa);
    const double exact_mean = pr.p_true * d_true + pr.p_false * d_false +
                              (1.0 - pr.p_true - pr.p_false) * d_idle;
    const double g_value = detail::g(t.region, y, p);
    const double remainder = std::abs(exact_mean - g_value);

    SplitMix64 draw_rng = SplitMix64::stream(0x510b, i);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t k = 0; k < n_draws; ++k) {
      const double u = draw_rng.next_unit();
      double t_next = state.t_count + 1.0, f_next = state.f_count + p.kappa;
      if (u < pr.p_true) {
        t_next += p.rho;
      } else if (u < pr.p_true + pr.p_false) {
        f_next += p.rho;
      }
      const double dy = (t_next / (t_next + f_next) - y) * z_total;
      sum += dy;
      sum_sq += dy * dy;
    }
    const double mean = sum / n_draws;
    const double var = std::max(0.0, sum_sq / n_draws - mean * mean);
    const double se = std::sqrt(var / n_draws);
    // 1e-9 absorbs summation rounding over 1e5 terms in the noiseless branch.
    const double tol = 3.0 * se + remainder + 1e-9 * std::max(1.0, std::abs(g_value));
    if (std::abs(mean - g_value) > tol) {
      std::ostringstream err;
      err << "triple " << i << " (region " << to_string(t.region) << ", y=" << y
          << "): |" << mean << " - " << g_value << "| > " << tol;
      errors[i] = err.str();
    }
  });

  for (const auto& e : errors) {
    if (!e.empty()) {
      detail = e;
      return false;
    }
  }
  detail = "50/50 triples within 3 SE + exact finite-size remainder";
  return true;
}

// ---------------------------------------------------------------------------
// 11. Fixed-policy convergence: >= 95% of 200 runs of 1e6 steps end within
//     0.01 of y*_R, per region, 5 params each.

bool c11_fixed_policy_convergence(const VerifyOptions& opts, std::string& detail) {
  const std::size_t n_runs = 200;
  const std::size_t n_steps = 1000000;
  SplitMix64 rng(0x510c);

  std::ostringstream out;
  for (Region region : {Region::N, Region::I, Region::M, Region::S}) {
    for (int rep = 0; rep < 5; ++rep) {
      // The urn's fluctuations around y*_R decay like |z|^(-alpha) with
      // alpha = |g'(y*)| / (mean stories added per period). Draws with small
      // alpha converge almost surely but too slowly to resolve at 0.01 within
      // the fixed 1e6-step budget, so the draw is filtered on the mixing
      // exponent (pilot-chosen floor 0.6).
      ModelParams p{};
      double y_star = 0.0, alpha = 0.0;
      for (;;) {
        p = sample_analyzable_params(rng);
        y_star = quasi_steady_state(region, p);
        const double h = 1e-6;
        const double slope =
            (detail::g(region, y_star + h, p) - detail::g(region, y_star - h, p)) /
            (2.0 * h);
        const detail::ProbPair pr = detail::probs(region, y_star, p);
        const double mean_inflow = 1.0 + p.kappa + p.rho * (pr.p_true + pr.p_false);
        alpha = -slope / mean_inflow;
        if (alpha >= 0.6) break;
      }

      const Policy policy = FixedPolicy{region};
      std::vector<unsigned char> near(n_runs, 0);
      const std::uint64_t seed = 0x11000 + rng.next_u64() % 100000;
      parallel_for(n_runs, opts.threads, [&](std::size_t run) {
        // |z0| = 1000 keeps the early share jumps (scale rho/|z|) small enough
        // that runs are not flung into the slow-return tails near 0 and 1.
        const double offset = (run % 2 == 0) ? 0.02 : -0.02;
        const double y0 = std::clamp(y_star + offset, 0.02, 0.98);
        const PlatformState init{1000.0 * y0, 1000.0 * (1.0 - y0)};
        const auto stats =
            run_terminal(p, policy, init, n_steps, SplitMix64::stream(seed, run));
        near[run] = std::abs(stats.window_mean - y_star) < 0.01 ? 1 : 0;
      });
      const auto hit = std::count(near.begin(), near.end(), 1);
      if (hit < 190) {
        std::ostringstream err;
        err << "region " << to_string(region) << " rep " << rep << ": only " << hit
            << "/200 runs within 0.01 of y*_R=" << y_star;
        detail = err.str();
        return false;
      }
    }
    out << to_string(region) << " ok; ";
  }
  detail = out.str() + ">=190/200 runs within 0.01 everywhere";
  return true;
}

// ---------------------------------------------------------------------------
// 12. Deterministic N branch: y_n = (T0+n)/(T0+F0+n(1+kappa)) exactly.

bool c12_deterministic_n_branch(const VerifyOptions&, std::string& detail) {
  // Integer kappa keeps every floating-point addition exact, so "exactly"
  // really means bit-equal here.
  const ModelParams p = with_param(kappa_family(1.0), ParamName::Kappa, 8.0);
  const LimitAnalysis a = analyze(p);
  const double y_star_n = 1.0 / (1.0 + p.kappa);
  const PlatformState init{1.0, 9.0};  // y0 = 0.1
  if (!(y_star_n < a.thresholds.lo() && init.share_true() < a.thresholds.lo())) {
    detail = "chosen configuration does not satisfy y*_N in N and y0 in N";
    return false;
  }

  const std::size_t n_steps = 2000;
  const Trajectory traj = simulate(init, OptimalPolicy{a.thresholds}, p, n_steps, 7);
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const double expect =
        (init.t_count + static_cast<double>(n)) /
        (init.t_count + init.f_count + static_cast<double>(n) * (1.0 + p.kappa));
    if (traj.states[n].share_true() != expect) {
      detail = "mismatch at step " + fmt(static_cast<double>(n));
      return false;
    }
  }
  detail = "2000 steps bit-equal to the closed form (kappa = 8, y0 = 0.1)";
  return true;
}

// ---------------------------------------------------------------------------
// 13. Nonconvergence to unstable threshold steady states (<= 1% of 500 runs)
//     with stable-point controls (>= 50%).

bool c13_nonconvergence_unstable(const VerifyOptions& opts, std::string& detail) {
  const std::size_t n_runs = 500;
  const std::size_t n_steps = 1000000;

  std::ostringstream out;
  int config_index = 0;
  for (const UnstableConfig& config : unstable_threshold_configs()) {
    ++config_index;
    const ModelParams& p = config.params;
    const LimitAnalysis a = analyze(p);
    const auto unstable_it = std::find_if(
        a.unstable_set.begin(), a.unstable_set.end(), [](const LdiSteadyState& s) {
          return s.kind == LdiSteadyState::Kind::Threshold;
        });
    if (unstable_it == a.unstable_set.end()) {
      detail = "config " + fmt(config_index) + " has no unstable threshold steady state";
      return false;
    }
    if (a.stable_set.empty()) {
      detail = "config " + fmt(config_index) + " has no stable control point";
      return false;
    }

    const NonconvergenceReport unstable_report = nonconvergence_check(
        p, *unstable_it, n_runs, n_steps, 0x13000 + config_index, opts.threads);
    const auto control_it = std::find_if(
        a.stable_set.begin(), a.stable_set.end(), [&](const LdiSteadyState& s) {
          return s.kind == LdiSteadyState::Kind::Quasi &&
                 s.quasi_region == config.control_region;
        });
    if (control_it == a.stable_set.end()) {
      detail = "config " + fmt(config_index) + " lost its control point";
      return false;
    }
    const NonconvergenceReport stable_report = nonconvergence_check(
        p, *control_it, n_runs, n_steps, 0x13500 + config_index, opts.threads);

    out << "config " << config_index << ": unstable " << fmt(unstable_report.fraction)
        << ", control " << fmt(stable_report.fraction) << "; ";
    if (unstable_report.fraction > 0.01) {
      detail = out.str() + "unstable retention above 1%";
      return false;
    }
    if (stable_report.fraction < 0.5) {
      detail = out.str() + "stable control below 50%";
      return false;
    }
  }
  detail = out.str() + "thresholds: <=1% unstable, >=50% control";
  return true;
}

// ---------------------------------------------------------------------------
// 14. Random-limit demonstration: >= 5% of 1000 runs on each of two stable
//     points, with distinct limit behaviors.

bool c14_random_limit_split(const VerifyOptions& opts, std::string& detail) {
  const ModelParams params = split_experiment_params();
  const LimitAnalysis a = analyze(params);
  if (a.stable_set.size() < 2) {
    detail = "experiment configuration has |S_F| < 2";
    return false;
  }
  if (a.unstable_set.empty()) {
    detail = "experiment configuration has no repelling start point";
    return false;
  }
  // Small |z0| at the repelling threshold between the two limits maximizes
  // the split across basins.
  const double y0 = a.unstable_set.front().location;
  const PlatformState initial{100.0 * y0, 100.0 * (1.0 - y0)};
  const std::size_t n_runs = 1000;
  const std::size_t n_steps = 1000000;
  const LimitDistribution dist = estimate_limit_distribution(
      params, initial, n_runs, n_steps, 0x14001, 0.02, opts.threads);
  std::vector<const AssignmentEntry*> heavy;
  for (const auto& entry : dist.assignment) {
    if (entry.count >= n_runs / 20) heavy.push_back(&entry);
  }
  std::ostringstream out;
  for (const auto& entry : dist.assignment) {
    out << limit_behavior(entry.point, a.thresholds) << " @ "
        << fmt(entry.point.location) << ": " << entry.count << "; ";
  }
  out << "unassigned: " << dist.unassigned_count << "; ";
  if (heavy.size() < 2) {
    detail = out.str() + "fewer than two points with >= 5% mass";
    return false;
  }
  // The heavy points must induce distinct limit sharing behavior.
  const std::string b0 = limit_behavior(heavy[0]->point, a.thresholds);
  const std::string b1 = limit_behavior(heavy[1]->point, a.thresholds);
  if (b0 == b1) {
    detail = out.str() + "limit behaviors not distinct";
    return false;
  }
  detail = out.str() + ">=5% on two points with distinct behaviors";
  return true;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& options) {
  struct Entry {
    int id;
    const char* name;
    bool (*fn)(const VerifyOptions&, std::string&);
    double budget_seconds;  // part of the criterion, enforced
  };
  const std::vector<Entry> entries = {
      {1, "closed_form_n_anchor", c01_closed_form_n, 1.0},
      {2, "ode_endpoints", c02_ode_endpoints, 1.0},
      {3, "lemma3_ordering", c03_lemma3_ordering, 30.0},
      {4, "stable_set_structure", c04_stable_set_structure, 120.0},
      {5, "golden_flip_configs", c05_golden_flip_configs, 1.0},
      {6, "delta_crossovers", c06_delta_crossovers, 5.0},
      {7, "statics_sign_table", c07_statics_sign_table, 120.0},
      {8, "theta_nonmonotonicity", c08_theta_nonmonotonicity, 10.0},
      {9, "kappa_regime_bounds", c09_kappa_regime_bounds, 30.0},
      {10, "drift_identity", c10_drift_identity, 120.0},
      {11, "fixed_policy_convergence", c11_fixed_policy_convergence, 600.0},
      {12, "deterministic_n_branch", c12_deterministic_n_branch, 1.0},
      {13, "nonconvergence_unstable", c13_nonconvergence_unstable, 900.0},
      {14, "random_limit_split", c14_random_limit_split, 900.0},
  };

  std::vector<CriterionResult> results;
  for (const auto& entry : entries) {
    if (!options.filter.empty() &&
        std::string(entry.name).find(options.filter) == std::string::npos) {
      continue;
    }
    CriterionResult result;
    result.id = entry.id;
    result.name = entry.name;
    const auto start = Clock::now();
    try {
      result.passed = entry.fn(options, result.detail);
    } catch (const std::exception& e) {
      result.passed = false;
      result.detail = std::string("exception: ") + e.what();
    }
    if (options.inject_failure && entry.id == 3) {
      result.passed = false;
      result.detail = "failure injected for harness self-check";
    }
    result.seconds =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (result.passed && result.seconds > entry.budget_seconds) {
      result.passed = false;
      result.detail += " [over the " + fmt(entry.budget_seconds) + "s budget]";
    }
    results.push_back(std::move(result));
  }
  return results;
}

bool report_acceptance(const std::vector<CriterionResult>& results) {
  bool all_passed = !results.empty();
  for (const auto& r : results) {
    std::printf("[%s] %02d %-26s (%.2fs): %s\n", r.passed ? "PASS" : "FAIL",
                r.id, r.name.c_str(), r.seconds, r.detail.c_str());
    all_passed = all_passed && r.passed;
  }
  std::printf("%zu criteria run, %s\n", results.size(),
              all_passed ? "all passed" : "FAILURES PRESENT");
  std::fflush(stdout);
  return all_passed;
}

}  // namespace storyshare
