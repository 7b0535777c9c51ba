#include "storyshare/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "storyshare/detail/kernels.hpp"
#include "storyshare/parallel.hpp"

namespace storyshare {

namespace {

enum class PolicyKind { Optimal, Fixed, Hybrid };

// Pre-resolved policy so the step loop stays branch-light.
struct RunSpec {
  PolicyKind kind;
  Region fixed_region;   // Fixed only
  Thresholds th;         // Optimal / Hybrid
  Region hybrid_far;     // Hybrid: the region not adjacent to y_hat_i
};

RunSpec resolve(const Policy& policy, const ModelParams& p) {
  RunSpec spec{};
  if (const auto* fixed = std::get_if<FixedPolicy>(&policy)) {
    spec.kind = PolicyKind::Fixed;
    spec.fixed_region = fixed->region;
    spec.th = thresholds(p);
  } else if (const auto* opt = std::get_if<OptimalPolicy>(&policy)) {
    spec.kind = PolicyKind::Optimal;
    spec.th = opt->thresholds;
  } else {
    const auto& hyb = std::get<HybridPolicy>(policy);
    spec.kind = PolicyKind::Hybrid;
    spec.th = hyb.target;
    spec.hybrid_far =
        hyb.target.y_hat_i < hyb.target.y_hat_m ? Region::S : Region::N;
  }
  return spec;
}

}  // namespace

TerminalStats run_terminal(const ModelParams& p, const Policy& policy,
                           PlatformState initial, std::size_t n_steps,
                           SplitMix64 rng, const std::optional<Shock>& shock) {
  require_valid(p);
  if (!(initial.total() > 0.0)) {
    throw std::domain_error("run_terminal requires a nonempty platform");
  }
  const RunSpec spec = resolve(policy, p);

  const std::size_t window = std::max<std::size_t>(1, n_steps / 100);
  double window_sum = 0.0;
  std::size_t window_count = 0;

  double t = initial.t_count;
  double f = initial.f_count;
  double y = t / (t + f);

  if (n_steps == 0) {
    window_sum = y;
    window_count = 1;
  }

  for (std::size_t i = 0; i < n_steps; ++i) {
    if (shock && i == shock->at_step) {
      t += shock->add_true;
      f += shock->add_false;
      y = t / (t + f);
    }

    Region region = spec.kind == PolicyKind::Fixed ? spec.fixed_region
                                                   : region_of(y, spec.th);
    const double u = rng.next_unit();
    if (spec.kind == PolicyKind::Hybrid && region == spec.hybrid_far) {
      // Deterministic drift toward the threshold; draw consumed to keep the
      // stream aligned across policies.
      if (spec.hybrid_far == Region::N) {
        t += 1.0;
      } else {
        f += 1.0;
      }
    } else {
      const detail::ProbPair pr = detail::probs(region, y, p);
      if (u < pr.p_true) {
        t += 1.0 + p.rho;
        f += p.kappa;
      } else if (u < pr.p_true + pr.p_false) {
        t += 1.0;
        f += p.kappa + p.rho;
      } else {
        t += 1.0;
        f += p.kappa;
      }
    }
    y = t / (t + f);
    if (i + window >= n_steps) {
      window_sum += y;
      ++window_count;
    }
  }

  TerminalStats stats;
  stats.window_mean = window_sum / static_cast<double>(window_count);
  stats.final_state = PlatformState{t, f};
  stats.final_region = region_of(y, spec.th);
  return stats;
}

LimitDistribution estimate_limit_distribution(const ModelParams& p,
                                              const PlatformState& initial,
                                              std::size_t n_runs,
                                              std::size_t n_steps,
                                              std::uint64_t seed,
                                              double eps_assign, int threads) {
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  const LimitAnalysis analysis = analyze(p);

  LimitDistribution dist;
  dist.params = p;
  dist.initial = initial;
  dist.n_runs = n_runs;
  dist.n_steps = n_steps;
  dist.seed = seed;
  dist.eps_assign = eps_assign;
  dist.terminal_y.assign(n_runs, 0.0);
  for (const auto& s : analysis.stable_set) dist.assignment.push_back({s, 0});

  const Policy policy = OptimalPolicy{analysis.thresholds};
  parallel_for(n_runs, threads, [&](std::size_t run) {
    const auto stats = run_terminal(p, policy, initial, n_steps,
                                    SplitMix64::stream(seed, run));
    dist.terminal_y[run] = stats.window_mean;
  });

  // Nearest stable steady state within eps_assign; never an unstable point.
  for (double y : dist.terminal_y) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < dist.assignment.size(); ++i) {
      const double d = std::abs(y - dist.assignment[i].point.location);
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    if (best_dist <= eps_assign) {
      ++dist.assignment[best].count;
    } else {
      ++dist.unassigned_count;
    }
  }
  return dist;
}

NonconvergenceReport nonconvergence_check(const ModelParams& p,
                                          const LdiSteadyState& point,
                                          std::size_t n_runs,
                                          std::size_t n_steps,
                                          std::uint64_t seed, int threads) {
  const LimitAnalysis analysis = analyze(p);
  const auto matches = [&](const LdiSteadyState& s) {
    return std::abs(s.location - point.location) < kKnifeEdgeTol &&
           s.stability == point.stability;
  };
  const bool known =
      std::any_of(analysis.stable_set.begin(), analysis.stable_set.end(), matches) ||
      std::any_of(analysis.unstable_set.begin(), analysis.unstable_set.end(), matches);
  if (!known) {
    throw std::invalid_argument(
        "nonconvergence_check: point is not a steady state of this analysis");
  }

  NonconvergenceReport report;
  report.n_runs = n_runs;
  if (n_runs == 0) return report;

  // Early-platform start pinned at the point itself.
  const double z0 = 100.0;
  const PlatformState initial{z0 * point.location, z0 * (1.0 - point.location)};
  const Policy policy = OptimalPolicy{analysis.thresholds};

  std::vector<unsigned char> near(n_runs, 0);
  parallel_for(n_runs, threads, [&](std::size_t run) {
    const auto stats = run_terminal(p, policy, initial, n_steps,
                                    SplitMix64::stream(seed, run));
    near[run] = std::abs(stats.window_mean - point.location) < 0.01 ? 1 : 0;
  });
  for (auto flag : near) report.near_count += flag;
  report.fraction =
      static_cast<double>(report.near_count) / static_cast<double>(n_runs);
  return report;
}

std::string limit_behavior(const LdiSteadyState& point, const Thresholds& th) {
  auto region_behavior = [](Region r) -> std::string {
    switch (r) {
      case Region::N: return "no sharing";
      case Region::I: return "share very interesting T' stories only";
      case Region::M: return "share mildly interesting T' stories only";
      case Region::S: return "share all T' stories";
    }
    return "?";
  };
  if (point.kind == LdiSteadyState::Kind::Quasi) {
    return region_behavior(point.quasi_region);
  }
  const bool lower = point.location == th.lo();
  const Region left = lower ? Region::N : th.intermediate_region;
  const Region right = lower ? th.intermediate_region : Region::S;
  return "mix at threshold: " + region_behavior(left) + " / " +
         region_behavior(right);
}

PathDependenceReport path_dependence_report(const ModelParams& p,
                                            const PlatformState& initial,
                                            std::size_t n_runs,
                                            std::size_t n_steps,
                                            std::uint64_t seed,
                                            double eps_assign, int threads) {
  const LimitAnalysis analysis = analyze(p);
  if (analysis.stable_set.size() < 2) {
    throw std::invalid_argument(
        "path_dependence_report requires at least two stable steady states");
  }
  const LimitDistribution dist = estimate_limit_distribution(
      p, initial, n_runs, n_steps, seed, eps_assign, threads);

  PathDependenceReport report;
  report.unassigned_count = dist.unassigned_count;
  for (const auto& entry : dist.assignment) {
    if (entry.count == 0) continue;
    report.classes.push_back(
        {entry.point, limit_behavior(entry.point, analysis.thresholds),
         entry.count});
  }
  report.degenerate = report.classes.size() <= 1;
  return report;
}

}  // namespace storyshare
