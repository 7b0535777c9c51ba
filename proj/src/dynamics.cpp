#include "storyshare/dynamics.hpp"

#include <stdexcept>

#include "storyshare/detail/kernels.hpp"

namespace storyshare {

Region region_of(double y, const Thresholds& th) {
  // Values exactly at a threshold belong to the region on the right.
  if (y < th.lo()) return Region::N;
  if (y < th.hi()) return th.intermediate_region;
  return Region::S;
}

SharingProbs sharing_probs(Region region, double y, const ModelParams& p) {
  require_valid(p);
  const detail::ProbPair pr = detail::probs(region, y, p);
  return SharingProbs{pr.p_true, pr.p_false};
}

namespace {

// Hybrid motion in the region not adjacent to y_hat_i: one story per period,
// moving y monotonically toward the threshold.
inline PlatformState hybrid_drift_step(const PlatformState& z, bool region_is_left) {
  if (region_is_left) return PlatformState{z.t_count + 1.0, z.f_count};
  return PlatformState{z.t_count, z.f_count + 1.0};
}

inline PlatformState apply_kernel(const PlatformState& z, Region region,
                                  double y, const ModelParams& p,
                                  SplitMix64& rng) {
  const detail::ProbPair pr = detail::probs(region, y, p);
  const double u = rng.next_unit();
  if (u < pr.p_true) {
    return PlatformState{z.t_count + 1.0 + p.rho, z.f_count + p.kappa};
  }
  if (u < pr.p_true + pr.p_false) {
    return PlatformState{z.t_count + 1.0, z.f_count + p.kappa + p.rho};
  }
  return PlatformState{z.t_count + 1.0, z.f_count + p.kappa};
}

struct StepVisitor {
  const PlatformState& z;
  double y;
  const ModelParams& p;
  SplitMix64& rng;

  PlatformState operator()(const OptimalPolicy& pol) const {
    return apply_kernel(z, region_of(y, pol.thresholds), y, p, rng);
  }
  PlatformState operator()(const FixedPolicy& pol) const {
    return apply_kernel(z, pol.region, y, p, rng);
  }
  PlatformState operator()(const HybridPolicy& pol) const {
    const Region region = region_of(y, pol.target);
    // The regions adjacent to y_hat_i keep their law of motion. The third
    // region is S when y_hat_i is the lower threshold, N when it is the upper.
    const bool i_is_lower = pol.target.y_hat_i < pol.target.y_hat_m;
    const Region far_region = i_is_lower ? Region::S : Region::N;
    if (region == far_region) {
      rng.next_unit();  // keep the draw stream aligned across policies
      return hybrid_drift_step(z, /*region_is_left=*/far_region == Region::N);
    }
    return apply_kernel(z, region, y, p, rng);
  }
};

}  // namespace

PlatformState step(const PlatformState& state, const Policy& policy,
                   const ModelParams& p, SplitMix64& rng) {
  require_valid(p);
  if (!(state.total() > 0.0)) {
    throw std::domain_error("step requires a nonempty platform");
  }
  const double y = state.share_true();
  return std::visit(StepVisitor{state, y, p, rng}, policy);
}

Trajectory simulate(const PlatformState& initial, const Policy& policy,
                    const ModelParams& p, std::size_t n_steps,
                    std::uint64_t seed) {
  require_valid(p);
  if (!(initial.total() > 0.0)) {
    throw std::domain_error("simulate requires a nonempty platform");
  }

  // Region bookkeeping uses the policy's thresholds when it has them; under
  // Fixed policies the partition still describes where the state is.
  const Thresholds* th = nullptr;
  if (const auto* opt = std::get_if<OptimalPolicy>(&policy)) th = &opt->thresholds;
  if (const auto* hyb = std::get_if<HybridPolicy>(&policy)) th = &hyb->target;
  Thresholds fallback{};
  if (th == nullptr) {
    fallback = thresholds(p);
    th = &fallback;
  }

  Trajectory traj;
  traj.seed = seed;
  traj.params = p;
  traj.states.reserve(n_steps + 1);
  traj.regions_visited.reserve(n_steps + 1);

  SplitMix64 rng = SplitMix64::stream(seed, 0);
  PlatformState z = initial;
  traj.states.push_back(z);
  traj.regions_visited.push_back(region_of(z.share_true(), *th));
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double y = z.share_true();
    z = std::visit(StepVisitor{z, y, p, rng}, policy);
    traj.states.push_back(z);
    traj.regions_visited.push_back(region_of(z.share_true(), *th));
  }
  return traj;
}

}  // namespace storyshare
