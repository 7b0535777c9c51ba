#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "storyshare/attention.hpp"
#include "storyshare/params.hpp"
#include "storyshare/rng.hpp"

namespace storyshare {

// Probabilities that the current user shares a true / false story under the
// sharing rule of one region.
struct SharingProbs {
  double p_true;
  double p_false;
};

// Region of a given share of true stories. A value exactly equal to a
// threshold is assigned to the region on the right; the event has probability
// zero in exact arithmetic and the deterministic rule keeps runs reproducible.
Region region_of(double y, const Thresholds& th);

// The four-case sharing kernel:
//   S: ( y,   (1-y) theta (1 - delta a(y,I) - (1-delta) a(y,M)) )
//   I: ( y/2, (1-y) delta theta (1 - a(y,I)) )
//   M: ( y/2, (1-y)(1-delta) theta (1 - a(y,M)) )
//   N: ( 0, 0 )
SharingProbs sharing_probs(Region region, double y, const ModelParams& p);

// Users follow the sharing rule of the current region.
struct OptimalPolicy {
  Thresholds thresholds;
};

// Counterfactual urn: users follow region R's rule at every state.
struct FixedPolicy {
  Region region;
};

// Hybrid process used to reach a stable threshold: the two regions adjacent
// to y_hat_i keep their law of motion, while in the one non-adjacent region
// the state moves deterministically toward the threshold (one true story per
// period if that region lies left of it, one false story if right). Only
// meaningful when y_hat_i is a stable steady state; make_hybrid_policy in
// limit.hpp checks that precondition.
struct HybridPolicy {
  Thresholds target;
};

using Policy = std::variant<OptimalPolicy, FixedPolicy, HybridPolicy>;

// One transition of the urn. With probability p_true adds (1+rho, kappa);
// with probability p_false adds (1, kappa+rho); otherwise adds (1, kappa).
// Consumes exactly one draw from rng. Requires state.total() > 0.
PlatformState step(const PlatformState& state, const Policy& policy,
                   const ModelParams& p, SplitMix64& rng);

struct Trajectory {
  std::uint64_t seed = 0;
  ModelParams params{};
  std::vector<PlatformState> states;   // n_steps + 1 entries
  std::vector<Region> regions_visited; // region of each recorded state
};

// Applies step() n_steps times, recording every state and its region.
// Fully reproducible from the seed.
Trajectory simulate(const PlatformState& initial, const Policy& policy,
                    const ModelParams& p, std::size_t n_steps,
                    std::uint64_t seed);

}  // namespace storyshare
