#pragma once

#include <utility>
#include <vector>

#include "storyshare/dynamics.hpp"

namespace storyshare {

// Right-hand side of the limit ODE for region R's urn:
//
//   g_R(y) = 1 + p^T_R(y) rho - y (1 + kappa + rho (p^T_R(y) + p^F_R(y)))
//
// g_R(0) = 1 and g_R(1) = -kappa for every region.
double g(Region region, double y, const ModelParams& p);

// Unique root of g_R in (0,1); globally stable for the region ODE. For N the
// closed form 1/(1+kappa); otherwise bisection from g(0) = 1 > 0 > -kappa = g(1).
double quasi_steady_state(Region region, const ModelParams& p);

// Both intermediate quasi steady states are computed even though only one
// region is live: the threshold flip test needs y*_I, and the comparative
// statics report both.
struct QuasiSteadyStates {
  double y_n;
  double y_i;
  double y_m;
  double y_s;

  double of(Region r) const;
};

QuasiSteadyStates quasi_steady_states(const ModelParams& p);

struct Interval {
  double lo;
  double hi;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// The limit differential inclusion F(y): the singleton {g_R(y)} inside region
// R, and at a threshold between R and W the interval spanned by the two
// one-sided values.
Interval ldi_value(double y, const Thresholds& th, const ModelParams& p);

enum class Stability { Stable, Unstable };

// A steady state of the LDI: either a quasi steady state lying inside its own
// region (always stable), or a threshold where the adjacent flows have
// opposite signs (stable iff they point inward on both sides).
struct LdiSteadyState {
  enum class Kind { Quasi, Threshold };

  double location;
  Kind kind;
  Region quasi_region;         // meaningful when kind == Quasi
  Evocativeness threshold_of;  // meaningful when kind == Threshold
  Stability stability;
};

// One of the 40 strict orderings of the two thresholds and the three live
// quasi steady states. threshold positions are 1-based ranks among the five
// sorted landmarks; free_pair_low names which Region's quasi steady state is
// the lower of the one pair the ordering constraints leave undetermined
// (y*_I vs y*_N when the intermediate region is I, y*_S vs y*_M when it is M).
struct ConfigIndex {
  enum class ThresholdOrder { IBelowM, MBelowI };

  ThresholdOrder threshold_order;
  int first_threshold_pos;   // position of the lower threshold, 1..4
  int second_threshold_pos;  // position of the higher threshold, 2..5
  Region free_pair_low;
};

// A named landmark location, for reporting and the phase diagram.
struct Landmark {
  const char* name;  // "y_hat_i", "y_hat_m", "y*_n", "y*_i"|"y*_m", "y*_s"
  double location;
};

struct LimitAnalysis {
  ModelParams params{};
  Thresholds thresholds{};
  QuasiSteadyStates qss{};
  std::vector<LdiSteadyState> stable_set;    // S_F, sorted by location
  std::vector<LdiSteadyState> unstable_set;  // repelling threshold steady states
  ConfigIndex configuration{};

  // The five landmarks that pin down the phase diagram, sorted by location.
  std::vector<Landmark> sorted_landmarks() const;
  Region live_intermediate() const { return thresholds.intermediate_region; }
};

// Full limit analysis: thresholds, quasi steady states, the threshold flip
// test, S_F, and the configuration index. Throws KnifeEdgeError when any two
// of the five landmarks coincide within kKnifeEdgeTol.
LimitAnalysis analyze(const ModelParams& p);

struct ScanLabel {
  double location;
  Stability stability;
};

// Independent stability oracle: evaluates the sign of the LDI selection on
// dense one-sided grids around each steady state and labels it from the sign
// pattern. Must agree with analyze()'s closed-form labels. Throws
// std::runtime_error("scan inconclusive...") if a grid point is degenerate
// (|g| < 1e-14).
std::vector<ScanLabel> classify_stability_by_scan(const LimitAnalysis& analysis,
                                                  const ModelParams& p);

// Builds the hybrid process targeting y_hat_i. Throws std::invalid_argument
// unless y_hat_i is a stable steady state of the analysis.
HybridPolicy make_hybrid_policy(const LimitAnalysis& analysis);

}  // namespace storyshare
