#pragma once

#include <optional>
#include <string>
#include <vector>

#include "storyshare/limit.hpp"

namespace storyshare {

enum class ParamName { Rho, Kappa, Theta, Mu, Beta, Delta, Lambda };

const char* to_string(ParamName p);
double get_param(const ModelParams& p, ParamName name);
ModelParams with_param(ModelParams p, ParamName name, double value);

// The candidate limit points and thresholds whose comparative statics the
// theory pins down.
enum class LandmarkId { YStarN, YStarI, YStarM, YStarS, YHatI, YHatM };

const char* to_string(LandmarkId l);
double landmark_value(LandmarkId l, const ModelParams& p);

// Whether the landmark is a limit point: a quasi steady state inside its own
// region, or a threshold in S_F.
bool landmark_is_limit_point(LandmarkId l, const LimitAnalysis& analysis);

// Canonical composition label for S_F, e.g. "{y*_n,y_hat_i}".
std::string sf_composition(const LimitAnalysis& analysis);

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepPoint {
  double value;
  bool knife_edge = false;  // recorded and skipped
  std::optional<LimitAnalysis> analysis;
};

struct SweepTransition {
  double lo;  // last grid value with the old composition
  double hi;  // first grid value with the new composition
  std::string sf_before;
  std::string sf_after;
};

struct SweepResult {
  ParamName parameter;
  std::vector<SweepPoint> points;            // grid strictly increasing
  std::vector<SweepTransition> transitions;  // S_F composition changes
};

// Full LimitAnalysis at each of n_points evenly spaced values in [lo, hi].
// Every grid point must pass validate (ValidationError otherwise); knife-edge
// points are recorded and skipped. Throws std::runtime_error("empty-valid-grid")
// if no point survives.
SweepResult sweep(ParamName parameter, double lo, double hi, int n_points,
                  const ModelParams& base);

// ---------------------------------------------------------------------------
// Finite-difference sign checks against the comparative-statics theorems

enum class PredictedSign {
  Increasing,
  Decreasing,
  Constant,
  NonMonotone,  // single interior sign change in theta (or delta for y*_S)
  Conditional,  // y*_I vs rho: sign of 1/2 - delta theta (1 - a(y,I))
};

// The theorem-level prediction for d(landmark)/d(parameter).
PredictedSign predicted_sign(LandmarkId l, ParamName p);

enum class SignVerdict { Pass, Fail, NotComparable };

struct SignReport {
  LandmarkId target;
  ParamName parameter;
  PredictedSign predicted;
  double base_value;        // parameter value at the base
  double h;                 // stencil half-width
  double derivative;        // central finite difference
  double difference;        // landmark(base+h) - landmark(base-h)
  SignVerdict verdict;
  std::string detail;
};

// Central finite difference of the landmark at base, compared to the
// theorem's prediction. "Constant" requires |difference| <= kKnifeEdgeTol.
// NotComparable when the landmark's in-region / limit-point status changes
// inside [base-h, base+h] (the comparative statics only apply where the
// landmark is a limit point). Default h = 1e-5 * max(1, |base value|).
SignReport sign_check(LandmarkId target, ParamName parameter,
                      const ModelParams& base, double h = 0.0);

// ---------------------------------------------------------------------------
// Theta shape detection (decreasing-then-increasing quasi steady states)

struct ThetaShapeReport {
  LandmarkId target;
  std::vector<double> grid;         // admissible theta values actually used
  std::vector<int> derivative_sign; // sign of d(landmark)/d(theta) per point
  std::optional<double> theta_r;    // estimated sign-change location
  bool monotone_decreasing = false; // no sign change in the admissible range
};

// Detects the single sign change of d(y*_R)/d(theta) over the given grid.
// Grid values are truncated to (0, min(1, 2 beta / mu) - 1e-6) so every
// evaluation satisfies the parameter assumptions.
ThetaShapeReport theta_shape(LandmarkId target, const ModelParams& base,
                             std::vector<double> grid);

// ---------------------------------------------------------------------------
// Kappa regime bounds

struct KappaBounds {
  double kappa1;  // supremum of kappa with S_F = {y*_s}
  double kappa2;  // infimum of kappa with S_F = {y*_n}
};

// Requires S_F = {y*_s} at lo and S_F = {y*_n} at hi (throws
// std::runtime_error("bounds-not-bracketed") otherwise); each bound located by
// bisection on the composition classifier to 1e-6.
KappaBounds kappa_bounds(const ModelParams& base, double lo, double hi);

}  // namespace storyshare
