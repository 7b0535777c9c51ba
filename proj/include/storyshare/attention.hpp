#pragma once

#include "storyshare/params.hpp"

namespace storyshare {

// Optimal attention level conditional on sharing T'-signal stories:
//
//   a(y,M) = lambda*mu*(1-y)*(1-delta)*theta / (beta*(y + 2(1-y)(1-delta)))
//   a(y,I) = (1-y)*delta*theta*(lambda*mu - (1-lambda)) / (beta*(y + 2(1-y)delta))
//
// Under the parameter assumptions both lie in [0,1] (strictly positive for
// y < 1); a violation is asserted, not clamped, since it signals a parameter
// validation bug.
double attention_level(double y, Evocativeness e, const ModelParams& p);

// Expected payoff U(a,y,e) from attending at level a and sharing iff the
// signal is T', quadratic in a:
//
//   U(a,y,M) = lambda*(y - 2 mu (1-y)(1-delta) theta)/d_M
//            + [2 lambda mu (1-y)(1-delta) theta / d_M] a - beta a^2
//   U(a,y,I) = [y + 2(1-y) delta theta ((1-lambda)-lambda mu)]/d_I
//            + [2(1-y) delta theta (lambda mu-(1-lambda)) / d_I] a - beta a^2
//
// with d_M = y + 2(1-y)(1-delta), d_I = y + 2(1-y)delta.
double sharing_utility(double a, double y, Evocativeness e, const ModelParams& p);

// Value of the sharing option: V(y,e) = U(a(y,e), y, e), in closed form.
// Strictly increasing in y, with V(0,e) < 0 < V(1,e).
double value(double y, Evocativeness e, const ModelParams& p);

// The two indifference points V(y_hat_e, e) = 0 and the induced intermediate
// region: I if y_hat_i < y_hat_m, else M.
struct Thresholds {
  double y_hat_i;
  double y_hat_m;
  Region intermediate_region;

  double lo() const { return y_hat_i < y_hat_m ? y_hat_i : y_hat_m; }
  double hi() const { return y_hat_i < y_hat_m ? y_hat_m : y_hat_i; }
};

// Solves V(.,e) = 0 on (0,1) by bisection (sign change V(0,e) < 0 < V(1,e),
// V strictly increasing). Residual |V(y_hat_e, e)| <= kRootTol.
// Throws KnifeEdgeError if |y_hat_i - y_hat_m| < kKnifeEdgeTol.
Thresholds thresholds(const ModelParams& p);

// Bisection on [0,1] for a function with f(0) > 0 > f(1) or f(0) < 0 < f(1).
// Shared by the threshold and quasi-steady-state solvers.
template <typename F>
double bisect_unit_interval(F&& f) {
  double lo = 0.0, hi = 1.0;
  double flo = f(lo);
  // Orient so f(lo) < 0 < f(hi).
  if (flo > 0.0) {
    lo = 1.0;
    hi = 0.0;
  }
  for (int i = 0; i < kMaxBisectIter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // interval at floating-point resolution
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace storyshare
