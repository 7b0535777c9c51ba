#pragma once

// Unchecked closed forms shared by the public API and the simulation hot
// loop. Callers are responsible for parameter validity; the public functions
// in attention.hpp / dynamics.hpp / limit.hpp validate and delegate here.

#include "storyshare/common.hpp"
#include "storyshare/params.hpp"

namespace storyshare::detail {

inline double denom_m(double y, const ModelParams& p) {
  return y + 2.0 * (1.0 - y) * (1.0 - p.delta);
}

inline double denom_i(double y, const ModelParams& p) {
  return y + 2.0 * (1.0 - y) * p.delta;
}

// lambda*mu - (1-lambda); positive under assumption 1.
inline double net_weight_i(const ModelParams& p) {
  return p.lambda * p.mu - (1.0 - p.lambda);
}

inline double attention_m(double y, const ModelParams& p) {
  return p.lambda * p.mu * (1.0 - y) * (1.0 - p.delta) * p.theta /
         (p.beta * denom_m(y, p));
}

inline double attention_i(double y, const ModelParams& p) {
  return (1.0 - y) * p.delta * p.theta * net_weight_i(p) /
         (p.beta * denom_i(y, p));
}

inline double attention(double y, Evocativeness e, const ModelParams& p) {
  return e == Evocativeness::M ? attention_m(y, p) : attention_i(y, p);
}

inline double value_m(double y, const ModelParams& p) {
  const double d = denom_m(y, p);
  const double x = p.lambda * p.mu * (1.0 - y) * (1.0 - p.delta) * p.theta / d;
  return p.lambda * (y - 2.0 * p.mu * (1.0 - y) * (1.0 - p.delta) * p.theta) / d +
         x * x / p.beta;
}

inline double value_i(double y, const ModelParams& p) {
  const double d = denom_i(y, p);
  const double x = (1.0 - y) * p.delta * p.theta * net_weight_i(p) / d;
  return (y + 2.0 * (1.0 - y) * p.delta * p.theta *
                  ((1.0 - p.lambda) - p.lambda * p.mu)) / d +
         x * x / p.beta;
}

struct ProbPair {
  double p_true;
  double p_false;
};

inline ProbPair probs(Region region, double y, const ModelParams& p) {
  switch (region) {
    case Region::S:
      return {y, (1.0 - y) * p.theta *
                     (1.0 - p.delta * attention_i(y, p) -
                      (1.0 - p.delta) * attention_m(y, p))};
    case Region::I:
      return {0.5 * y, (1.0 - y) * p.delta * p.theta * (1.0 - attention_i(y, p))};
    case Region::M:
      return {0.5 * y,
              (1.0 - y) * (1.0 - p.delta) * p.theta * (1.0 - attention_m(y, p))};
    case Region::N:
      return {0.0, 0.0};
  }
  return {0.0, 0.0};
}

inline double g(Region region, double y, const ModelParams& p) {
  const ProbPair pr = probs(region, y, p);
  return 1.0 + pr.p_true * p.rho -
         y * (1.0 + p.kappa + p.rho * (pr.p_true + pr.p_false));
}

}  // namespace storyshare::detail
