#include "storyshare/attention.hpp"

#include <cmath>
#include <sstream>

#include "storyshare/detail/kernels.hpp"

namespace storyshare {

double attention_level(double y, Evocativeness e, const ModelParams& p) {
  require_valid(p);
  const double a = detail::attention(y, e, p);
  if (!(a >= 0.0 && a <= 1.0)) {
    std::ostringstream msg;
    msg << "attention level " << a << " outside [0,1] at y=" << y
        << " e=" << to_string(e) << "; parameter validation bug";
    throw std::logic_error(msg.str());
  }
  return a;
}

double sharing_utility(double a, double y, Evocativeness e,
                       const ModelParams& p) {
  require_valid(p);
  if (e == Evocativeness::M) {
    const double d = detail::denom_m(y, p);
    const double constant =
        p.lambda * (y - 2.0 * p.mu * (1.0 - y) * (1.0 - p.delta) * p.theta) / d;
    const double slope =
        2.0 * p.lambda * p.mu * (1.0 - y) * (1.0 - p.delta) * p.theta / d;
    return constant + slope * a - p.beta * a * a;
  }
  const double d = detail::denom_i(y, p);
  const double constant =
      (y + 2.0 * (1.0 - y) * p.delta * p.theta *
               ((1.0 - p.lambda) - p.lambda * p.mu)) / d;
  const double slope =
      2.0 * (1.0 - y) * p.delta * p.theta * detail::net_weight_i(p) / d;
  return constant + slope * a - p.beta * a * a;
}

double value(double y, Evocativeness e, const ModelParams& p) {
  require_valid(p);
  return e == Evocativeness::M ? detail::value_m(y, p) : detail::value_i(y, p);
}

Thresholds thresholds(const ModelParams& p) {
  require_valid(p);
  const double y_hat_i =
      bisect_unit_interval([&](double y) { return detail::value_i(y, p); });
  const double y_hat_m =
      bisect_unit_interval([&](double y) { return detail::value_m(y, p); });
  if (std::abs(y_hat_i - y_hat_m) < kKnifeEdgeTol) {
    std::ostringstream msg;
    msg << "knife-edge configuration: thresholds coincide (y_hat_i=" << y_hat_i
        << ", y_hat_m=" << y_hat_m << ")";
    throw KnifeEdgeError(msg.str());
  }
  return Thresholds{
      y_hat_i,
      y_hat_m,
      y_hat_i < y_hat_m ? Region::I : Region::M,
  };
}

}  // namespace storyshare
