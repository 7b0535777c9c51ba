#include "storyshare/params.hpp"

#include <cmath>
#include <sstream>

namespace storyshare {

const char* to_string(Region r) {
  switch (r) {
    case Region::N: return "N";
    case Region::I: return "I";
    case Region::M: return "M";
    case Region::S: return "S";
  }
  return "?";
}

const char* to_string(Evocativeness e) {
  return e == Evocativeness::M ? "M" : "I";
}

std::vector<std::string> validate(const ModelParams& p) {
  std::vector<std::string> violations;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) violations.push_back(msg);
  };

  const bool finite = std::isfinite(p.rho) && std::isfinite(p.kappa) &&
                      std::isfinite(p.theta) && std::isfinite(p.mu) &&
                      std::isfinite(p.beta) && std::isfinite(p.delta) &&
                      std::isfinite(p.lambda);
  check(finite, "all parameters must be finite");

  check(p.rho > 0.0, "rho must be strictly positive");
  check(p.kappa > 0.0, "kappa must be strictly positive");
  check(p.mu > 0.0, "mu must be strictly positive");
  check(p.beta > 0.0, "beta must be strictly positive");
  check(p.theta > 0.0 && p.theta < 1.0, "theta must lie in (0,1)");
  check(p.lambda > 0.0 && p.lambda < 1.0, "lambda must lie in (0,1)");
  check(p.delta > 0.5 && p.delta < 1.0, "delta must lie in (1/2,1)");

  // The assumptions are only meaningful once the ranges above hold.
  if (p.lambda > 0.0 && p.lambda < 1.0) {
    check(p.mu > (1.0 - p.lambda) / p.lambda,
          "assumption 1 violated: mu must exceed (1-lambda)/lambda");
  }
  check(p.mu * p.theta < 2.0 * p.beta,
        "assumption 2 violated: mu*theta must be below 2*beta");

  return violations;
}

bool is_valid(const ModelParams& p) { return validate(p).empty(); }

void require_valid(const ModelParams& p) {
  const auto violations = validate(p);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid model parameters:";
  for (const auto& v : violations) msg << " [" << v << "]";
  throw ValidationError(msg.str());
}

double PlatformState::share_true() const {
  const double n = total();
  if (!(n > 0.0)) {
    throw std::domain_error("share_true requires a nonempty platform");
  }
  return t_count / n;
}

}  // namespace storyshare
