#include "storyshare/statics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "storyshare/detail/kernels.hpp"

namespace storyshare {

const char* to_string(ParamName p) {
  switch (p) {
    case ParamName::Rho: return "rho";
    case ParamName::Kappa: return "kappa";
    case ParamName::Theta: return "theta";
    case ParamName::Mu: return "mu";
    case ParamName::Beta: return "beta";
    case ParamName::Delta: return "delta";
    case ParamName::Lambda: return "lambda";
  }
  return "?";
}

double get_param(const ModelParams& p, ParamName name) {
  switch (name) {
    case ParamName::Rho: return p.rho;
    case ParamName::Kappa: return p.kappa;
    case ParamName::Theta: return p.theta;
    case ParamName::Mu: return p.mu;
    case ParamName::Beta: return p.beta;
    case ParamName::Delta: return p.delta;
    case ParamName::Lambda: return p.lambda;
  }
  throw std::logic_error("unknown parameter");
}

ModelParams with_param(ModelParams p, ParamName name, double value) {
  switch (name) {
    case ParamName::Rho: p.rho = value; break;
    case ParamName::Kappa: p.kappa = value; break;
    case ParamName::Theta: p.theta = value; break;
    case ParamName::Mu: p.mu = value; break;
    case ParamName::Beta: p.beta = value; break;
    case ParamName::Delta: p.delta = value; break;
    case ParamName::Lambda: p.lambda = value; break;
  }
  return p;
}

const char* to_string(LandmarkId l) {
  switch (l) {
    case LandmarkId::YStarN: return "y*_n";
    case LandmarkId::YStarI: return "y*_i";
    case LandmarkId::YStarM: return "y*_m";
    case LandmarkId::YStarS: return "y*_s";
    case LandmarkId::YHatI: return "y_hat_i";
    case LandmarkId::YHatM: return "y_hat_m";
  }
  return "?";
}

double landmark_value(LandmarkId l, const ModelParams& p) {
  switch (l) {
    case LandmarkId::YStarN: return quasi_steady_state(Region::N, p);
    case LandmarkId::YStarI: return quasi_steady_state(Region::I, p);
    case LandmarkId::YStarM: return quasi_steady_state(Region::M, p);
    case LandmarkId::YStarS: return quasi_steady_state(Region::S, p);
    case LandmarkId::YHatI: return thresholds(p).y_hat_i;
    case LandmarkId::YHatM: return thresholds(p).y_hat_m;
  }
  throw std::logic_error("unknown landmark");
}

namespace {

bool is_quasi_landmark(LandmarkId l) {
  return l == LandmarkId::YStarN || l == LandmarkId::YStarI ||
         l == LandmarkId::YStarM || l == LandmarkId::YStarS;
}

Region quasi_region_of_landmark(LandmarkId l) {
  switch (l) {
    case LandmarkId::YStarN: return Region::N;
    case LandmarkId::YStarI: return Region::I;
    case LandmarkId::YStarM: return Region::M;
    case LandmarkId::YStarS: return Region::S;
    default: throw std::logic_error("not a quasi-steady-state landmark");
  }
}

const char* steady_state_name(const LdiSteadyState& s) {
  if (s.kind == LdiSteadyState::Kind::Threshold) {
    return s.threshold_of == Evocativeness::I ? "y_hat_i" : "y_hat_m";
  }
  switch (s.quasi_region) {
    case Region::N: return "y*_n";
    case Region::I: return "y*_i";
    case Region::M: return "y*_m";
    case Region::S: return "y*_s";
  }
  return "?";
}

}  // namespace

bool landmark_is_limit_point(LandmarkId l, const LimitAnalysis& analysis) {
  for (const auto& s : analysis.stable_set) {
    if (is_quasi_landmark(l)) {
      if (s.kind == LdiSteadyState::Kind::Quasi &&
          s.quasi_region == quasi_region_of_landmark(l)) {
        return true;
      }
    } else {
      const Evocativeness which =
          l == LandmarkId::YHatI ? Evocativeness::I : Evocativeness::M;
      if (s.kind == LdiSteadyState::Kind::Threshold && s.threshold_of == which) {
        return true;
      }
    }
  }
  return false;
}

std::string sf_composition(const LimitAnalysis& analysis) {
  std::string out = "{";
  for (std::size_t i = 0; i < analysis.stable_set.size(); ++i) {
    if (i > 0) out += ",";
    out += steady_state_name(analysis.stable_set[i]);
  }
  out += "}";
  return out;
}

// ---------------------------------------------------------------------------

SweepResult sweep(ParamName parameter, double lo, double hi, int n_points,
                  const ModelParams& base) {
  if (n_points < 1) throw std::invalid_argument("sweep needs n_points >= 1");
  if (n_points > 1 && !(lo < hi)) {
    throw std::invalid_argument("sweep needs lo < hi");
  }

  SweepResult result;
  result.parameter = parameter;
  result.points.reserve(static_cast<std::size_t>(n_points));

  for (int i = 0; i < n_points; ++i) {
    const double value =
        n_points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n_points - 1);
    const ModelParams p = with_param(base, parameter, value);
    require_valid(p);  // every grid point must yield valid params

    SweepPoint point;
    point.value = value;
    try {
      point.analysis = analyze(p);
    } catch (const KnifeEdgeError&) {
      point.knife_edge = true;  // recorded and skipped
    }
    result.points.push_back(std::move(point));
  }

  const SweepPoint* prev = nullptr;
  std::size_t n_live = 0;
  for (const auto& point : result.points) {
    if (point.knife_edge) continue;
    ++n_live;
    if (prev != nullptr) {
      const std::string before = sf_composition(*prev->analysis);
      const std::string after = sf_composition(*point.analysis);
      if (before != after) {
        result.transitions.push_back({prev->value, point.value, before, after});
      }
    }
    prev = &point;
  }
  if (n_live == 0) throw std::runtime_error("empty-valid-grid");
  return result;
}

// ---------------------------------------------------------------------------

PredictedSign predicted_sign(LandmarkId l, ParamName p) {
  using PS = PredictedSign;
  switch (l) {
    case LandmarkId::YStarN:
      return p == ParamName::Kappa ? PS::Decreasing : PS::Constant;
    case LandmarkId::YStarS:
      switch (p) {
        case ParamName::Rho: return PS::Increasing;
        case ParamName::Kappa: return PS::Decreasing;
        case ParamName::Theta: return PS::NonMonotone;
        case ParamName::Mu: return PS::Increasing;
        case ParamName::Beta: return PS::Decreasing;
        case ParamName::Delta: return PS::NonMonotone;
        case ParamName::Lambda: return PS::Increasing;
      }
      break;
    case LandmarkId::YStarI:
      switch (p) {
        case ParamName::Rho: return PS::Conditional;
        case ParamName::Kappa: return PS::Decreasing;
        case ParamName::Theta: return PS::NonMonotone;
        case ParamName::Mu: return PS::Increasing;
        case ParamName::Beta: return PS::Decreasing;
        case ParamName::Delta: return PS::Decreasing;
        case ParamName::Lambda: return PS::Increasing;
      }
      break;
    case LandmarkId::YStarM:
      switch (p) {
        case ParamName::Rho: return PS::Increasing;
        case ParamName::Kappa: return PS::Decreasing;
        case ParamName::Theta: return PS::NonMonotone;
        case ParamName::Mu: return PS::Increasing;
        case ParamName::Beta: return PS::Decreasing;
        case ParamName::Delta: return PS::Increasing;
        case ParamName::Lambda: return PS::Increasing;
      }
      break;
    case LandmarkId::YHatI:
      switch (p) {
        case ParamName::Rho: return PS::Constant;
        case ParamName::Kappa: return PS::Constant;
        case ParamName::Delta: return PS::Increasing;
        case ParamName::Lambda: return PS::Increasing;
        default: return PS::Increasing;  // theta, mu, beta
      }
    case LandmarkId::YHatM:
      switch (p) {
        case ParamName::Rho: return PS::Constant;
        case ParamName::Kappa: return PS::Constant;
        case ParamName::Delta: return PS::Decreasing;
        case ParamName::Lambda: return PS::Decreasing;
        default: return PS::Increasing;  // theta, mu, beta
      }
  }
  throw std::logic_error("unknown landmark/parameter pair");
}

namespace {

// The region of the partition that contains a landmark value, used to detect
// the landmark crossing a region boundary inside the stencil.
Region containing_region(double value, const Thresholds& th) {
  return region_of(value, th);
}

}  // namespace

SignReport sign_check(LandmarkId target, ParamName parameter,
                      const ModelParams& base, double h) {
  const double x0 = get_param(base, parameter);
  if (h <= 0.0) h = 1e-5 * std::max(1.0, std::abs(x0));

  SignReport report;
  report.target = target;
  report.parameter = parameter;
  report.predicted = predicted_sign(target, parameter);
  report.base_value = x0;
  report.h = h;
  report.derivative = 0.0;
  report.difference = 0.0;

  const ModelParams p_minus = with_param(base, parameter, x0 - h);
  const ModelParams p_plus = with_param(base, parameter, x0 + h);
  require_valid(p_minus);  // pre: base +- h both valid
  require_valid(p_plus);

  double f_minus, f_plus;
  Region r_minus, r_base, r_plus;
  try {
    f_minus = landmark_value(target, p_minus);
    f_plus = landmark_value(target, p_plus);
    if (is_quasi_landmark(target)) {
      const double f_base = landmark_value(target, base);
      r_minus = containing_region(f_minus, thresholds(p_minus));
      r_base = containing_region(f_base, thresholds(base));
      r_plus = containing_region(f_plus, thresholds(p_plus));
      if (r_minus != r_base || r_plus != r_base) {
        report.verdict = SignVerdict::NotComparable;
        report.detail = "landmark crosses a region boundary inside the stencil";
        return report;
      }
    }
  } catch (const KnifeEdgeError& e) {
    report.verdict = SignVerdict::NotComparable;
    report.detail = std::string("knife edge inside the stencil: ") + e.what();
    return report;
  }

  report.difference = f_plus - f_minus;
  report.derivative = report.difference / (2.0 * h);

  auto pass = [&](bool ok, const char* expect) {
    report.verdict = ok ? SignVerdict::Pass : SignVerdict::Fail;
    std::ostringstream detail;
    detail << "expected " << expect << ", derivative " << report.derivative;
    report.detail = detail.str();
  };

  switch (report.predicted) {
    case PredictedSign::Increasing:
      pass(report.derivative > 0.0, "increasing");
      break;
    case PredictedSign::Decreasing:
      pass(report.derivative < 0.0, "decreasing");
      break;
    case PredictedSign::Constant:
      pass(std::abs(report.difference) <= kKnifeEdgeTol, "constant");
      break;
    case PredictedSign::Conditional: {
      // y*_I direction in rho: increasing iff 1/2 > delta*theta*(1 - a(y*_I, I)).
      const double y_star = landmark_value(LandmarkId::YStarI, base);
      const double rule =
          0.5 - base.delta * base.theta * (1.0 - detail::attention_i(y_star, base));
      pass(rule > 0.0 ? report.derivative > 0.0 : report.derivative < 0.0,
           rule > 0.0 ? "increasing (rule positive)" : "decreasing (rule negative)");
      break;
    }
    case PredictedSign::NonMonotone:
      // No pointwise prediction; shape is checked by theta_shape / sweeps.
      report.verdict = SignVerdict::Pass;
      report.detail = "no definite pointwise prediction";
      break;
  }
  return report;
}

// ---------------------------------------------------------------------------

ThetaShapeReport theta_shape(LandmarkId target, const ModelParams& base,
                             std::vector<double> grid) {
  if (!is_quasi_landmark(target)) {
    throw std::invalid_argument("theta_shape targets a quasi steady state");
  }
  ThetaShapeReport report;
  report.target = target;

  // Assumption 2 caps theta below 2*beta/mu.
  const double cap = std::min(1.0, 2.0 * base.beta / base.mu) - 1e-6;
  std::sort(grid.begin(), grid.end());
  for (double t : grid) {
    if (t > 1e-6 && t < cap) report.grid.push_back(t);
  }
  if (report.grid.size() < 2) throw std::invalid_argument("theta grid too small");

  auto derivative_at = [&](double t) {
    double h = 1e-5;
    h = std::min(h, 0.5 * (cap - t));
    h = std::min(h, 0.5 * (t - 1e-7));
    const double f_plus = landmark_value(target, with_param(base, ParamName::Theta, t + h));
    const double f_minus = landmark_value(target, with_param(base, ParamName::Theta, t - h));
    return (f_plus - f_minus) / (2.0 * h);
  };

  report.derivative_sign.reserve(report.grid.size());
  for (double t : report.grid) {
    const double d = derivative_at(t);
    report.derivative_sign.push_back(d > 0.0 ? 1 : (d < 0.0 ? -1 : 0));
  }

  // Single negative-to-positive sign change expected; refine by bisection on
  // the finite-difference derivative.
  for (std::size_t i = 1; i < report.grid.size(); ++i) {
    if (report.derivative_sign[i - 1] < 0 && report.derivative_sign[i] > 0) {
      double a = report.grid[i - 1];
      double b = report.grid[i];
      for (int iter = 0; iter < 60 && b - a > 1e-7; ++iter) {
        const double mid = 0.5 * (a + b);
        (derivative_at(mid) < 0.0 ? a : b) = mid;
      }
      report.theta_r = 0.5 * (a + b);
      return report;
    }
  }
  report.monotone_decreasing = std::all_of(
      report.derivative_sign.begin(), report.derivative_sign.end(),
      [](int s) { return s < 0; });
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// S_F composition at the given kappa; nudges past knife-edge values, which sit
// exactly at composition changes.
std::string sf_at_kappa(const ModelParams& base, double kappa) {
  static constexpr double kNudge[] = {0.0, 3e-7, -3e-7, 1e-6, -1e-6};
  for (double nudge : kNudge) {
    try {
      return sf_composition(analyze(with_param(base, ParamName::Kappa, kappa + nudge)));
    } catch (const KnifeEdgeError&) {
      continue;
    }
  }
  throw std::runtime_error("kappa_bounds: persistent knife edge near kappa");
}

}  // namespace

KappaBounds kappa_bounds(const ModelParams& base, double lo, double hi) {
  if (!(0.0 < lo && lo < hi)) {
    throw std::invalid_argument("kappa_bounds needs 0 < lo < hi");
  }
  const std::string all_sharing = "{y*_s}";
  const std::string no_sharing = "{y*_n}";
  if (sf_at_kappa(base, lo) != all_sharing || sf_at_kappa(base, hi) != no_sharing) {
    throw std::runtime_error("bounds-not-bracketed");
  }

  auto bisect_edge = [&](const std::string& want, double at_true, double at_false) {
    double t = at_true, f = at_false;
    while (std::abs(f - t) > 1e-6) {
      const double mid = 0.5 * (t + f);
      (sf_at_kappa(base, mid) == want ? t : f) = mid;
    }
    return 0.5 * (t + f);
  };

  KappaBounds bounds;
  bounds.kappa1 = bisect_edge(all_sharing, lo, hi);
  bounds.kappa2 = bisect_edge(no_sharing, hi, lo);
  if (!(bounds.kappa1 < bounds.kappa2)) {
    throw std::runtime_error("kappa_bounds: regime edges out of order");
  }
  return bounds;
}

}  // namespace storyshare
