#include "storyshare/limit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "storyshare/detail/kernels.hpp"

namespace storyshare {

double g(Region region, double y, const ModelParams& p) {
  require_valid(p);
  return detail::g(region, y, p);
}

double quasi_steady_state(Region region, const ModelParams& p) {
  require_valid(p);
  if (region == Region::N) return 1.0 / (1.0 + p.kappa);
  // g_R(0) = 1 > 0 > -kappa = g_R(1), single root (g_R''' > 0).
  return bisect_unit_interval([&](double y) { return -detail::g(region, y, p); });
}

QuasiSteadyStates quasi_steady_states(const ModelParams& p) {
  return QuasiSteadyStates{
      quasi_steady_state(Region::N, p),
      quasi_steady_state(Region::I, p),
      quasi_steady_state(Region::M, p),
      quasi_steady_state(Region::S, p),
  };
}

double QuasiSteadyStates::of(Region r) const {
  switch (r) {
    case Region::N: return y_n;
    case Region::I: return y_i;
    case Region::M: return y_m;
    case Region::S: return y_s;
  }
  throw std::logic_error("unknown region");
}

Interval ldi_value(double y, const Thresholds& th, const ModelParams& p) {
  require_valid(p);
  const Region inter = th.intermediate_region;
  auto at_threshold = [&](Region left, Region right) {
    const double a = detail::g(left, y, p);
    const double b = detail::g(right, y, p);
    return Interval{std::min(a, b), std::max(a, b)};
  };
  if (y == th.lo()) return at_threshold(Region::N, inter);
  if (y == th.hi()) return at_threshold(inter, Region::S);
  const double v = detail::g(region_of(y, th), y, p);
  return Interval{v, v};
}

std::vector<Landmark> LimitAnalysis::sorted_landmarks() const {
  const Region inter = thresholds.intermediate_region;
  std::vector<Landmark> marks = {
      {"y_hat_i", thresholds.y_hat_i},
      {"y_hat_m", thresholds.y_hat_m},
      {"y*_n", qss.y_n},
      {inter == Region::I ? "y*_i" : "y*_m", qss.of(inter)},
      {"y*_s", qss.y_s},
  };
  std::sort(marks.begin(), marks.end(),
            [](const Landmark& a, const Landmark& b) { return a.location < b.location; });
  return marks;
}

namespace {

// Positions (1-based) of the two thresholds among the five sorted landmarks.
std::pair<int, int> threshold_positions(const LimitAnalysis& analysis) {
  const auto marks = analysis.sorted_landmarks();
  int lo_pos = 0, hi_pos = 0;
  for (int i = 0; i < static_cast<int>(marks.size()); ++i) {
    if (marks[i].location == analysis.thresholds.lo()) lo_pos = i + 1;
    if (marks[i].location == analysis.thresholds.hi()) hi_pos = i + 1;
  }
  return {lo_pos, hi_pos};
}

LdiSteadyState make_quasi(double location, Region r) {
  return LdiSteadyState{location, LdiSteadyState::Kind::Quasi, r,
                        Evocativeness::M, Stability::Stable};
}

LdiSteadyState make_threshold(double location, Evocativeness which,
                              Stability stability) {
  return LdiSteadyState{location, LdiSteadyState::Kind::Threshold, Region::N,
                        which, stability};
}

}  // namespace

LimitAnalysis analyze(const ModelParams& p) {
  require_valid(p);

  LimitAnalysis out;
  out.params = p;
  out.thresholds = thresholds(p);  // knife-edge between thresholds checked here
  out.qss = quasi_steady_states(p);

  const Region inter = out.thresholds.intermediate_region;
  const double lo = out.thresholds.lo();
  const double hi = out.thresholds.hi();

  // Rule out coincidences among the five landmarks that pin down the diagram.
  {
    const auto marks = out.sorted_landmarks();
    for (std::size_t i = 1; i < marks.size(); ++i) {
      if (std::abs(marks[i].location - marks[i - 1].location) < kKnifeEdgeTol) {
        std::ostringstream msg;
        msg << "knife-edge configuration: landmarks " << marks[i - 1].name
            << " and " << marks[i].name << " coincide at " << marks[i].location;
        throw KnifeEdgeError(msg.str());
      }
    }
  }

  // Quasi steady states within their own region are stable steady states.
  if (out.qss.y_n < lo) out.stable_set.push_back(make_quasi(out.qss.y_n, Region::N));
  const double y_inter = out.qss.of(inter);
  if (lo < y_inter && y_inter < hi) out.stable_set.push_back(make_quasi(y_inter, inter));
  if (out.qss.y_s > hi) out.stable_set.push_back(make_quasi(out.qss.y_s, Region::S));

  // Threshold flip test. A threshold with left region W and right region Z is
  // a stable steady state iff y*_Z < y_hat < y*_W; if instead the quasi steady
  // states straddle it the other way (y*_W < y_hat < y*_Z) the flows point
  // outward and it is an unstable (repelling) steady state. Stable flips can
  // only happen at y_hat_i.
  auto classify_threshold = [&](double y_hat, Region left, Region right,
                                Evocativeness which) {
    const double y_left = out.qss.of(left);
    const double y_right = out.qss.of(right);
    if (y_right < y_hat && y_hat < y_left) {
      out.stable_set.push_back(make_threshold(y_hat, which, Stability::Stable));
    } else if (y_left < y_hat && y_hat < y_right) {
      out.unstable_set.push_back(make_threshold(y_hat, which, Stability::Unstable));
    }
  };
  if (inter == Region::I) {
    classify_threshold(out.thresholds.y_hat_i, Region::N, Region::I, Evocativeness::I);
    classify_threshold(out.thresholds.y_hat_m, Region::I, Region::S, Evocativeness::M);
  } else {
    classify_threshold(out.thresholds.y_hat_m, Region::N, Region::M, Evocativeness::M);
    classify_threshold(out.thresholds.y_hat_i, Region::M, Region::S, Evocativeness::I);
  }

  auto by_location = [](const LdiSteadyState& a, const LdiSteadyState& b) {
    return a.location < b.location;
  };
  std::sort(out.stable_set.begin(), out.stable_set.end(), by_location);
  std::sort(out.unstable_set.begin(), out.unstable_set.end(), by_location);

  // The ordering constraints pin all but one QSS pair; the free order is
  // part of the configuration index.
  const auto positions = threshold_positions(out);
  out.configuration.threshold_order =
      inter == Region::I ? ConfigIndex::ThresholdOrder::IBelowM
                         : ConfigIndex::ThresholdOrder::MBelowI;
  out.configuration.first_threshold_pos = positions.first;
  out.configuration.second_threshold_pos = positions.second;
  if (inter == Region::I) {
    out.configuration.free_pair_low =
        out.qss.y_i < out.qss.y_n ? Region::I : Region::N;
  } else {
    out.configuration.free_pair_low =
        out.qss.y_s < out.qss.y_m ? Region::S : Region::M;
  }
  return out;
}

HybridPolicy make_hybrid_policy(const LimitAnalysis& analysis) {
  const bool i_stable = std::any_of(
      analysis.stable_set.begin(), analysis.stable_set.end(),
      [](const LdiSteadyState& s) {
        return s.kind == LdiSteadyState::Kind::Threshold &&
               s.threshold_of == Evocativeness::I;
      });
  if (!i_stable) {
    throw std::invalid_argument(
        "hybrid policy requires y_hat_i to be a stable steady state");
  }
  return HybridPolicy{analysis.thresholds};
}

std::vector<ScanLabel> classify_stability_by_scan(const LimitAnalysis& analysis,
                                                  const ModelParams& p) {
  require_valid(p);
  constexpr double kScanEps = 1e-4;
  constexpr int kGridPoints = 64;
  constexpr double kDegenerate = 1e-14;

  std::vector<LdiSteadyState> candidates = analysis.stable_set;
  candidates.insert(candidates.end(), analysis.unstable_set.begin(),
                    analysis.unstable_set.end());
  std::sort(candidates.begin(), candidates.end(),
            [](const LdiSteadyState& a, const LdiSteadyState& b) {
              return a.location < b.location;
            });

  const auto marks = analysis.sorted_landmarks();

  std::vector<ScanLabel> labels;
  labels.reserve(candidates.size());
  for (const auto& c : candidates) {
    // Stability is local: shrink the window when another landmark is nearer
    // than the nominal eps so the scan never straddles it.
    double eps = kScanEps;
    for (const auto& m : marks) {
      const double d = std::abs(m.location - c.location);
      if (d > 0.0 && 0.45 * d < eps) eps = 0.45 * d;
    }

    // The LDI selection at an off-threshold point is the g of its region.
    auto flow_sign = [&](double y) {
      const double v = detail::g(region_of(y, analysis.thresholds), y, p);
      if (std::abs(v) < kDegenerate) {
        std::ostringstream msg;
        msg << "scan inconclusive: |g| < 1e-14 at y=" << y;
        throw std::runtime_error(msg.str());
      }
      return v > 0.0 ? 1 : -1;
    };

    bool left_all_up = true, left_all_down = true;
    bool right_all_up = true, right_all_down = true;
    for (int i = 1; i <= kGridPoints; ++i) {
      const double offset = eps * static_cast<double>(i) / kGridPoints;
      const int sl = flow_sign(c.location - offset);
      const int sr = flow_sign(c.location + offset);
      (sl > 0 ? left_all_down : left_all_up) = false;
      (sr > 0 ? right_all_down : right_all_up) = false;
    }

    if (left_all_up && right_all_down) {
      labels.push_back({c.location, Stability::Stable});
    } else if (left_all_down && right_all_up) {
      labels.push_back({c.location, Stability::Unstable});
    } else {
      std::ostringstream msg;
      msg << "scan inconclusive: mixed flow signs around y=" << c.location;
      throw std::runtime_error(msg.str());
    }
  }
  return labels;
}

}  // namespace storyshare
