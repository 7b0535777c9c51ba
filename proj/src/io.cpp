#include "storyshare/io.hpp"

#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace storyshare {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json steady_state_to_json(const LdiSteadyState& s) {
  json j;
  j["location"] = s.location;
  if (s.kind == LdiSteadyState::Kind::Quasi) {
    j["kind"] = "quasi";
    j["region"] = to_string(s.quasi_region);
  } else {
    j["kind"] = "threshold";
    j["threshold_of"] = to_string(s.threshold_of);
  }
  j["stability"] = s.stability == Stability::Stable ? "stable" : "unstable";
  return j;
}

std::string config_label(const ConfigIndex& c) {
  std::ostringstream out;
  out << (c.threshold_order == ConfigIndex::ThresholdOrder::IBelowM ? "I<M" : "M<I")
      << ":(" << c.first_threshold_pos << "," << c.second_threshold_pos << "):"
      << to_string(c.free_pair_low);
  return out.str();
}

}  // namespace

json params_to_json(const ModelParams& p) {
  return json{{"rho", p.rho},     {"kappa", p.kappa},   {"theta", p.theta},
              {"mu", p.mu},       {"beta", p.beta},     {"delta", p.delta},
              {"lambda", p.lambda}};
}

ModelParams params_from_json(const json& j) {
  if (!j.is_object()) throw ValidationError("params JSON must be an object");
  static const char* kFields[] = {"rho", "kappa", "theta", "mu",
                                  "beta", "delta", "lambda"};
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* f : kFields) known = known || key == f;
    if (!known) throw ValidationError("unknown params key: " + key);
  }
  ModelParams p{};
  double* slots[] = {&p.rho, &p.kappa, &p.theta, &p.mu, &p.beta, &p.delta, &p.lambda};
  for (std::size_t i = 0; i < 7; ++i) {
    const auto it = j.find(kFields[i]);
    if (it == j.end()) {
      throw ValidationError(std::string("missing params key: ") + kFields[i]);
    }
    if (!it->is_number()) {
      throw ValidationError(std::string("params key must be numeric: ") + kFields[i]);
    }
    *slots[i] = it->get<double>();
  }
  return p;
}

json analysis_to_json(const LimitAnalysis& a) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = params_to_json(a.params);
  j["thresholds"] = {{"y_hat_i", a.thresholds.y_hat_i},
                     {"y_hat_m", a.thresholds.y_hat_m},
                     {"intermediate_region", to_string(a.thresholds.intermediate_region)}};
  j["quasi_steady_states"] = {{"n", a.qss.y_n},
                              {"i", a.qss.y_i},
                              {"m", a.qss.y_m},
                              {"s", a.qss.y_s}};
  j["stable_set"] = json::array();
  for (const auto& s : a.stable_set) j["stable_set"].push_back(steady_state_to_json(s));
  j["unstable_set"] = json::array();
  for (const auto& s : a.unstable_set) j["unstable_set"].push_back(steady_state_to_json(s));
  j["sf_composition"] = sf_composition(a);
  j["configuration"] = {
      {"threshold_order",
       a.configuration.threshold_order == ConfigIndex::ThresholdOrder::IBelowM
           ? "I<M"
           : "M<I"},
      {"threshold_positions",
       json::array({a.configuration.first_threshold_pos,
                    a.configuration.second_threshold_pos})},
      {"free_pair_low", to_string(a.configuration.free_pair_low)},
      {"label", config_label(a.configuration)}};
  j["landmarks"] = json::array();
  for (const auto& m : a.sorted_landmarks()) {
    j["landmarks"].push_back({{"name", m.name}, {"location", m.location}});
  }
  return j;
}

json sweep_to_json(const SweepResult& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["parameter"] = to_string(r.parameter);
  j["points"] = json::array();
  for (const auto& point : r.points) {
    json pj;
    pj["value"] = point.value;
    pj["knife_edge"] = point.knife_edge;
    if (point.analysis) pj["analysis"] = analysis_to_json(*point.analysis);
    j["points"].push_back(std::move(pj));
  }
  j["transitions"] = json::array();
  for (const auto& t : r.transitions) {
    j["transitions"].push_back({{"lo", t.lo},
                                {"hi", t.hi},
                                {"sf_before", t.sf_before},
                                {"sf_after", t.sf_after}});
  }
  return j;
}

json sign_report_to_json(const SignReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["target"] = to_string(r.target);
  j["parameter"] = to_string(r.parameter);
  const char* predicted = nullptr;
  switch (r.predicted) {
    case PredictedSign::Increasing: predicted = "increasing"; break;
    case PredictedSign::Decreasing: predicted = "decreasing"; break;
    case PredictedSign::Constant: predicted = "constant"; break;
    case PredictedSign::NonMonotone: predicted = "non-monotone"; break;
    case PredictedSign::Conditional: predicted = "conditional"; break;
  }
  j["predicted"] = predicted;
  j["base_value"] = r.base_value;
  j["h"] = r.h;
  j["derivative"] = r.derivative;
  j["difference"] = r.difference;
  j["verdict"] = r.verdict == SignVerdict::Pass
                     ? "pass"
                     : (r.verdict == SignVerdict::Fail ? "fail" : "not_comparable");
  j["detail"] = r.detail;
  return j;
}

json limit_distribution_to_json(const LimitDistribution& d) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = params_to_json(d.params);
  j["initial"] = {{"t", d.initial.t_count}, {"f", d.initial.f_count}};
  j["n_runs"] = d.n_runs;
  j["n_steps"] = d.n_steps;
  j["seed"] = d.seed;
  j["eps_assign"] = d.eps_assign;
  j["assignment"] = json::array();
  for (const auto& entry : d.assignment) {
    json ej = steady_state_to_json(entry.point);
    ej["count"] = entry.count;
    ej["mass"] = static_cast<double>(entry.count) / static_cast<double>(d.n_runs);
    j["assignment"].push_back(std::move(ej));
  }
  j["unassigned_count"] = d.unassigned_count;
  return j;
}

json path_dependence_to_json(const PathDependenceReport& r, const Thresholds&) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["classes"] = json::array();
  for (const auto& c : r.classes) {
    json cj = steady_state_to_json(c.point);
    cj["behavior"] = c.behavior;
    cj["count"] = c.count;
    j["classes"].push_back(std::move(cj));
  }
  j["unassigned_count"] = r.unassigned_count;
  j["degenerate"] = r.degenerate;
  return j;
}

// ---------------------------------------------------------------------------

void write_file(const std::string& path, const std::string& contents) {
  const bool gzip = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
  if (gzip) {
    gzFile f = gzopen(path.c_str(), "wb");
    if (f == nullptr) throw std::runtime_error("cannot open " + path);
    const int written =
        gzwrite(f, contents.data(), static_cast<unsigned>(contents.size()));
    gzclose(f);
    if (written != static_cast<int>(contents.size())) {
      throw std::runtime_error("short gzip write to " + path);
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << contents;
  if (!out) throw std::runtime_error("short write to " + path);
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ostringstream out;
  out << "n,T,F,y,region\n";
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const auto& z = traj.states[n];
    out << n << ',' << format_double(z.t_count) << ',' << format_double(z.f_count)
        << ',' << format_double(z.share_true()) << ','
        << to_string(traj.regions_visited[n]) << '\n';
  }
  write_file(path, out.str());
}

void write_sweep_csv(const std::string& path, const SweepResult& r) {
  std::ostringstream out;
  out << "parameter,value,knife_edge,y_hat_i,y_hat_m,y_star_n,y_star_i,"
         "y_star_m,y_star_s,sf,config\n";
  for (const auto& point : r.points) {
    out << to_string(r.parameter) << ',' << format_double(point.value) << ','
        << (point.knife_edge ? 1 : 0) << ',';
    if (point.analysis) {
      const auto& a = *point.analysis;
      out << format_double(a.thresholds.y_hat_i) << ','
          << format_double(a.thresholds.y_hat_m) << ','
          << format_double(a.qss.y_n) << ',' << format_double(a.qss.y_i) << ','
          << format_double(a.qss.y_m) << ',' << format_double(a.qss.y_s) << ','
          << sf_composition(a) << ',' << config_label(a.configuration);
    } else {
      out << ",,,,,,,";
    }
    out << '\n';
  }
  write_file(path, out.str());
}

void write_transitions_csv(const std::string& path, const SweepResult& r) {
  std::ostringstream out;
  out << "parameter,lo,hi,sf_before,sf_after\n";
  for (const auto& t : r.transitions) {
    out << to_string(r.parameter) << ',' << format_double(t.lo) << ','
        << format_double(t.hi) << ',' << t.sf_before << ',' << t.sf_after << '\n';
  }
  write_file(path, out.str());
}

void write_sign_reports_csv(const std::string& path,
                            const std::vector<SignReport>& reports) {
  std::ostringstream out;
  out << "target,parameter,predicted,base_value,h,derivative,difference,verdict\n";
  for (const auto& r : reports) {
    const json j = sign_report_to_json(r);
    out << to_string(r.target) << ',' << to_string(r.parameter) << ','
        << j["predicted"].get<std::string>() << ',' << format_double(r.base_value)
        << ',' << format_double(r.h) << ',' << format_double(r.derivative) << ','
        << format_double(r.difference) << ',' << j["verdict"].get<std::string>()
        << '\n';
  }
  write_file(path, out.str());
}

void write_terminal_csv(const std::string& path, const LimitDistribution& d) {
  std::ostringstream out;
  out << "run,terminal_y,assigned_to\n";
  for (std::size_t run = 0; run < d.terminal_y.size(); ++run) {
    const double y = d.terminal_y[run];
    std::string assigned = "unassigned";
    double best = d.eps_assign;
    for (const auto& entry : d.assignment) {
      const double dist = std::abs(y - entry.point.location);
      if (dist <= best) {
        best = dist;
        assigned = entry.point.kind == LdiSteadyState::Kind::Quasi
                       ? std::string("y*_") + to_string(entry.point.quasi_region)
                       : std::string("y_hat_") + to_string(entry.point.threshold_of);
      }
    }
    out << run << ',' << format_double(y) << ',' << assigned << '\n';
  }
  write_file(path, out.str());
}

// ---------------------------------------------------------------------------
// Phase diagram SVG. Conventions: green stable steady states, red unstable,
// purple quasi steady states outside their region, dashed threshold lines,
// arrows showing the flow direction in each inter-landmark interval.

namespace {

double svg_x(double y) { return 60.0 + y * 680.0; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string phase_diagram_svg(const LimitAnalysis& a) {
  const double axis_y = 120.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"200\" "
         "viewBox=\"0 0 800 200\">\n";
  svg << "  <rect width=\"800\" height=\"200\" fill=\"white\"/>\n";
  svg << "  <line class=\"axis\" x1=\"" << fmt(svg_x(0.0)) << "\" y1=\"" << fmt(axis_y)
      << "\" x2=\"" << fmt(svg_x(1.0)) << "\" y2=\"" << fmt(axis_y)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  for (int tick = 0; tick <= 10; ++tick) {
    const double x = svg_x(tick / 10.0);
    svg << "  <line x1=\"" << fmt(x) << "\" y1=\"" << fmt(axis_y - 4) << "\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(axis_y + 4)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    if (tick % 2 == 0) {
      svg << "  <text x=\"" << fmt(x) << "\" y=\"" << fmt(axis_y + 22)
          << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(tick / 10.0)
          << "</text>\n";
    }
  }

  // Dashed threshold lines.
  for (const auto& th :
       {std::pair<const char*, double>{"y_hat_i", a.thresholds.y_hat_i},
        std::pair<const char*, double>{"y_hat_m", a.thresholds.y_hat_m}}) {
    const double x = svg_x(th.second);
    svg << "  <line class=\"threshold\" x1=\"" << fmt(x) << "\" y1=\"40\" x2=\""
        << fmt(x) << "\" y2=\"" << fmt(axis_y + 10)
        << "\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
    svg << "  <text x=\"" << fmt(x) << "\" y=\"34\" font-size=\"11\" "
           "text-anchor=\"middle\">" << th.first << "</text>\n";
  }

  // Flow arrows: one per interval between consecutive landmarks (and the two
  // outer intervals), direction from the sign of g in the interval interior.
  const auto marks = a.sorted_landmarks();
  std::vector<double> edges = {0.0};
  for (const auto& m : marks) edges.push_back(m.location);
  edges.push_back(1.0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double mid = 0.5 * (edges[i] + edges[i + 1]);
    if (edges[i + 1] - edges[i] < 1e-6) continue;
    const Interval flow = ldi_value(mid, a.thresholds, a.params);
    const bool right = flow.lo > 0.0;
    const double x = svg_x(mid);
    const double dx = right ? 9.0 : -9.0;
    svg << "  <path class=\"arrow\" d=\"M " << fmt(x - dx) << ' ' << fmt(axis_y - 14)
        << " L " << fmt(x + dx) << ' ' << fmt(axis_y - 14) << "\" stroke=\"black\" "
           "stroke-width=\"1.5\" marker-end=\"url(#head)\"/>\n";
  }
  svg << "  <defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" "
         "refX=\"6\" refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" "
         "fill=\"black\"/></marker></defs>\n";

  // Landmark markers: one per landmark, five in total.
  auto marker = [&](double location, const char* cls, const char* color) {
    svg << "  <circle class=\"" << cls << "\" cx=\"" << fmt(svg_x(location))
        << "\" cy=\"" << fmt(axis_y) << "\" r=\"6\" fill=\"" << color
        << "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
  };
  auto stability_at = [&](double location, const char* name) -> int {
    // 1 stable, -1 unstable, 0 not a steady state.
    for (const auto& s : a.stable_set) {
      if (s.location == location) return 1;
    }
    for (const auto& s : a.unstable_set) {
      if (s.location == location) return -1;
    }
    (void)name;
    return 0;
  };
  for (const auto& m : marks) {
    const int st = stability_at(m.location, m.name);
    const bool is_threshold =
        m.location == a.thresholds.y_hat_i || m.location == a.thresholds.y_hat_m;
    if (st == 1) {
      marker(m.location, "stable", "#1a9641");
    } else if (st == -1) {
      marker(m.location, "unstable", "#d7191c");
    } else if (is_threshold) {
      // Threshold that is not a steady state: hollow marker on the axis.
      svg << "  <circle class=\"plain\" cx=\"" << fmt(svg_x(m.location))
          << "\" cy=\"" << fmt(axis_y)
          << "\" r=\"4\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
    } else {
      marker(m.location, "out-of-region", "#7b3294");
    }
    svg << "  <text x=\"" << fmt(svg_x(m.location)) << "\" y=\"" << fmt(axis_y + 40)
        << "\" font-size=\"11\" text-anchor=\"middle\">" << m.name << "</text>\n";
  }

  svg << "  <text x=\"400\" y=\"185\" font-size=\"12\" text-anchor=\"middle\">"
         "share of true stories y; configuration "
      << config_label(a.configuration) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace storyshare
