#pragma once

#include <string>

#include <json.hpp>

#include "storyshare/montecarlo.hpp"
#include "storyshare/statics.hpp"

namespace storyshare {

// ---------------------------------------------------------------------------
// ModelParams JSON: flat object with the seven lowercase field names
// {rho, kappa, theta, mu, beta, delta, lambda}; unknown keys rejected.

nlohmann::json params_to_json(const ModelParams& p);

// Throws ValidationError on missing/unknown/non-numeric keys. Does not check
// the model assumptions; call validate() for that.
ModelParams params_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Analysis and report serialization (all outputs schema-versioned and free of
// timestamps so identical inputs give byte-identical files).

nlohmann::json analysis_to_json(const LimitAnalysis& analysis);
nlohmann::json sweep_to_json(const SweepResult& result);
nlohmann::json sign_report_to_json(const SignReport& report);
nlohmann::json limit_distribution_to_json(const LimitDistribution& dist);
nlohmann::json path_dependence_to_json(const PathDependenceReport& report,
                                       const Thresholds& th);

// ---------------------------------------------------------------------------
// CSV writers. Paths ending in ".gz" are gzip-compressed.

// Columns: n,T,F,y,region
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Columns: parameter,value,knife_edge,y_hat_i,y_hat_m,y_star_n,y_star_i,
//          y_star_m,y_star_s,sf,config
void write_sweep_csv(const std::string& path, const SweepResult& result);

// Columns: parameter,lo,hi,sf_before,sf_after
void write_transitions_csv(const std::string& path, const SweepResult& result);

// Columns: target,parameter,predicted,base_value,h,derivative,difference,verdict
void write_sign_reports_csv(const std::string& path,
                            const std::vector<SignReport>& reports);

// Columns: run,terminal_y,assigned_to
void write_terminal_csv(const std::string& path, const LimitDistribution& dist);

// Generic file writer used by the CLI (gzip by ".gz" extension).
void write_file(const std::string& path, const std::string& contents);

// ---------------------------------------------------------------------------
// Phase diagram (static SVG): one-dimensional flow over y in [0,1] with flow
// arrows per interval, green stable / red unstable steady-state markers,
// purple markers for quasi steady states outside their region, and dashed
// threshold lines.

std::string phase_diagram_svg(const LimitAnalysis& analysis);

}  // namespace storyshare
