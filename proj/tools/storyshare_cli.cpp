// Command-line front door: closed-form analysis, phase diagrams, trajectory
// simulation, parameter sweeps, comparative-statics checks, Monte Carlo limit
// experiments, and the acceptance battery.
//
// Exit codes: 0 success, 1 validation/criterion failure, 2 degenerate
// (knife-edge) configuration.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "storyshare/io.hpp"
#include "storyshare/verify.hpp"

namespace fs = std::filesystem;
using namespace storyshare;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitKnifeEdge = 2;

// --params accepts inline JSON (starts with '{') or a file path.
ModelParams load_params(const std::string& source) {
  std::string text = source;
  if (text.empty() || text[0] != '{') {
    std::ifstream in(source);
    if (!in) throw ValidationError("cannot open params file: " + source);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("params JSON parse error: ") + e.what());
  }
  const ModelParams p = params_from_json(j);
  const auto violations = validate(p);
  if (!violations.empty()) {
    json err;
    err["error"] = "validation";
    err["violations"] = violations;
    std::cerr << err.dump() << "\n";
    throw ValidationError("invalid parameters");
  }
  return p;
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

ParamName parse_param_name(const std::string& name) {
  for (ParamName p : {ParamName::Rho, ParamName::Kappa, ParamName::Theta,
                      ParamName::Mu, ParamName::Beta, ParamName::Delta,
                      ParamName::Lambda}) {
    if (name == to_string(p)) return p;
  }
  throw CLI::ValidationError("--sweep-param", "unknown parameter: " + name);
}

Policy parse_policy(const std::string& name, const ModelParams& p) {
  if (name == "optimal") return OptimalPolicy{thresholds(p)};
  if (name == "hybrid") return make_hybrid_policy(analyze(p));
  if (name.rfind("fixed:", 0) == 0) {
    const std::string region = name.substr(6);
    for (Region r : {Region::N, Region::I, Region::M, Region::S}) {
      if (region == to_string(r)) return FixedPolicy{r};
    }
  }
  throw CLI::ValidationError(
      "--policy", "expected optimal, hybrid, or fixed:{N,I,M,S}: " + name);
}

void print_analysis_summary(const LimitAnalysis& a) {
  std::cout.precision(10);
  std::cout << "thresholds: y_hat_i = " << a.thresholds.y_hat_i
            << ", y_hat_m = " << a.thresholds.y_hat_m << " (intermediate region "
            << to_string(a.thresholds.intermediate_region) << ")\n";
  std::cout << "quasi steady states: y*_n = " << a.qss.y_n
            << ", y*_i = " << a.qss.y_i << ", y*_m = " << a.qss.y_m
            << ", y*_s = " << a.qss.y_s << "\n";
  std::cout << "S_F = " << sf_composition(a) << "\n";
  for (const auto& s : a.stable_set) {
    std::cout << "  stable   y = " << s.location << "\n";
  }
  for (const auto& s : a.unstable_set) {
    std::cout << "  unstable y = " << s.location << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"social-media story sharing dynamics: analysis, simulation, and checks"};
  app.require_subcommand(1);

  std::string params_source;
  std::string out_dir;
  std::uint64_t seed = 1;
  int threads = 0;

  // analyze ------------------------------------------------------------------
  auto* cmd_analyze = app.add_subcommand("analyze", "limit analysis to JSON");
  bool analyze_svg = false;
  cmd_analyze->add_option("--params", params_source, "params JSON (inline or file)")
      ->required();
  cmd_analyze->add_option("--out", out_dir, "output directory");
  cmd_analyze->add_flag("--svg", analyze_svg, "also emit phase.svg");

  // phase --------------------------------------------------------------------
  auto* cmd_phase = app.add_subcommand("phase", "phase diagram SVG");
  cmd_phase->add_option("--params", params_source, "params JSON (inline or file)")
      ->required();
  cmd_phase->add_option("--out", out_dir, "output directory");

  // simulate -----------------------------------------------------------------
  auto* cmd_simulate = app.add_subcommand("simulate", "trajectory CSV");
  std::size_t sim_steps = 10000;
  double init_t = 50.0, init_f = 50.0;
  std::string policy_name = "optimal";
  bool gzip_out = false;
  cmd_simulate->add_option("--params", params_source)->required();
  cmd_simulate->add_option("--out", out_dir);
  cmd_simulate->add_option("--steps", sim_steps, "number of steps");
  cmd_simulate->add_option("--seed", seed);
  cmd_simulate->add_option("--initial-t", init_t, "initial true-story mass");
  cmd_simulate->add_option("--initial-f", init_f, "initial false-story mass");
  cmd_simulate->add_option("--policy", policy_name,
                           "optimal | hybrid | fixed:{N,I,M,S}");
  cmd_simulate->add_flag("--gzip", gzip_out, "write trajectory.csv.gz");

  // sweep --------------------------------------------------------------------
  auto* cmd_sweep = app.add_subcommand("sweep", "parameter sweep CSV/JSON");
  std::string sweep_param = "kappa";
  double sweep_lo = 0.1, sweep_hi = 10.0;
  int sweep_points = 50;
  cmd_sweep->add_option("--params", params_source)->required();
  cmd_sweep->add_option("--out", out_dir);
  cmd_sweep->add_option("--sweep-param", sweep_param, "parameter to sweep");
  cmd_sweep->add_option("--lo", sweep_lo)->required();
  cmd_sweep->add_option("--hi", sweep_hi)->required();
  cmd_sweep->add_option("--points", sweep_points);

  // statics ------------------------------------------------------------------
  auto* cmd_statics = app.add_subcommand(
      "statics", "finite-difference sign checks at a base point");
  cmd_statics->add_option("--params", params_source)->required();
  cmd_statics->add_option("--out", out_dir);

  // montecarlo ---------------------------------------------------------------
  auto* cmd_mc = app.add_subcommand("montecarlo", "limit distribution experiment");
  std::size_t mc_runs = 200;
  std::vector<std::size_t> mc_ladder;
  std::size_t mc_steps = 100000;
  double eps_assign = 0.02;
  std::string manifest_path;
  cmd_mc->add_option("--params", params_source);
  cmd_mc->add_option("--manifest", manifest_path,
                     "experiment manifest JSON (params, initial, seed, ladder)");
  cmd_mc->add_option("--out", out_dir);
  cmd_mc->add_option("--runs", mc_runs);
  cmd_mc->add_option("--steps", mc_steps);
  cmd_mc->add_option("--ladder", mc_ladder,
                     "ladder of n_steps values (overrides --steps)");
  cmd_mc->add_option("--seed", seed);
  cmd_mc->add_option("--initial-t", init_t);
  cmd_mc->add_option("--initial-f", init_f);
  cmd_mc->add_option("--eps-assign", eps_assign);
  cmd_mc->add_option("--threads", threads);

  // verify -------------------------------------------------------------------
  auto* cmd_verify = app.add_subcommand("verify", "run the acceptance battery");
  std::string filter;
  bool inject_failure = false;
  cmd_verify->add_option("--filter", filter, "criterion name substring");
  cmd_verify->add_option("--threads", threads);
  cmd_verify->add_flag("--inject-failure", inject_failure,
                       "force one criterion red (harness self-check)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_analyze->parsed() || cmd_phase->parsed()) {
      const ModelParams p = load_params(params_source);
      const LimitAnalysis a = analyze(p);
      const fs::path dir = ensure_out_dir(out_dir);
      if (cmd_analyze->parsed()) {
        write_file((dir / "analysis.json").string(), analysis_to_json(a).dump(2) + "\n");
        if (analyze_svg) write_file((dir / "phase.svg").string(), phase_diagram_svg(a));
        print_analysis_summary(a);
        std::cout << "wrote " << (dir / "analysis.json").string() << "\n";
      } else {
        write_file((dir / "phase.svg").string(), phase_diagram_svg(a));
        std::cout << "wrote " << (dir / "phase.svg").string() << "\n";
      }
      return kExitOk;
    }

    if (cmd_simulate->parsed()) {
      const ModelParams p = load_params(params_source);
      const Policy policy = parse_policy(policy_name, p);
      const Trajectory traj =
          simulate(PlatformState{init_t, init_f}, policy, p, sim_steps, seed);
      const fs::path dir = ensure_out_dir(out_dir);
      const fs::path file =
          dir / (gzip_out ? "trajectory.csv.gz" : "trajectory.csv");
      write_trajectory_csv(file.string(), traj);
      std::cout << "wrote " << file.string() << " (" << traj.states.size()
                << " states, terminal y = " << traj.states.back().share_true()
                << ")\n";
      return kExitOk;
    }

    if (cmd_sweep->parsed()) {
      const ModelParams p = load_params(params_source);
      const SweepResult result =
          sweep(parse_param_name(sweep_param), sweep_lo, sweep_hi, sweep_points, p);
      const fs::path dir = ensure_out_dir(out_dir);
      write_sweep_csv((dir / "sweep.csv").string(), result);
      write_transitions_csv((dir / "transitions.csv").string(), result);
      write_file((dir / "sweep.json").string(), sweep_to_json(result).dump(2) + "\n");
      std::cout << "wrote sweep.csv, transitions.csv, sweep.json ("
                << result.transitions.size() << " transitions)\n";
      return kExitOk;
    }

    if (cmd_statics->parsed()) {
      const ModelParams p = load_params(params_source);
      std::vector<SignReport> reports;
      json report_json = json::array();
      for (LandmarkId target :
           {LandmarkId::YStarN, LandmarkId::YStarI, LandmarkId::YStarM,
            LandmarkId::YStarS, LandmarkId::YHatI, LandmarkId::YHatM}) {
        for (ParamName param :
             {ParamName::Rho, ParamName::Kappa, ParamName::Theta, ParamName::Mu,
              ParamName::Beta, ParamName::Delta, ParamName::Lambda}) {
          reports.push_back(sign_check(target, param, p));
          report_json.push_back(sign_report_to_json(reports.back()));
          std::cout << to_string(target) << " vs " << to_string(param) << ": "
                    << report_json.back()["verdict"].get<std::string>() << " ("
                    << report_json.back()["predicted"].get<std::string>() << ")\n";
        }
      }
      const fs::path dir = ensure_out_dir(out_dir);
      json out;
      out["schema_version"] = 1;
      out["params"] = params_to_json(p);
      out["reports"] = std::move(report_json);
      write_file((dir / "statics.json").string(), out.dump(2) + "\n");
      write_sign_reports_csv((dir / "statics.csv").string(), reports);
      std::cout << "wrote statics.json, statics.csv\n";
      return kExitOk;
    }

    if (cmd_mc->parsed()) {
      ModelParams p{};
      PlatformState initial{init_t, init_f};
      std::vector<std::size_t> ladder = mc_ladder;
      if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        if (!in) throw ValidationError("cannot open manifest: " + manifest_path);
        json manifest = json::parse(in);
        p = params_from_json(manifest.at("params"));
        require_valid(p);
        initial = PlatformState{manifest.at("initial").at("t").get<double>(),
                                manifest.at("initial").at("f").get<double>()};
        if (manifest.contains("seed")) seed = manifest["seed"].get<std::uint64_t>();
        if (manifest.contains("runs")) mc_runs = manifest["runs"].get<std::size_t>();
        if (manifest.contains("eps_assign")) {
          eps_assign = manifest["eps_assign"].get<double>();
        }
        if (manifest.contains("ladder")) {
          ladder = manifest["ladder"].get<std::vector<std::size_t>>();
        }
      } else {
        p = load_params(params_source);
      }
      if (ladder.empty()) ladder.push_back(mc_steps);

      const fs::path dir = ensure_out_dir(out_dir);
      json summary;
      summary["schema_version"] = 1;
      summary["rungs"] = json::array();
      for (std::size_t rung = 0; rung < ladder.size(); ++rung) {
        const LimitDistribution dist = estimate_limit_distribution(
            p, initial, mc_runs, ladder[rung], seed, eps_assign, threads);
        std::ostringstream name;
        name << "terminal_y_" << ladder[rung] << ".csv";
        write_terminal_csv((dir / name.str()).string(), dist);
        summary["rungs"].push_back(limit_distribution_to_json(dist));
        std::cout << "n_steps = " << ladder[rung] << ": unassigned "
                  << dist.unassigned_count << "/" << dist.n_runs << "\n";
      }
      write_file((dir / "summary.json").string(), summary.dump(2) + "\n");
      std::cout << "wrote summary.json\n";
      return kExitOk;
    }

    if (cmd_verify->parsed()) {
      VerifyOptions options;
      options.filter = filter;
      options.threads = threads;
      options.inject_failure = inject_failure;
      const auto results = run_acceptance(options);
      if (results.empty()) {
        std::cerr << "no criterion matches filter: " << filter << "\n";
        return kExitFailure;
      }
      return report_acceptance(results) ? kExitOk : kExitFailure;
    }
  } catch (const KnifeEdgeError& e) {
    json err;
    err["error"] = "knife_edge";
    err["detail"] = e.what();
    std::cerr << err.dump() << "\n";
    return kExitKnifeEdge;
  } catch (const ValidationError& e) {
    // load_params already emitted machine-readable violations when relevant.
    std::cerr << R"({"error":"validation","detail":")" << e.what() << "\"}\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << R"({"error":"runtime","detail":")" << e.what() << "\"}\n";
    return kExitFailure;
  }
  return kExitFailure;
}
