#include <doctest.h>

#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "storyshare/io.hpp"

using namespace storyshare;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ModelParams base() { return {1.0, 1.0, 0.75, 1.0, 1.0, 0.7, 0.75}; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string gunzip(const fs::path& path) {
  gzFile f = gzopen(path.string().c_str(), "rb");
  REQUIRE(f != nullptr);
  std::string out;
  char buf[4096];
  int n;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, n);
  gzclose(f);
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("storyshare_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0, pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    ++count;
    pos += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("params JSON round trip") {
  const ModelParams p = base();
  const json j = params_to_json(p);
  const ModelParams q = params_from_json(j);
  CHECK(q.rho == p.rho);
  CHECK(q.kappa == p.kappa);
  CHECK(q.theta == p.theta);
  CHECK(q.mu == p.mu);
  CHECK(q.beta == p.beta);
  CHECK(q.delta == p.delta);
  CHECK(q.lambda == p.lambda);
}

TEST_CASE("params JSON rejects unknown and missing keys") {
  json j = params_to_json(base());
  j["extra"] = 1.0;
  CHECK_THROWS_AS(params_from_json(j), ValidationError);

  json missing = params_to_json(base());
  missing.erase("mu");
  CHECK_THROWS_AS(params_from_json(missing), ValidationError);

  json wrong_type = params_to_json(base());
  wrong_type["rho"] = "fast";
  CHECK_THROWS_AS(params_from_json(wrong_type), ValidationError);

  CHECK_THROWS_AS(params_from_json(json::array()), ValidationError);
}

TEST_CASE("analysis JSON carries the landmarks and labels") {
  const LimitAnalysis a = analyze(base());
  const json j = analysis_to_json(a);
  CHECK(j["schema_version"] == 1);
  CHECK(j["landmarks"].size() == 5);
  CHECK(j["sf_composition"] == "{y*_s}");
  REQUIRE(j["stable_set"].size() == 1);
  CHECK(j["stable_set"][0]["stability"] == "stable");
  CHECK(j["stable_set"][0]["kind"] == "quasi");
  CHECK(j["stable_set"][0]["region"] == "S");
  CHECK(j["thresholds"]["intermediate_region"] == "M");
  CHECK(j["configuration"]["threshold_positions"].size() == 2);

  // a flip configuration serializes the stable threshold into stable_set
  const json f = analysis_to_json(
      analyze(ModelParams{20.0, 8.0, 0.9, 1.0, 1.0, 0.65, 0.55}));
  REQUIRE(f["stable_set"].size() == 1);
  CHECK(f["stable_set"][0]["kind"] == "threshold");
  CHECK(f["stable_set"][0]["threshold_of"] == "I");
  CHECK(f["sf_composition"] == "{y_hat_i}");
}

TEST_CASE("trajectory CSV round trips through plain and gzip files") {
  TempDir tmp;
  const ModelParams p = base();
  const Trajectory traj =
      simulate(PlatformState{10.0, 90.0}, FixedPolicy{Region::N}, p, 5, 3);

  const fs::path plain = tmp.path / "traj.csv";
  const fs::path zipped = tmp.path / "traj.csv.gz";
  write_trajectory_csv(plain.string(), traj);
  write_trajectory_csv(zipped.string(), traj);

  const std::string text = slurp(plain);
  CHECK(text.rfind("n,T,F,y,region\n", 0) == 0);
  CHECK(count_occurrences(text, "\n") == 7);  // header + 6 states
  CHECK(text.find("0,10,90,0.1") != std::string::npos);
  CHECK(gunzip(zipped) == text);
}

TEST_CASE("file outputs are byte-identical across reruns") {
  TempDir tmp;
  const LimitAnalysis a = analyze(base());
  const fs::path first = tmp.path / "a.json";
  const fs::path second = tmp.path / "b.json";
  write_file(first.string(), analysis_to_json(a).dump(2));
  write_file(second.string(), analysis_to_json(analyze(base())).dump(2));
  CHECK(slurp(first) == slurp(second));

  const fs::path svg1 = tmp.path / "p1.svg";
  const fs::path svg2 = tmp.path / "p2.svg";
  write_file(svg1.string(), phase_diagram_svg(a));
  write_file(svg2.string(), phase_diagram_svg(analyze(base())));
  CHECK(slurp(svg1) == slurp(svg2));
}

TEST_CASE("phase diagram marks every landmark with the figure conventions") {
  const LimitAnalysis a = analyze(base());  // S_F = {y*_s}: one green marker
  const std::string svg = phase_diagram_svg(a);
  CHECK(count_occurrences(svg, "class=\"stable\"") == 1);
  CHECK(count_occurrences(svg, "class=\"out-of-region\"") == 2);  // y*_n, y*_m
  CHECK(count_occurrences(svg, "class=\"plain\"") == 2);          // both thresholds
  CHECK(count_occurrences(svg, "class=\"threshold\"") == 2);      // dashed lines
  CHECK(count_occurrences(svg, "stroke-dasharray") == 2);
  CHECK(count_occurrences(svg, "class=\"arrow\"") == 6);  // six intervals
  CHECK(svg.find("#1a9641") != std::string::npos);        // green
  CHECK(svg.find("#7b3294") != std::string::npos);        // purple

  // a configuration with an unstable threshold adds a red marker
  const LimitAnalysis u =
      analyze(ModelParams{13.0746, 2.4181, 0.6052, 16.5529, 11.0314, 0.9220, 0.8162});
  const std::string svg_u = phase_diagram_svg(u);
  CHECK(count_occurrences(svg_u, "class=\"unstable\"") == 1);
  CHECK(svg_u.find("#d7191c") != std::string::npos);  // red

  // total named markers equals the five landmarks
  CHECK(count_occurrences(svg_u, "class=\"stable\"") +
            count_occurrences(svg_u, "class=\"unstable\"") +
            count_occurrences(svg_u, "class=\"out-of-region\"") +
            count_occurrences(svg_u, "class=\"plain\"") ==
        5);
}

TEST_CASE("sweep CSV schema") {
  TempDir tmp;
  const SweepResult result =
      sweep(ParamName::Kappa, 0.5, 3.5, 7, base());
  const fs::path csv = tmp.path / "sweep.csv";
  const fs::path transitions = tmp.path / "transitions.csv";
  write_sweep_csv(csv.string(), result);
  write_transitions_csv(transitions.string(), result);

  const std::string text = slurp(csv);
  CHECK(text.rfind("parameter,value,knife_edge,y_hat_i,y_hat_m,y_star_n,"
                   "y_star_i,y_star_m,y_star_s,sf,config\n", 0) == 0);
  CHECK(count_occurrences(text, "\n") == 8);
  CHECK(text.find("kappa,0.5,0,") != std::string::npos);

  const std::string trans = slurp(transitions);
  CHECK(trans.rfind("parameter,lo,hi,sf_before,sf_after\n", 0) == 0);
  CHECK(count_occurrences(trans, "\n") == 1 + result.transitions.size());
}

TEST_CASE("sign report CSV schema") {
  TempDir tmp;
  std::vector<SignReport> reports = {
      sign_check(LandmarkId::YStarN, ParamName::Kappa, base()),
      sign_check(LandmarkId::YHatI, ParamName::Rho, base()),
  };
  const fs::path csv = tmp.path / "statics.csv";
  write_sign_reports_csv(csv.string(), reports);
  const std::string text = slurp(csv);
  CHECK(text.rfind("target,parameter,predicted,base_value,h,derivative,"
                   "difference,verdict\n", 0) == 0);
  CHECK(count_occurrences(text, "\n") == 3);
  CHECK(text.find("y*_n,kappa,decreasing") != std::string::npos);
  CHECK(text.find("y_hat_i,rho,constant") != std::string::npos);
}

TEST_CASE("terminal CSV lists one row per run") {
  TempDir tmp;
  const ModelParams p = base();
  const LimitDistribution dist =
      estimate_limit_distribution(p, PlatformState{50, 50}, 8, 2000, 5, 0.05, 1);
  const fs::path csv = tmp.path / "terminal.csv";
  write_terminal_csv(csv.string(), dist);
  const std::string text = slurp(csv);
  CHECK(text.rfind("run,terminal_y,assigned_to\n", 0) == 0);
  CHECK(count_occurrences(text, "\n") == 9);
}

TEST_CASE("limit distribution JSON accounts for every run") {
  const ModelParams p = base();
  const LimitDistribution dist =
      estimate_limit_distribution(p, PlatformState{50, 50}, 10, 2000, 5, 0.05, 1);
  const json j = limit_distribution_to_json(dist);
  std::size_t total = j["unassigned_count"].get<std::size_t>();
  for (const auto& entry : j["assignment"]) total += entry["count"].get<std::size_t>();
  CHECK(total == 10);
  CHECK(j["n_runs"] == 10);
  CHECK(j["eps_assign"] == 0.05);
}
