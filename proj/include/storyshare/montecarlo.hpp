#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "storyshare/limit.hpp"

namespace storyshare {

// Exogenous mid-run injection of stories (the shock experiment).
struct Shock {
  std::size_t at_step;
  double add_true = 0.0;
  double add_false = 0.0;
};

struct TerminalStats {
  double window_mean;  // mean of y over the last 1% of steps (min 1)
  PlatformState final_state;
  Region final_region;
};

// Streams one run without recording the path. Convergence measurements use
// the terminal window mean, not the single final state, to damp residual noise.
TerminalStats run_terminal(const ModelParams& p, const Policy& policy,
                           PlatformState initial, std::size_t n_steps,
                           SplitMix64 rng,
                           const std::optional<Shock>& shock = std::nullopt);

struct AssignmentEntry {
  LdiSteadyState point;
  std::size_t count;
};

struct LimitDistribution {
  ModelParams params{};
  PlatformState initial{};
  std::size_t n_runs = 0;
  std::size_t n_steps = 0;
  std::uint64_t seed = 0;
  double eps_assign = 0.0;
  std::vector<double> terminal_y;          // indexed by run
  std::vector<AssignmentEntry> assignment; // one entry per stable steady state
  std::size_t unassigned_count = 0;
};

// Runs n_runs independent Optimal-policy simulations and assigns each
// terminal-window mean to the nearest stable steady state if within
// eps_assign, else unassigned. Mass near unstable points is diagnostic of
// insufficient n_steps, so assignment only ever targets S_F.
LimitDistribution estimate_limit_distribution(const ModelParams& p,
                                              const PlatformState& initial,
                                              std::size_t n_runs,
                                              std::size_t n_steps,
                                              std::uint64_t seed,
                                              double eps_assign = 0.02,
                                              int threads = 0);

struct NonconvergenceReport {
  std::size_t n_runs = 0;
  std::size_t near_count = 0;  // runs with terminal window within 0.01 of the point
  double fraction = 0.0;
};

// Starts every run at y0 = point.location with |z0| = 100 and reports the
// fraction of terminal windows within 0.01 of the point. Theory: zero for
// unstable steady states, positive for stable ones. n_runs = 0 gives an empty
// report. Throws std::invalid_argument if `point` is not a steady state of
// the analysis (member of stable_set or unstable_set).
NonconvergenceReport nonconvergence_check(const ModelParams& p,
                                          const LdiSteadyState& point,
                                          std::size_t n_runs,
                                          std::size_t n_steps,
                                          std::uint64_t seed,
                                          int threads = 0);

struct LimitClass {
  LdiSteadyState point;
  std::string behavior;  // limit user behavior at that point
  std::size_t count;
};

struct PathDependenceReport {
  std::vector<LimitClass> classes;  // limit points actually reached
  std::size_t unassigned_count = 0;
  bool degenerate = false;  // all runs reached a single point
};

// Demonstrates distinct limit behaviors from one initial state. Requires
// |S_F| >= 2 (std::invalid_argument otherwise).
PathDependenceReport path_dependence_report(const ModelParams& p,
                                            const PlatformState& initial,
                                            std::size_t n_runs,
                                            std::size_t n_steps,
                                            std::uint64_t seed,
                                            double eps_assign = 0.02,
                                            int threads = 0);

// Limit user behavior at a steady state: the region's sharing rule, or the
// threshold mixture of the two adjacent rules.
std::string limit_behavior(const LdiSteadyState& point, const Thresholds& th);

}  // namespace storyshare
