#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "storyshare/params.hpp"
#include "storyshare/rng.hpp"

namespace storyshare {

// Draws a parameter vector satisfying every model assumption with margin
// (assumption boundaries are avoided so solves stay well conditioned):
// rho, kappa log-uniform in [0.05, 20]; theta in [0.05, 0.95]; delta in
// [0.52, 0.95]; lambda in [0.1, 0.95]; mu log-uniform above 1.05*(1-lambda)/lambda;
// beta log-uniform above 1.05*mu*theta/2.
ModelParams sample_valid_params(SplitMix64& rng);

// As above, but redraws until analyze() accepts (no knife-edge configuration).
ModelParams sample_analyzable_params(SplitMix64& rng);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;  // measured values and the tolerance they were held to
};

struct VerifyOptions {
  std::string filter;       // substring of the criterion name; empty = all
  int threads = 0;          // 0 = hardware concurrency
  bool inject_failure = false;  // harness self-check: force one criterion red
};

// Runs the acceptance battery (fixed reference seeds, pinned tolerances) and
// returns one result per executed criterion.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& options);

// Prints "[PASS|FAIL] <id> <name> (<seconds>s): <detail>" per criterion plus a
// summary line; returns true iff every executed criterion passed.
bool report_acceptance(const std::vector<CriterionResult>& results);

}  // namespace storyshare
