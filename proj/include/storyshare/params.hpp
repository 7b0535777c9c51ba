#pragma once

#include <string>
#include <vector>

#include "storyshare/common.hpp"

namespace storyshare {

// The seven model parameters. Immutable by convention: analysis results carry
// a copy of the params they were computed from.
struct ModelParams {
  double rho;     // reach: copies added to the platform per share
  double kappa;   // false stories exogenously added per period
  double theta;   // credibility of false stories, in (0,1)
  double mu;      // loss from sharing a false story relative to the gain from a true one
  double beta;    // attention cost coefficient, c(a) = beta * a^2
  double delta;   // P(very interesting | false), in (1/2,1)
  double lambda;  // payoff weight on veracity, in (0,1)
};

// Returns the empty list iff all parameter invariants hold; otherwise one
// entry per violated constraint. Violations are data, not failures.
//
// Checked: all fields strictly positive and finite; theta, lambda in (0,1);
// delta in (1/2,1); mu > (1-lambda)/lambda (users never share stories they
// know are false); mu*theta < 2*beta (interior attention levels).
std::vector<std::string> validate(const ModelParams& p);

bool is_valid(const ModelParams& p);

// Throws ValidationError listing every violation.
void require_valid(const ModelParams& p);

// Platform composition. Counts are nonnegative reals: per-period increments
// (1, kappa) and share increments rho need not be integers.
struct PlatformState {
  double t_count = 0.0;  // true stories
  double f_count = 0.0;  // false stories

  double total() const { return t_count + f_count; }

  // y = T/(T+F). Requires total() > 0.
  double share_true() const;
};

}  // namespace storyshare
