#pragma once

#include <stdexcept>
#include <string>

namespace storyshare {

// Absolute tolerance on root residuals |f(root)| for bisection solves.
inline constexpr double kRootTol = 1e-12;

// Two landmarks closer than this are a degenerate (knife-edge) configuration.
// Kept an order of magnitude above kRootTol so detection is stable.
inline constexpr double kKnifeEdgeTol = 1e-9;

// Iteration cap for bisection solves.
inline constexpr int kMaxBisectIter = 200;

// How interesting a story is to the current user. Redrawn per user; a story's
// veracity is fixed but its evocativeness is not.
enum class Evocativeness { M, I };  // M = mildly interesting, I = very interesting

// Sharing regimes over the share of true stories y. N and S are always the
// leftmost/rightmost regions; the intermediate region is I or M depending on
// the ordering of the two thresholds, never both.
enum class Region { N, I, M, S };

const char* to_string(Region r);
const char* to_string(Evocativeness e);

// Thrown when two landmarks coincide within kKnifeEdgeTol. The analysis
// excludes these configurations rather than breaking ties.
class KnifeEdgeError : public std::runtime_error {
 public:
  explicit KnifeEdgeError(const std::string& what_arg)
      : std::runtime_error(what_arg) {}
};

// Thrown by require_valid(); carries the joined violation list.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what_arg)
      : std::invalid_argument(what_arg) {}
};

}  // namespace storyshare
