#include <doctest.h>

#include <limits>

#include "storyshare/params.hpp"

using namespace storyshare;

namespace {
ModelParams base_ok() { return {1.0, 1.0, 0.75, 1.0, 1.0, 0.7, 0.75}; }
}  // namespace

TEST_CASE("base parameter set satisfies every assumption") {
  const ModelParams p = base_ok();
  // Hand arithmetic: (1-lambda)/lambda = 0.25/0.75 = 1/3 < mu = 1, and
  // mu*theta = 0.75 < 2*beta = 2.
  CHECK(p.mu > (1.0 - p.lambda) / p.lambda);
  CHECK(p.mu * p.theta < 2.0 * p.beta);
  CHECK(validate(p).empty());
  CHECK(is_valid(p));
}

TEST_CASE("assumption 1 violation is reported") {
  ModelParams p = base_ok();
  p.lambda = 0.2;  // (1-lambda)/lambda = 4 > mu = 1
  const auto violations = validate(p);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("assumption 1") != std::string::npos);
}

TEST_CASE("open-interval boundaries are excluded") {
  ModelParams p = base_ok();
  p.theta = 1.0;
  CHECK(validate(p).size() == 1);

  p = base_ok();
  p.delta = 0.5;
  CHECK_FALSE(validate(p).empty());
  p.delta = 1.0;
  CHECK_FALSE(validate(p).empty());

  p = base_ok();
  p.lambda = 1.0;
  CHECK_FALSE(validate(p).empty());
}

TEST_CASE("nonpositive and nonfinite fields are violations") {
  ModelParams p = base_ok();
  p.rho = 0.0;
  CHECK_FALSE(validate(p).empty());

  p = base_ok();
  p.kappa = -1.0;
  CHECK_FALSE(validate(p).empty());

  p = base_ok();
  p.beta = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(validate(p).empty());
}

TEST_CASE("validate is pure") {
  ModelParams p = base_ok();
  p.lambda = 0.2;
  p.theta = 1.5;
  const auto first = validate(p);
  const auto second = validate(p);
  CHECK(first == second);
  CHECK(first.size() >= 2);  // one entry per violated constraint
}

TEST_CASE("require_valid throws with the violation list") {
  ModelParams p = base_ok();
  p.lambda = 0.2;
  CHECK_THROWS_AS(require_valid(p), ValidationError);
  try {
    require_valid(p);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("assumption 1") != std::string::npos);
  }
}

TEST_CASE("platform state share") {
  const PlatformState z{3.0, 1.0};
  CHECK(z.total() == 4.0);
  CHECK(z.share_true() == 0.75);

  const PlatformState empty{0.0, 0.0};
  CHECK_THROWS_AS(empty.share_true(), std::domain_error);
}
