#include <doctest.h>

#include <cmath>

#include "psbc/checks/oracles.hpp"
#include "psbc/checks/suites.hpp"

using namespace psbc;

TEST_CASE("property suites pass at reduced scale") {
  for (const auto& suite : suites::default_suites(0.02, 17)) {
    const auto r = suite.run();
    INFO(suite.name << ": " << r.detail);
    CHECK(r.checks > 0);
    CHECK(r.failures == 0);
  }
}

TEST_CASE("gradient oracle flags a corrupted tolerance") {
  // A zero tolerance cannot be met by finite differences.
  const auto r = suites::gradient_oracle(3, 5, 0.0);
  CHECK_FALSE(r.passed());
}

TEST_CASE("trajectories escape the box well beyond the IREC bound") {
  const auto r = suites::irec_counterexample(20, 3, 9.0);
  INFO(r.detail);
  CHECK(r.passed());
}

TEST_CASE("the quartic is negative at the right end of its claimed range") {
  // With z = 1 + s and s^2 = 1/3: p = z - (1 - z)^2 (z^2 + z + 1) = 1 + s - (10/3 + 3 s) / 3 = -1/9.
  const double z = 1.0 + 1.0 / std::sqrt(3.0);
  CHECK(oracle::quartic_bound_polynomial(z) == doctest::Approx(-1.0 / 9.0).epsilon(1e-12));
  CHECK(oracle::quartic_bound_polynomial(1.0) == 1.0);
  const auto r = suites::polynomial_lemma(10000, 8);
  CHECK_FALSE(r.passed());
  CHECK(r.failures > 0);
}
