#include <doctest.h>

#include "gmnl/behavior.hpp"
#include "gmnl/expression.hpp"

using namespace gmnl;

TEST_CASE("uniform behavior validates and scores the two-party seed at -1/2") {
  const Behavior u = uniform_behavior(Scenario{2, 2, 2});
  CHECK_NOTHROW(u.validate());
  CHECK(check_nonsignaling(u).pass);
  CHECK(evaluate(chsh_seed(), u) == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("extremal binary box reaches 1/2 on the two-party seed") {
  const Behavior pr = pr_box();
  CHECK_NOTHROW(pr.validate());
  CHECK(check_nonsignaling(pr).pass);
  // a XOR b = x AND y with uniform marginals
  const int a00[] = {0, 0}, a01[] = {0, 1}, x00[] = {0, 0}, x11[] = {1, 1};
  CHECK(pr.at(a00, x00) == doctest::Approx(0.5));
  CHECK(pr.at(a01, x00) == doctest::Approx(0.0));
  CHECK(pr.at(a00, x11) == doctest::Approx(0.0));
  CHECK(pr.at(a01, x11) == doctest::Approx(0.5));
  CHECK(evaluate(chsh_seed(), pr) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("normalization failures are caught") {
  Behavior b = uniform_behavior(Scenario{2, 2, 2});
  b.p[0] += 1e-6;
  CHECK_THROWS_AS(b.validate(), std::runtime_error);

  Behavior neg = uniform_behavior(Scenario{2, 2, 2});
  neg.p[0] = -1e-6;
  neg.p[4] = 0.25 + 1e-6;
  CHECK_THROWS_AS(neg.validate(), std::runtime_error);
}

TEST_CASE("signaling tables are flagged with the offending marginal") {
  // Party 0 answers its own input unless party 1 pressed input 1.
  Behavior b(Scenario{2, 2, 2});
  for (int x0 = 0; x0 < 2; ++x0)
    for (int x1 = 0; x1 < 2; ++x1) {
      const int a[] = {x1 == 1 ? 1 - x0 : x0, 0};
      const int x[] = {x0, x1};
      b.at(a, x) = 1.0;
    }
  const NonsignalingReport rep = check_nonsignaling(b);
  CHECK_FALSE(rep.pass);
  CHECK(rep.max_discrepancy == doctest::Approx(1.0));
  CHECK(rep.party == 0);
  CHECK_THROWS_AS(b.validate(), std::runtime_error);
}
