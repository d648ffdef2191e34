#pragma once

#include <span>
#include <vector>

#include "gmnl/core.hpp"

namespace gmnl {

// Conditional outcome distribution p(a|x) over a scenario, stored dense in
// the canonical flat order of Scenario::index.
struct Behavior {
  Scenario scenario;
  std::vector<double> p;

  Behavior() = default;
  explicit Behavior(const Scenario& sc)
      : scenario(sc), p(sc.table_size(), 0.0) {}

  double& at(std::span<const int> a, std::span<const int> x) {
    return p[scenario.index(a, x)];
  }
  double at(std::span<const int> a, std::span<const int> x) const {
    return p[scenario.index(a, x)];
  }

  // Throws if entries leave [0,1], any input's distribution is unnormalized,
  // or the non-signaling check fails, all within `tol`.
  void validate(const Tolerances& tol = default_tolerances()) const;
};

// Uniformly random outcomes: p(a|x) = outcomes^-parties.
Behavior uniform_behavior(const Scenario& sc);

// The two-party binary box p(ab|xy) = 1/2 when a XOR b = x AND y.  Extremal
// non-signaling, not quantum realizable; used as a reference point in tests.
Behavior pr_box();

struct NonsignalingReport {
  bool pass = true;
  double max_discrepancy = 0.0;
  // Worst offender: marginal of `party` for setting `input` changed when the
  // other parties' inputs varied.
  int party = -1;
  int input = -1;
  int outcome = -1;
};

// Checks that every single-party outcome marginal is independent of all other
// parties' inputs.  Discrepancy is max-minus-min of the marginal across the
// other parties' input tuples.
NonsignalingReport check_nonsignaling(const Behavior& b,
                                      const Tolerances& tol = default_tolerances());

}  // namespace gmnl
