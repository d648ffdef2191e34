#include "gmnl/behavior.hpp"

#include <algorithm>
#include <cmath>

namespace gmnl {

void Behavior::validate(const Tolerances& tol) const {
  scenario.validate();
  if (p.size() != scenario.table_size())
    throw InputError("behavior length does not match scenario " + scenario.str());
  for (double v : p) {
    if (!std::isfinite(v) || v < -tol.probability_slack || v > 1.0 + tol.probability_slack)
      throw std::runtime_error("behavior entry outside [0,1]");
  }
  const std::uint64_t nx = scenario.input_tuples();
  const std::uint64_t na = scenario.outcome_tuples();
  for (std::uint64_t x = 0; x < nx; ++x) {
    double s = 0.0;
    for (std::uint64_t a = 0; a < na; ++a) s += p[a * nx + x];
    if (std::abs(s - 1.0) > tol.normalization)
      throw std::runtime_error("behavior not normalized for some input tuple");
  }
  NonsignalingReport ns = check_nonsignaling(*this, tol);
  if (!ns.pass)
    throw std::runtime_error("behavior signals: marginal discrepancy " +
                             std::to_string(ns.max_discrepancy));
}

Behavior uniform_behavior(const Scenario& sc) {
  sc.validate();
  Behavior b(sc);
  const double v = 1.0 / static_cast<double>(sc.outcome_tuples());
  std::fill(b.p.begin(), b.p.end(), v);
  return b;
}

Behavior pr_box() {
  Behavior b(Scenario{2, 2, 2});
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int bo = 0; bo < 2; ++bo)
          if ((a ^ bo) == (x & y)) {
            const int av[] = {a, bo}, xv[] = {x, y};
            b.at(av, xv) = 0.5;
          }
  return b;
}

NonsignalingReport check_nonsignaling(const Behavior& b, const Tolerances& tol) {
  const Scenario& sc = b.scenario;
  NonsignalingReport rep;
  const std::uint64_t nx = sc.input_tuples();
  const std::uint64_t na = sc.outcome_tuples();
  for (int k = 0; k < sc.parties; ++k) {
    for (int xk = 0; xk < sc.inputs; ++xk) {
      for (int ak = 0; ak < sc.outcomes; ++ak) {
        double lo = 2.0, hi = -1.0;
        // Marginal of party k for each assignment of the other inputs.
        for (std::uint64_t x = 0; x < nx; ++x) {
          std::vector<int> xv = sc.unflatten_input(x);
          if (xv[k] != xk) continue;
          double m = 0.0;
          for (std::uint64_t a = 0; a < na; ++a) {
            std::vector<int> av = sc.unflatten_outcome(a);
            if (av[k] == ak) m += b.p[a * nx + x];
          }
          lo = std::min(lo, m);
          hi = std::max(hi, m);
        }
        const double gap = hi - lo;
        if (gap > rep.max_discrepancy) {
          rep.max_discrepancy = gap;
          rep.party = k;
          rep.input = xk;
          rep.outcome = ak;
        }
      }
    }
  }
  rep.pass = rep.max_discrepancy <= tol.nonsignaling;
  return rep;
}

}  // namespace gmnl
