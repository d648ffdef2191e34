#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "gmnl/quantum.hpp"

namespace gmnl {

// Three-qubit generalized Schmidt form
//
//   a e^{i phase}|000> + b|011> + c|101> + d|110> + e|111>
//
// with a >= b >= c >= d >= 0, a >= e >= 0 and unit norm.  A local-unitary
// orbit generally meets this support in several such tuples (one per
// stationary frame of the product overlap |<xyz|psi>|); the tuple with
// maximal `a` -- the closest-product-state frame -- is generically unique
// and serves as the canonical representative.
struct CanonicalState {
  double a = 1, b = 0, c = 0, d = 0, e = 0;
  double phase = 0;

  void validate() const;  // ordering, ranges, unit norm
  PureState state_vector() const;
};

// Random canonical state with the orderings strict by at least `min_gap`
// (b - c, c - d and c itself), so the certification construction below is
// well inside its domain.  Magnitudes are normalized |N(0,1)| draws with the
// largest assigned to `a`; the phase is uniform.
CanonicalState sample_canonical(std::mt19937_64& rng, double min_gap = 1e-6);

// Certification measurements for a canonical state: one two-outcome qubit
// observable pair per party, parametrized by a mixing angle alpha.  Three of
// the six star-margin terms vanish identically in alpha; solving
// cross_term_amplitude == 0 kills the fourth, and what remains is
// c^2 sin^2(alpha) (1 - c^4/eta_1^2) > 0 whenever a > c > 0.
MeasurementSet construction_measurements(const CanonicalState& s, double alpha);

// Amplitude of the p(000|110) term as a function of alpha; its root in
// (0, pi/2) exists iff e > 0.
double cross_term_amplitude(const CanonicalState& s, double alpha);

// Root of cross_term_amplitude for e > 0 (bisection to 1e-12); pi/4 for e = 0.
double solve_mixing_angle(const CanonicalState& s);

// Closed forms for the six margin terms of the tripartite star composition,
// in the order {p(000|000), p(100|100), p(010|010), p(001|001), p(000|110),
// p(000|101)}; the margin is t[0] - t[1] - ... - t[5].
std::array<double, 6> margin_term_values(const CanonicalState& s, double alpha);

double closed_form_margin(const CanonicalState& s, double alpha);
double closed_form_margin(const CanonicalState& s);  // at the solved angle

// Reduction of an arbitrary three-qubit pure state to its canonical
// representative: alternating product-overlap ascent from random local frames
// locates the stationary branches, exact per-qubit minimization of the
// off-support weight polishes them to machine scale, and the accepted branch
// with maximal `a` wins.  Phase fixing and party sorting normalize the tuple.
struct CanonicalForm {
  CanonicalState state;
  double residual = 0;  // norm left outside the canonical support
  int restarts_used = 0;
};

CanonicalForm canonicalize(const PureState& psi, std::uint64_t seed = 0, int max_restarts = 40);

}  // namespace gmnl
