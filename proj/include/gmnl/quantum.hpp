#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "gmnl/behavior.hpp"
#include "gmnl/core.hpp"

namespace gmnl {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Pure state of `subsystems` qudits of equal local dimension `local_dim`,
// amplitudes in the computational basis with party 0 most significant.
struct PureState {
  int subsystems = 0;
  int local_dim = 0;
  Vector amplitudes;

  std::uint64_t dim() const { return amplitudes.size(); }
  void validate(const Tolerances& tol = default_tolerances()) const;
};

struct DensityMatrix {
  int subsystems = 0;
  int local_dim = 0;
  Matrix rho;

  std::uint64_t dim() const { return rho.rows(); }
  void validate(const Tolerances& tol = default_tolerances()) const;
};

DensityMatrix density_of(const PureState& psi);

// (1/sqrt(d)) sum_i |i i ... i>.  Throws when d^n exceeds kDimensionCap.
PureState ghz_state(int parties, int local_dim);

// (1-q) rho + q * 1/dim, q in [0,1].
DensityMatrix mix_white_noise(const DensityMatrix& rho, double q);

// Measurement effects per party and setting: effects[party][input][outcome]
// is a local_dim x local_dim PSD matrix; the effects of one setting sum to
// the identity.
struct MeasurementSet {
  int parties = 0;
  int inputs = 0;
  int outcomes = 0;
  int local_dim = 0;
  std::vector<std::vector<std::vector<Matrix>>> effects;

  Scenario scenario() const { return Scenario{parties, inputs, outcomes}; }
  void validate(const Tolerances& tol = default_tolerances()) const;
};

// Scaffolds an all-identity-free empty set with the right shape.
MeasurementSet make_measurement_set(int parties, int inputs, int outcomes, int local_dim);

// Rank-1 projective measurement from an orthonormal basis: effect for
// outcome a projects onto basis column a.
std::vector<Matrix> projective_effects(const Matrix& basis);

// p(a|x) = Tr[rho (x) M_{a_1|x_1} ... ].  Validates rho and the effects.
Behavior born_behavior(const DensityMatrix& rho, const MeasurementSet& meas,
                       const Tolerances& tol = default_tolerances());

}  // namespace gmnl
