#include "gmnl/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace gmnl {

namespace {

std::uint64_t checked_dim(int parties, int local_dim) {
  if (parties < 1 || local_dim < 2) throw InputError("need parties >= 1 and local_dim >= 2");
  std::uint64_t dim = 1;
  for (int k = 0; k < parties; ++k) {
    dim *= static_cast<std::uint64_t>(local_dim);
    if (dim > kDimensionCap)
      throw InputError("joint dimension exceeds cap " + std::to_string(kDimensionCap));
  }
  return dim;
}

void check_psd(const Matrix& m, double slack, const char* what) {
  if (m.rows() != m.cols()) throw InputError(std::string(what) + " not square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::runtime_error(std::string(what) + " not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.eigenvalues().minCoeff() < -slack)
    throw std::runtime_error(std::string(what) + " not positive semidefinite");
}

}  // namespace

void PureState::validate(const Tolerances& tol) const {
  checked_dim(subsystems, local_dim);
  std::uint64_t dim = 1;
  for (int k = 0; k < subsystems; ++k) dim *= local_dim;
  if (static_cast<std::uint64_t>(amplitudes.size()) != dim)
    throw InputError("amplitude vector length does not match subsystem layout");
  if (std::abs(amplitudes.norm() - 1.0) > tol.unit_norm)
    throw std::runtime_error("pure state not normalized");
}

void DensityMatrix::validate(const Tolerances& tol) const {
  checked_dim(subsystems, local_dim);
  std::uint64_t dim = 1;
  for (int k = 0; k < subsystems; ++k) dim *= local_dim;
  if (static_cast<std::uint64_t>(rho.rows()) != dim || rho.rows() != rho.cols())
    throw InputError("density matrix shape does not match subsystem layout");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol.hermiticity)
    throw std::runtime_error("density matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol.trace_deviation ||
      std::abs(rho.trace().imag()) > tol.trace_deviation)
    throw std::runtime_error("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
  if (es.eigenvalues().minCoeff() < -tol.psd_slack)
    throw std::runtime_error("density matrix not positive semidefinite");
}

DensityMatrix density_of(const PureState& psi) {
  DensityMatrix dm;
  dm.subsystems = psi.subsystems;
  dm.local_dim = psi.local_dim;
  dm.rho = psi.amplitudes * psi.amplitudes.adjoint();
  return dm;
}

PureState ghz_state(int parties, int local_dim) {
  const std::uint64_t dim = checked_dim(parties, local_dim);
  PureState psi;
  psi.subsystems = parties;
  psi.local_dim = local_dim;
  psi.amplitudes = Vector::Zero(dim);
  // |ii...i> has flat index i * (d^n - 1) / (d - 1).
  std::uint64_t stride = 0, place = 1;
  for (int k = 0; k < parties; ++k) {
    stride += place;
    place *= local_dim;
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(local_dim));
  for (int i = 0; i < local_dim; ++i) psi.amplitudes[i * stride] = amp;
  return psi;
}

DensityMatrix mix_white_noise(const DensityMatrix& rho, double q) {
  if (q < 0.0 || q > 1.0) throw InputError("noise weight must lie in [0,1]");
  DensityMatrix out = rho;
  const double dim = static_cast<double>(rho.dim());
  out.rho = (1.0 - q) * rho.rho + (q / dim) * Matrix::Identity(rho.dim(), rho.dim());
  return out;
}

MeasurementSet make_measurement_set(int parties, int inputs, int outcomes, int local_dim) {
  MeasurementSet ms;
  ms.parties = parties;
  ms.inputs = inputs;
  ms.outcomes = outcomes;
  ms.local_dim = local_dim;
  ms.effects.assign(parties, std::vector<std::vector<Matrix>>(
                                 inputs, std::vector<Matrix>(outcomes)));
  return ms;
}

std::vector<Matrix> projective_effects(const Matrix& basis) {
  if ((basis.adjoint() * basis - Matrix::Identity(basis.cols(), basis.cols()))
          .cwiseAbs()
          .maxCoeff() > 1e-10)
    throw std::runtime_error("measurement basis not orthonormal");
  std::vector<Matrix> eff;
  eff.reserve(basis.cols());
  for (int a = 0; a < basis.cols(); ++a)
    eff.push_back(basis.col(a) * basis.col(a).adjoint());
  return eff;
}

void MeasurementSet::validate(const Tolerances& tol) const {
  if (parties < 1 || inputs < 1 || outcomes < 2 || local_dim < 2)
    throw InputError("measurement set shape invalid");
  if (static_cast<int>(effects.size()) != parties)
    throw InputError("measurement set party count mismatch");
  for (const auto& per_party : effects) {
    if (static_cast<int>(per_party.size()) != inputs)
      throw InputError("measurement set input count mismatch");
    for (const auto& per_input : per_party) {
      if (static_cast<int>(per_input.size()) != outcomes)
        throw InputError("measurement set outcome count mismatch");
      Matrix sum = Matrix::Zero(local_dim, local_dim);
      for (const Matrix& m : per_input) {
        check_psd(m, tol.psd_slack, "measurement effect");
        sum += m;
      }
      if ((sum - Matrix::Identity(local_dim, local_dim)).cwiseAbs().maxCoeff() >
          tol.completeness)
        throw std::runtime_error("measurement effects do not sum to identity");
    }
  }
}

Behavior born_behavior(const DensityMatrix& rho, const MeasurementSet& meas,
                       const Tolerances& tol) {
  rho.validate(tol);
  meas.validate(tol);
  if (meas.parties != rho.subsystems || meas.local_dim != rho.local_dim)
    throw InputError("measurement set does not match state layout");

  const Scenario sc = meas.scenario();
  Behavior b(sc);
  const std::uint64_t nx = sc.input_tuples();
  const std::uint64_t na = sc.outcome_tuples();
  for (std::uint64_t x = 0; x < nx; ++x) {
    const std::vector<int> xv = sc.unflatten_input(x);
    for (std::uint64_t a = 0; a < na; ++a) {
      const std::vector<int> av = sc.unflatten_outcome(a);
      Matrix joint = meas.effects[0][xv[0]][av[0]];
      for (int k = 1; k < sc.parties; ++k) {
        const Matrix& next = meas.effects[k][xv[k]][av[k]];
        Matrix grown(joint.rows() * next.rows(), joint.cols() * next.cols());
        for (int i = 0; i < joint.rows(); ++i)
          for (int j = 0; j < joint.cols(); ++j)
            grown.block(i * next.rows(), j * next.cols(), next.rows(), next.cols()) =
                joint(i, j) * next;
        joint.swap(grown);
      }
      b.p[a * nx + x] = (rho.rho * joint).trace().real();
    }
  }
  b.validate(tol);
  return b;
}

}  // namespace gmnl
