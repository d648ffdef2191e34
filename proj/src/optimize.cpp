#include "gmnl/optimize.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gmnl/nelder_mead.hpp"

namespace gmnl {

namespace {

// Gell-Mann basis of traceless Hermitian 3x3 matrices.
const std::array<Eigen::Matrix3cd, 8>& gell_mann() {
  static const std::array<Eigen::Matrix3cd, 8> g = [] {
    std::array<Eigen::Matrix3cd, 8> m;
    for (auto& x : m) x.setZero();
    const Complex i(0, 1);
    m[0](0, 1) = m[0](1, 0) = 1;
    m[1](0, 1) = -i;
    m[1](1, 0) = i;
    m[2](0, 0) = 1;
    m[2](1, 1) = -1;
    m[3](0, 2) = m[3](2, 0) = 1;
    m[4](0, 2) = -i;
    m[4](2, 0) = i;
    m[5](1, 2) = m[5](2, 1) = 1;
    m[6](1, 2) = -i;
    m[6](2, 1) = i;
    const double r3 = 1.0 / std::sqrt(3.0);
    m[7](0, 0) = m[7](1, 1) = r3;
    m[7](2, 2) = -2 * r3;
    return m;
  }();
  return g;
}

// One orthonormal measurement basis per parameter block and input; columns
// are the outcome vectors.
Matrix basis_from_params(int local_dim, const double* p) {
  if (local_dim == 2) {
    const double ct = std::cos(p[0]), st = std::sin(p[0]);
    const Complex ph = std::polar(1.0, p[1]);
    Matrix b(2, 2);
    b(0, 0) = ct;
    b(1, 0) = ph * st;
    b(0, 1) = -st;
    b(1, 1) = ph * ct;
    return b;
  }
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  const auto& g = gell_mann();
  for (int j = 0; j < 8; ++j) h += p[j] * g[j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(h);
  Eigen::Vector3cd ph;
  for (int j = 0; j < 3; ++j) ph[j] = std::polar(1.0, es.eigenvalues()[j]);
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

struct DecodedTerm {
  std::vector<int> a, x;
  double coeff = 0;
};

struct Objective {
  const PureState* psi = nullptr;
  Scenario scenario;
  std::vector<DecodedTerm> terms;
  double q = 0;
  double uniform_value = 0;  // expression value of the maximally mixed behavior
  bool tie_parties = false;
  int params_per_input = 0;

  int blocks() const { return tie_parties ? std::min(scenario.parties, 2) : scenario.parties; }
  int block_of(int party) const { return tie_parties ? std::min(party, 1) : party; }
  int dims() const { return blocks() * scenario.inputs * params_per_input; }

  const double* param_ptr(const std::vector<double>& p, int block, int input) const {
    return p.data() + (block * scenario.inputs + input) * params_per_input;
  }

  // (1-q) * pure value + q * uniform value; maximization objective.
  double value(const std::vector<double>& p) const {
    std::vector<Matrix> basis(blocks() * scenario.inputs);
    for (int b = 0; b < blocks(); ++b)
      for (int x = 0; x < scenario.inputs; ++x)
        basis[b * scenario.inputs + x] =
            basis_from_params(psi->local_dim, param_ptr(p, b, x));

    const int n = scenario.parties, d = scenario.outcomes;
    double pure = 0;
    std::vector<const Complex*> col(n);
    for (const DecodedTerm& t : terms) {
      for (int k = 0; k < n; ++k) {
        const Matrix& bm = basis[block_of(k) * scenario.inputs + t.x[k]];
        col[k] = bm.col(t.a[k]).data();
      }
      Complex amp = 0;
      const std::uint64_t dim = psi->dim();
      for (std::uint64_t idx = 0; idx < dim; ++idx) {
        const Complex a0 = psi->amplitudes[idx];
        if (a0 == Complex(0, 0)) continue;
        Complex prod = a0;
        std::uint64_t rem = idx;
        for (int k = n - 1; k >= 0; --k) {
          prod *= std::conj(col[k][rem % d]);
          rem /= d;
        }
        amp += prod;
      }
      pure += t.coeff * std::norm(amp);
    }
    return (1 - q) * pure + q * uniform_value;
  }

  MeasurementSet measurements(const std::vector<double>& p) const {
    MeasurementSet ms =
        make_measurement_set(scenario.parties, scenario.inputs, scenario.outcomes,
                             psi->local_dim);
    for (int k = 0; k < scenario.parties; ++k)
      for (int x = 0; x < scenario.inputs; ++x)
        ms.effects[k][x] =
            projective_effects(basis_from_params(psi->local_dim, param_ptr(p, block_of(k), x)));
    ms.validate();
    return ms;
  }
};

}  // namespace

OptimizationResult optimize_expression(const BellExpression& expr, const PureState& psi,
                                       double q, const OptimizationConfig& cfg) {
  expr.scenario.validate();
  psi.validate();
  if (psi.subsystems != expr.scenario.parties)
    throw InputError("state and expression disagree on the number of parties");
  if (psi.local_dim != expr.scenario.outcomes)
    throw InputError("projective optimization needs local_dim == outcomes");
  if (psi.local_dim != 2 && psi.local_dim != 3)
    throw InputError("measurement parametrization covers local dimensions 2 and 3");
  if (q < 0 || q > 1) throw InputError("noise weight must lie in [0, 1]");
  if (cfg.restarts < 1) throw InputError("optimizer needs at least one restart");

  Objective obj;
  obj.psi = &psi;
  obj.scenario = expr.scenario;
  obj.q = q;
  obj.tie_parties = cfg.tie_parties;
  obj.params_per_input = psi.local_dim == 2 ? 2 : 8;
  double dim_inv = 1;
  for (int k = 0; k < expr.scenario.parties; ++k) dim_inv /= expr.scenario.outcomes;
  for (const auto& [key, c] : expr.terms) {
    DecodedTerm t;
    auto [a, x] = expr.scenario.unflatten_index(key);
    t.a = std::move(a);
    t.x = std::move(x);
    t.coeff = c;
    obj.terms.push_back(std::move(t));
    obj.uniform_value += c * dim_inv;
  }

  NelderMeadOptions nm;
  nm.max_iterations = cfg.max_iterations;
  auto negated = [&obj](const std::vector<double>& p) { return -obj.value(p); };

  OptimizationResult res;
  bool have = false;
  std::vector<double> best_params;
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::seed_seq ss{static_cast<std::uint32_t>(cfg.seed),
                     static_cast<std::uint32_t>(cfg.seed >> 32),
                     static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(ss);
    std::uniform_real_distribution<double> init(-std::numbers::pi, std::numbers::pi);
    std::vector<double> x0(obj.dims());
    for (double& v : x0) v = init(rng);
    const NelderMeadResult nr = nelder_mead_minimize(negated, std::move(x0), nm);
    res.evaluations += nr.evaluations;
    if (!have || -nr.value > res.value) {
      res.value = -nr.value;
      res.best_restart = restart;
      best_params = nr.x;
      have = true;
    }
  }
  res.measurements = obj.measurements(best_params);
  return res;
}

OptimizationResult optimize_margin(const ComposedInequality& ineq, const PureState& psi,
                                   double q, const OptimizationConfig& cfg) {
  return optimize_expression(ineq.margin_expression(), psi, q, cfg);
}

double noisy_expression_value(const BellExpression& expr, const PureState& psi,
                              const MeasurementSet& meas, double q) {
  const Behavior b = born_behavior(mix_white_noise(density_of(psi), q), meas);
  return evaluate(expr, b);
}

}  // namespace gmnl
