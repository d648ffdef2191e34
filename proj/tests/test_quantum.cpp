#include <doctest.h>

#include <cmath>

#include "gmnl/quantum.hpp"

using namespace gmnl;

namespace {

// Real rotation basis: column a is the projector direction of outcome a.
Matrix rotation_basis(double t) {
  Matrix m(2, 2);
  m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return m;
}

}  // namespace

TEST_CASE("ghz state amplitudes and dimension cap") {
  const PureState g = ghz_state(3, 2);
  CHECK(g.dim() == 8);
  CHECK(g.amplitudes[0] == Complex(1 / std::sqrt(2.0), 0));
  CHECK(g.amplitudes[7] == Complex(1 / std::sqrt(2.0), 0));
  CHECK_NOTHROW(g.validate());

  CHECK_NOTHROW(ghz_state(10, 3));          // 3^10 is the cap itself
  CHECK_THROWS_AS(ghz_state(11, 3), InputError);
  CHECK_THROWS_AS(ghz_state(16, 2), InputError);
}

TEST_CASE("density matrix of a pure state and white-noise mixing") {
  const DensityMatrix rho = density_of(ghz_state(2, 2));
  CHECK_NOTHROW(rho.validate());
  CHECK(std::abs(rho.rho.trace() - Complex(1, 0)) < 1e-14);
  CHECK(std::abs(rho.rho(0, 3) - Complex(0.5, 0)) < 1e-14);

  const DensityMatrix noisy = mix_white_noise(rho, 0.3);
  CHECK_NOTHROW(noisy.validate());
  CHECK(std::abs(noisy.rho(0, 0) - Complex(0.3 / 4 + 0.7 * 0.5, 0)) < 1e-14);
  CHECK(std::abs(noisy.rho(0, 3) - Complex(0.35, 0)) < 1e-14);

  const DensityMatrix flat = mix_white_noise(rho, 1.0);
  CHECK(std::abs(flat.rho(1, 1) - Complex(0.25, 0)) < 1e-14);
  CHECK_THROWS_AS(mix_white_noise(rho, -0.1), InputError);
  CHECK_THROWS_AS(mix_white_noise(rho, 1.1), InputError);
}

TEST_CASE("projective effects are complete rank-1 projectors") {
  const Matrix basis = rotation_basis(0.7);
  const auto effects = projective_effects(basis);
  REQUIRE(effects.size() == 2);
  Matrix sum = effects[0] + effects[1];
  CHECK((sum - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  for (const Matrix& m : effects) {
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m * m - m).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("born rule against the two-qubit analytic form") {
  // For (|00> + |11>)/sqrt(2) and real rotations s, t:
  //   p(ab|st) = cos^2(s - t)/2 when a = b, sin^2(s - t)/2 otherwise
  const PureState phi = ghz_state(2, 2);
  MeasurementSet meas = make_measurement_set(2, 2, 2, 2);
  const double s[] = {0.3, 1.1}, t[] = {-0.4, 0.55};
  for (int in = 0; in < 2; ++in) {
    meas.effects[0][in] = projective_effects(rotation_basis(s[in]));
    meas.effects[1][in] = projective_effects(rotation_basis(t[in]));
  }
  const Behavior b = born_behavior(density_of(phi), meas);
  CHECK_NOTHROW(b.validate());
  for (int x0 = 0; x0 < 2; ++x0)
    for (int x1 = 0; x1 < 2; ++x1) {
      const double delta = s[x0] - t[x1];
      for (int a0 = 0; a0 < 2; ++a0)
        for (int a1 = 0; a1 < 2; ++a1) {
          const int a[] = {a0, a1}, x[] = {x0, x1};
          const double want =
              (a0 == a1 ? std::cos(delta) * std::cos(delta) : std::sin(delta) * std::sin(delta)) /
              2;
          CHECK(b.at(a, x) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("born rule on a three-party computational measurement") {
  const PureState g = ghz_state(3, 2);
  MeasurementSet meas = make_measurement_set(3, 2, 2, 2);
  for (int p = 0; p < 3; ++p)
    for (int in = 0; in < 2; ++in) meas.effects[p][in] = projective_effects(Matrix::Identity(2, 2));
  const Behavior b = born_behavior(density_of(g), meas);
  for (std::uint64_t x = 0; x < 8; ++x) {
    CHECK(b.p[0 * 8 + x] == doctest::Approx(0.5));   // all zeros
    CHECK(b.p[7 * 8 + x] == doctest::Approx(0.5));   // all ones
    CHECK(b.p[3 * 8 + x] == doctest::Approx(0.0));
  }
  CHECK(check_nonsignaling(b).pass);
}

TEST_CASE("measurement validation catches incomplete settings") {
  MeasurementSet meas = make_measurement_set(1, 1, 2, 2);
  meas.effects[0][0][0] = Matrix::Identity(2, 2) * 0.5;
  meas.effects[0][0][1] = Matrix::Identity(2, 2) * 0.4;
  CHECK_THROWS_AS(meas.validate(), std::runtime_error);
  meas.effects[0][0][1] = Matrix::Identity(2, 2) * 0.5;
  CHECK_NOTHROW(meas.validate());
}
