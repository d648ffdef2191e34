#include "gmnl/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gmnl {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double v) { return v * v; }

}  // namespace

void CanonicalState::validate() const {
  const Tolerances tol = default_tolerances();
  if (!(a >= b && b >= c && c >= d && d >= 0))
    throw InputError("canonical amplitudes must satisfy a >= b >= c >= d >= 0");
  if (!(a >= e && e >= 0)) throw InputError("canonical amplitudes must satisfy a >= e >= 0");
  const double norm2 = sq(a) + sq(b) + sq(c) + sq(d) + sq(e);
  if (std::abs(norm2 - 1.0) > tol.unit_norm * 10)
    throw InputError("canonical amplitudes must have unit norm");
}

PureState CanonicalState::state_vector() const {
  validate();
  PureState psi;
  psi.subsystems = 3;
  psi.local_dim = 2;
  psi.amplitudes = Vector::Zero(8);
  psi.amplitudes[0b000] = std::polar(a, phase);
  psi.amplitudes[0b011] = b;
  psi.amplitudes[0b101] = c;
  psi.amplitudes[0b110] = d;
  psi.amplitudes[0b111] = e;
  return psi;
}

CanonicalState sample_canonical(std::mt19937_64& rng, double min_gap) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  std::uniform_int_distribution<int> pick(0, 3);
  for (;;) {
    std::array<double, 5> v;
    double norm2 = 0;
    for (double& c : v) {
      c = std::abs(gauss(rng));
      norm2 += c * c;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& c : v) c *= inv;
    std::swap(v[0], *std::max_element(v.begin(), v.end()));
    std::swap(v[4], v[1 + pick(rng)]);  // e: uniform choice among the rest
    std::sort(v.begin() + 1, v.begin() + 4, std::greater<>());
    CanonicalState s;
    s.a = v[0];
    s.b = v[1];
    s.c = v[2];
    s.d = v[3];
    s.e = v[4];
    if (s.b - s.c < min_gap || s.c - s.d < min_gap || s.c < min_gap) continue;
    s.phase = angle(rng);
    return s;
  }
}

double cross_term_amplitude(const CanonicalState& s, double alpha) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  return sq(s.a) * sq(s.c) * sa * ca +
         (sq(s.a) * s.e * ca - s.b * sq(s.c) * sa) * (s.b * ca + s.e * sa);
}

double solve_mixing_angle(const CanonicalState& s) {
  s.validate();
  if (s.e == 0) return kPi / 4;
  // f(0) = a^2 b e > 0 and f(pi/2) = -b c^2 e < 0; bisect the sign change.
  double lo = 0, hi = kPi / 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = cross_term_amplitude(s, mid);
    if (std::abs(f) <= 1e-12) return mid;
    (f > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

MeasurementSet construction_measurements(const CanonicalState& s, double alpha) {
  s.validate();
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const Complex phase = std::polar(1.0, s.phase);

  auto basis_of = [](const Complex& v0, const Complex& v1) {
    // Orthonormal basis whose first column is (v0, v1) normalized.
    const double n = std::sqrt(std::norm(v0) + std::norm(v1));
    Matrix b(2, 2);
    b(0, 0) = v0 / n;
    b(1, 0) = v1 / n;
    b(0, 1) = -std::conj(b(1, 0));
    b(1, 1) = std::conj(b(0, 0));
    return b;
  };

  MeasurementSet ms = make_measurement_set(3, 2, 2, 2);
  ms.effects[0][0] = projective_effects(basis_of(ca, sa));
  ms.effects[0][1] = projective_effects(basis_of(-sq(s.c) * sa, sq(s.a) * ca));
  ms.effects[1][0] = projective_effects(basis_of(1, 0));
  ms.effects[1][1] = projective_effects(basis_of(s.c * sa, s.b * ca + s.e * sa));
  ms.effects[2][0] = projective_effects(basis_of(0, 1));
  ms.effects[2][1] = projective_effects(basis_of(phase * s.a * ca, s.c * sa));
  ms.validate();
  return ms;
}

std::array<double, 6> margin_term_values(const CanonicalState& s, double alpha) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double eta1_sq = sq(sq(s.c) * sa) + sq(sq(s.a) * ca);
  const double eta2_sq = sq(s.c * sa) + sq(s.b * ca + s.e * sa);
  const double f = cross_term_amplitude(s, alpha);
  std::array<double, 6> t{};
  t[0] = sq(s.c * sa);                            // p(000|000)
  t[1] = sq(s.c) * sq(sq(s.c) * sa) / eta1_sq;    // p(100|100)
  t[2] = 0;                                       // p(010|010)
  t[3] = 0;                                       // p(001|001)
  t[4] = sq(f) / (eta1_sq * eta2_sq);             // p(000|110)
  t[5] = 0;                                       // p(000|101)
  return t;
}

double closed_form_margin(const CanonicalState& s, double alpha) {
  const std::array<double, 6> t = margin_term_values(s, alpha);
  return t[0] - t[1] - t[2] - t[3] - t[4] - t[5];
}

double closed_form_margin(const CanonicalState& s) {
  return closed_form_margin(s, solve_mixing_angle(s));
}

// ---- reduction to the canonical form ----------------------------------------

namespace {

// Index layout: |a1 a2 a3> at a1*4 + a2*2 + a3; the canonical support is
// {0,3,5,6,7} and the weight to kill sits on {001,010,100} = {1,2,4}.
constexpr int kBit[3] = {4, 2, 1};

double off_weight(const Vector& amp) {
  return std::norm(amp[1]) + std::norm(amp[2]) + std::norm(amp[4]);
}

// One exact single-qubit minimization of off_weight over U on qubit k.  The
// three target amplitudes are linear in the rows of U; folding the row-1
// targets through the orthogonal complement makes all three linear in row 0,
// so the optimum is the bottom eigenvector of a 2x2 Gram matrix.
void minimize_on_qubit(Vector& amp, int k) {
  Eigen::Matrix2cd gram = Eigen::Matrix2cd::Zero();
  for (const int target : {1, 2, 4}) {
    const int lo = target & ~kBit[k], hi = target | kBit[k];
    Eigen::Vector2cd w;
    if ((target & kBit[k]) == 0) {
      w << amp[lo], amp[hi];
    } else {
      // |row1 . w| = |row0 . (conj(w1), -conj(w0))|
      w << std::conj(amp[hi]), -std::conj(amp[lo]);
    }
    gram += w.conjugate() * w.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(gram);
  const Eigen::Vector2cd u = es.eigenvectors().col(0);  // smallest eigenvalue
  Eigen::Matrix2cd rot;
  rot << u(0), u(1), -std::conj(u(1)), std::conj(u(0));
  for (int rest = 0; rest < 8; ++rest) {
    if (rest & kBit[k]) continue;
    const int lo = rest, hi = rest | kBit[k];
    const Complex a0 = amp[lo], a1 = amp[hi];
    amp[lo] = rot(0, 0) * a0 + rot(0, 1) * a1;
    amp[hi] = rot(1, 0) * a0 + rot(1, 1) * a1;
  }
}

void apply_on_qubit(Vector& amp, int k, const Eigen::Matrix2cd& u) {
  for (int rest = 0; rest < 8; ++rest) {
    if (rest & kBit[k]) continue;
    const Complex a0 = amp[rest], a1 = amp[rest | kBit[k]];
    amp[rest] = u(0, 0) * a0 + u(0, 1) * a1;
    amp[rest | kBit[k]] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

// Alternating maximization of the product overlap |<x y z|psi>|: with two
// factors fixed the optimal third is the normalized partial contraction.
// Off-support weight vanishes exactly at the stationary frames, so this finds
// the same zeros as the sweep minimizer, but the monotone ascent only settles
// on (near-)maxima of the overlap -- the a-dominant branches -- instead of
// wandering onto saddles.
double align_product_frame(const Vector& amp, std::array<Eigen::Vector2cd, 3>& x) {
  double overlap = 0;
  for (int cycle = 0; cycle < 2000; ++cycle) {
    double last = 0;
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
      for (int idx = 0; idx < 8; ++idx) {
        Complex coef = amp[idx];
        for (int j = 0; j < 3; ++j)
          if (j != k) coef *= std::conj(x[j][(idx & kBit[j]) ? 1 : 0]);
        v[(idx & kBit[k]) ? 1 : 0] += coef;
      }
      last = v.norm();
      if (last < 1e-15) return overlap;  // degenerate contraction; give up
      x[k] = v / last;
    }
    if (last <= overlap + 1e-16) return last;
    overlap = last;
  }
  return overlap;
}

Eigen::Matrix2cd haar_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector4d q;
  for (int i = 0; i < 4; ++i) q[i] = gauss(rng);
  q.normalize();
  Eigen::Matrix2cd u;
  u << Complex(q[0], q[1]), Complex(q[2], q[3]), Complex(-q[2], q[3]), Complex(q[0], -q[1]);
  return u;
}

double arg_or_zero(const Complex& z) { return std::abs(z) < 1e-14 ? 0.0 : std::arg(z); }

}  // namespace

CanonicalForm canonicalize(const PureState& psi, std::uint64_t seed, int max_restarts) {
  psi.validate();
  if (psi.subsystems != 3 || psi.local_dim != 2)
    throw InputError("canonical form is defined for three qubits");

  std::mt19937_64 rng(seed);
  CanonicalForm best;
  bool have = false;

  for (int restart = 0; restart <= max_restarts; ++restart) {
    Vector amp = psi.amplitudes;
    if (restart > 0)
      for (int k = 0; k < 3; ++k) apply_on_qubit(amp, k, haar_unitary(rng));

    std::array<Eigen::Vector2cd, 3> x;
    for (auto& v : x) v << 1, 0;
    align_product_frame(amp, x);
    for (int k = 0; k < 3; ++k) {
      Eigen::Matrix2cd u;
      u << std::conj(x[k][0]), std::conj(x[k][1]), -x[k][1], x[k][0];
      apply_on_qubit(amp, k, u);
    }

    // Polish: the overlap is quadratically flat near its stationary frames, so
    // the alternating ascent stalls with off-weight ~1e-16; the exact per-qubit
    // minimizer contracts it linearly and drives it to machine scale.
    for (int sweep = 0; sweep < 4000 && off_weight(amp) > 1e-26; ++sweep)
      minimize_on_qubit(amp, sweep % 3);
    const double residual = std::sqrt(off_weight(amp));
    if (residual > 1e-8) continue;

    double mag_a = std::abs(amp[0]), mag_e = std::abs(amp[7]);
    std::array<double, 3> bcd{std::abs(amp[3]), std::abs(amp[5]), std::abs(amp[6])};
    std::sort(bcd.begin(), bcd.end(), std::greater<>());
    if (mag_a + 1e-9 < bcd[0] || mag_a + 1e-9 < mag_e) continue;  // wrong branch

    const double beta = arg_or_zero(amp[3]), gamma = arg_or_zero(amp[5]);
    const double delta = arg_or_zero(amp[6]), eps = arg_or_zero(amp[7]);
    double phi = arg_or_zero(amp[0]) - beta - gamma - delta + 2 * eps;
    phi = std::remainder(phi, 2 * kPi);
    if (phi < 0) phi += 2 * kPi;

    // Renormalize the surviving support.
    const double norm =
        std::sqrt(sq(mag_a) + sq(bcd[0]) + sq(bcd[1]) + sq(bcd[2]) + sq(mag_e));
    CanonicalForm out;
    out.state.a = mag_a / norm;
    out.state.b = bcd[0] / norm;
    out.state.c = bcd[1] / norm;
    out.state.d = bcd[2] / norm;
    out.state.e = mag_e / norm;
    out.state.phase = phi;
    out.residual = residual;
    out.restarts_used = restart;
    // Zeroing the off-support kets only makes |000> stationary for the product
    // overlap; distinct branches coexist (GHZ also lands on a=b=c=d=1/2).  The
    // canonical representative is the a-maximal one, so every restart runs and
    // the largest a wins; residual breaks near-ties.
    if (!have || out.state.a > best.state.a + 1e-9 ||
        (out.state.a > best.state.a - 1e-9 && out.residual < best.residual)) {
      best = out;
      have = true;
    }
  }
  if (!have)
    throw std::runtime_error("canonical reduction did not converge; state may be degenerate");
  return best;
}

}  // namespace gmnl
