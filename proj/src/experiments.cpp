#include "gmnl/experiments.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gmnl {

NoiseThresholdResult noise_threshold(const ComposedInequality& ineq, const PureState& psi,
                                     const NoiseThresholdOptions& opt) {
  if (opt.resolution <= 0) throw InputError("threshold resolution must be positive");
  const BellExpression margin = ineq.margin_expression();

  NoiseThresholdResult res;
  res.label = ineq.label;
  res.parties = ineq.scenario.parties;
  res.resolution = opt.resolution;

  auto optimized = [&](double q) {
    const OptimizationResult r = optimize_expression(margin, psi, q, opt.opt);
    res.evaluations += r.evaluations;
    return r.value;
  };

  res.margin_noiseless = optimized(0.0);
  if (res.margin_noiseless <= 0) {
    res.threshold = 0;
    return res;
  }
  double lo = 0, hi = opt.q_high;
  while (hi < 1 && optimized(hi) > 0) hi = std::min(1.0, 2 * hi);
  if (hi >= 1 && optimized(1.0) > 0) {
    res.threshold = 1;
    return res;
  }
  while (hi - lo > opt.resolution) {
    const double mid = 0.5 * (lo + hi);
    (optimized(mid) > 0 ? lo : hi) = mid;
  }
  res.threshold = 0.5 * (lo + hi);
  return res;
}

std::vector<ThresholdComparison> star_threshold_comparison(
    const std::vector<int>& party_counts, const NoiseThresholdOptions& opt) {
  // The noisy GHZ state is invariant under permutations of the non-hub
  // parties, so they share one observable pair; the quoted thresholds for
  // this sweep are defined under that protocol (a free ansatz pushes the
  // plain threshold noticeably higher).
  NoiseThresholdOptions tied = opt;
  tied.opt.tie_parties = true;
  std::vector<ThresholdComparison> out;
  for (int n : party_counts) {
    const ExpressionFamily fam = chsh_star_family(n);
    const ComposedInequality improved = compose_gmnl(fam);
    const ComposedInequality plain = without_common_term(improved);
    const PureState ghz = ghz_state(n, 2);
    ThresholdComparison cmp;
    cmp.parties = n;
    cmp.improved = noise_threshold(improved, ghz, tied);
    cmp.plain = noise_threshold(plain, ghz, tied);
    out.push_back(std::move(cmp));
  }
  return out;
}

// ---- batch certification -------------------------------------------------------

namespace {

// Born-rule values of the six margin terms for the constructed measurements.
std::array<double, 6> born_margin_terms(const CanonicalState& s, double alpha) {
  const MeasurementSet meas = construction_measurements(s, alpha);
  const Behavior b = born_behavior(density_of(s.state_vector()), meas);
  const Scenario sc = meas.scenario();
  auto p = [&](std::initializer_list<int> a, std::initializer_list<int> x) {
    return b.p[sc.index(std::vector<int>(a), std::vector<int>(x))];
  };
  return {p({0, 0, 0}, {0, 0, 0}), p({1, 0, 0}, {1, 0, 0}), p({0, 1, 0}, {0, 1, 0}),
          p({0, 0, 1}, {0, 0, 1}), p({0, 0, 0}, {1, 1, 0}), p({0, 0, 0}, {1, 0, 1})};
}

}  // namespace

CertificationBatchReport certification_batch(int count, std::uint64_t seed, int born_checks) {
  if (count < 1) throw InputError("batch needs at least one state");
  CertificationBatchReport rep;
  rep.count = count;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  const int check_every = born_checks > 0 ? std::max(1, count / born_checks) : count + 1;
  for (int i = 0; i < count; ++i) {
    const CanonicalState s = sample_canonical(rng);
    const double alpha = solve_mixing_angle(s);
    const double margin = closed_form_margin(s, alpha);
    if (i == 0) {
      rep.min_margin = rep.max_margin = margin;
    } else {
      rep.min_margin = std::min(rep.min_margin, margin);
      rep.max_margin = std::max(rep.max_margin, margin);
    }
    rep.mean_margin += margin / count;
    if (margin > 0) ++rep.positive;
    if (born_checks > 0 && i % check_every == 0 && rep.born_checks < born_checks) {
      ++rep.born_checks;
      const std::array<double, 6> closed = margin_term_values(s, alpha);
      const std::array<double, 6> born = born_margin_terms(s, alpha);
      for (int t = 0; t < 6; ++t)
        rep.max_born_gap = std::max(rep.max_born_gap, std::abs(closed[t] - born[t]));
    }
  }
  return rep;
}

double construction_grid_gap(const CanonicalState& s, int alpha_steps, int phase_steps) {
  if (alpha_steps < 1 || phase_steps < 1) throw InputError("grid needs positive step counts");
  double gap = 0;
  for (int ia = 0; ia < alpha_steps; ++ia) {
    // Interior points only: the closed forms are valid at every alpha.
    const double alpha = (ia + 1) * (std::numbers::pi / 2) / (alpha_steps + 1);
    for (int ip = 0; ip < phase_steps; ++ip) {
      CanonicalState sp = s;
      sp.phase = ip * (2 * std::numbers::pi) / phase_steps;
      const std::array<double, 6> closed = margin_term_values(sp, alpha);
      const std::array<double, 6> born = born_margin_terms(sp, alpha);
      for (int t = 0; t < 6; ++t) gap = std::max(gap, std::abs(closed[t] - born[t]));
      double born_margin = born[0];
      for (int t = 1; t < 6; ++t) born_margin -= born[t];
      gap = std::max(gap, std::abs(closed_form_margin(sp, alpha) - born_margin));
    }
  }
  return gap;
}

// ---- qutrit survey --------------------------------------------------------------

namespace {

// Random three-qutrit pure state symmetrized over parties 1 and 2.
PureState random_symmetric_qutrit_state(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  PureState psi;
  psi.subsystems = 3;
  psi.local_dim = 3;
  psi.amplitudes = Vector::Zero(27);
  for (int i = 0; i < 27; ++i) psi.amplitudes[i] = Complex(gauss(rng), gauss(rng));
  Vector sym = Vector::Zero(27);
  for (int a0 = 0; a0 < 3; ++a0)
    for (int a1 = 0; a1 < 3; ++a1)
      for (int a2 = 0; a2 < 3; ++a2)
        sym[a0 * 9 + a1 * 3 + a2] = 0.5 * (psi.amplitudes[a0 * 9 + a1 * 3 + a2] +
                                           psi.amplitudes[a0 * 9 + a2 * 3 + a1]);
  const double norm = sym.norm();
  if (norm < 1e-6) return random_symmetric_qutrit_state(rng);
  psi.amplitudes = sym / norm;
  return psi;
}

}  // namespace

QutritSurveyReport qutrit_survey(int count, std::uint64_t seed, const OptimizationConfig& opt,
                                 double threshold_resolution) {
  QutritSurveyReport rep;
  rep.count = count;
  rep.seed = seed;
  const QutritInequalities ineqs = compose_qutrit_tripartite();

  // The symmetric measurement ansatz (parties 1 and 2 tied) and the free one
  // each win on some states; take the better of the two searches.
  auto best_margin = [](const ComposedInequality& ineq, const PureState& psi,
                        OptimizationConfig cfg) {
    cfg.tie_parties = false;
    const double free_value = optimize_margin(ineq, psi, 0.0, cfg).value;
    cfg.tie_parties = true;
    return std::max(free_value, optimize_margin(ineq, psi, 0.0, cfg).value);
  };

  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const PureState psi = random_symmetric_qutrit_state(rng);
    QutritSurveyRow row;
    row.index = i;
    OptimizationConfig cfg = opt;
    cfg.seed = opt.seed + static_cast<std::uint64_t>(i) * 1000003;
    row.sym_margin = best_margin(ineqs.symmetric, psi, cfg);
    row.star_margin = best_margin(ineqs.star, psi, cfg);
    if (row.sym_margin > 1e-6) ++rep.sym_violations;
    if (row.star_margin > 1e-6) ++rep.star_violations;
    rep.rows.push_back(row);
  }

  const PureState ghz = ghz_state(3, 3);
  rep.ghz_sym_margin = best_margin(ineqs.symmetric, ghz, opt);
  rep.ghz_star_margin = best_margin(ineqs.star, ghz, opt);

  NoiseThresholdOptions topt;
  topt.resolution = threshold_resolution;
  topt.q_high = 0.02;
  topt.opt = opt;
  rep.ghz_star_threshold = noise_threshold(ineqs.star, ghz, topt);
  return rep;
}

// ---- producibility depth demo -----------------------------------------------------

DepthDemoReport depth_demo(int parties, const OptimizationConfig& opt, VertexCache& cache) {
  if (parties < 3) throw InputError("depth demo needs at least 3 parties");
  DepthDemoReport rep;
  rep.parties = parties;
  const ExpressionFamily fam = chsh_star_family(parties);
  const PureState ghz = ghz_state(parties, 2);
  for (int k = 1; k < parties; ++k) {
    const ComposedInequality ineq = compose_depth(fam, k);
    const BellExpression margin = ineq.margin_expression();
    DepthDemoRow row;
    row.k = k;
    const BoundReport bound = kproducible_bound(margin, k, cache);
    row.certified_bound = bound.value;
    row.bound_certified = bound.certified;
    row.optimized_value = optimize_expression(margin, ghz, 0.0, opt).value;
    row.refuted = row.bound_certified && bound.bound <= 0 && row.optimized_value > 1e-7;
    if (row.refuted) rep.certified_depth = k + 1;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace gmnl
