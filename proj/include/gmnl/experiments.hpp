#pragma once

#include <string>
#include <vector>

#include "gmnl/canonical.hpp"
#include "gmnl/expression.hpp"
#include "gmnl/optimize.hpp"
#include "gmnl/oracle.hpp"

namespace gmnl {

// ---- white-noise robustness -------------------------------------------------

struct NoiseThresholdOptions {
  double resolution = 1e-3;  // final bracket width on q
  double q_high = 0.5;       // initial upper bracket; grown if still violated
  OptimizationConfig opt;
};

struct NoiseThresholdResult {
  std::string label;
  int parties = 0;
  double threshold = 0;  // midpoint of the final bracket; 0 when never violated
  double resolution = 0;
  double margin_noiseless = 0;  // optimized margin at q = 0
  std::uint64_t evaluations = 0;
};

// Largest white-noise weight q at which the optimized margin of `ineq` on
// (1-q)|psi><psi| + q I/dim stays positive, located by bisection.
NoiseThresholdResult noise_threshold(const ComposedInequality& ineq, const PureState& psi,
                                     const NoiseThresholdOptions& opt);

// Improved (common term subtracted) versus plain composition of the two-party
// star family on the n-qubit GHZ state, for each requested n.
struct ThresholdComparison {
  int parties = 0;
  NoiseThresholdResult improved;
  NoiseThresholdResult plain;
};

std::vector<ThresholdComparison> star_threshold_comparison(
    const std::vector<int>& party_counts, const NoiseThresholdOptions& opt);

// ---- batch certification of canonical states ---------------------------------

// Samples canonical three-qubit states, solves the mixing angle and records
// the closed-form margin of the tripartite star composition; a positive
// margin certifies genuine tripartite nonlocality of the state.  For
// `born_checks` of the states the closed forms are also checked against the
// Born rule on the constructed measurements.
struct CertificationBatchReport {
  int count = 0;
  std::uint64_t seed = 0;
  int positive = 0;
  double min_margin = 0, max_margin = 0, mean_margin = 0;
  int born_checks = 0;
  double max_born_gap = 0;
};

CertificationBatchReport certification_batch(int count, std::uint64_t seed,
                                             int born_checks = 5);

// Max |closed form - Born| over the six margin terms and the margin itself,
// on a grid of mixing angles alpha in (0, pi/2) x phases in [0, 2pi).
double construction_grid_gap(const CanonicalState& s, int alpha_steps, int phase_steps);

// ---- three-qutrit survey ------------------------------------------------------

struct QutritSurveyRow {
  int index = 0;
  double sym_margin = 0;   // optimized margin of the three-member composition
  double star_margin = 0;  // optimized margin of the two-member composition
};

struct QutritSurveyReport {
  int count = 0;
  std::uint64_t seed = 0;
  int sym_violations = 0, star_violations = 0;
  double ghz_sym_margin = 0, ghz_star_margin = 0;
  NoiseThresholdResult ghz_star_threshold;  // fine-resolution robustness of the star
  std::vector<QutritSurveyRow> rows;
};

// Random three-qutrit pure states (Gaussian amplitudes symmetrized over the
// two non-hub parties), optimized against both composed qutrit inequalities,
// plus the GHZ values and the star noise threshold.
QutritSurveyReport qutrit_survey(int count, std::uint64_t seed, const OptimizationConfig& opt,
                                 double threshold_resolution = 1e-5);

// ---- producibility depth demo -------------------------------------------------

// For each depth k: the certified k-producible bound of the star-composition
// margin next to the optimized GHZ value; a positive value above a certified
// nonpositive bound refutes k-producibility, i.e. witnesses depth >= k+1.
struct DepthDemoRow {
  int k = 0;
  double certified_bound = 0;
  bool bound_certified = false;
  double optimized_value = 0;
  bool refuted = false;
};

struct DepthDemoReport {
  int parties = 0;
  std::vector<DepthDemoRow> rows;
  int certified_depth = 1;
};

DepthDemoReport depth_demo(int parties, const OptimizationConfig& opt, VertexCache& cache);

}  // namespace gmnl
