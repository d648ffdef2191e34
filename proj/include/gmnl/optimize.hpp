#pragma once

#include <cstdint>

#include "gmnl/expression.hpp"
#include "gmnl/quantum.hpp"

namespace gmnl {

struct OptimizationConfig {
  int restarts = 50;
  int max_iterations = 600;  // simplex iterations per restart
  std::uint64_t seed = 1;
  // Share one parameter block across parties 1..n-1 (party 0 stays free);
  // cuts the dimension for states and expressions symmetric in those parties.
  bool tie_parties = false;
};

struct OptimizationResult {
  double value = 0;  // best expression value found (maximization)
  MeasurementSet measurements;
  int best_restart = -1;
  std::uint64_t evaluations = 0;
};

// Maximizes expr over local projective measurements of psi mixed with white
// noise: (1-q)|psi><psi| + (q/dim) I.  The noisy value is the pure-state
// value mixed analytically with the uniform-behavior value, so the inner
// loop only contracts psi.  local_dim must be 2 or 3.
OptimizationResult optimize_expression(const BellExpression& expr, const PureState& psi,
                                       double q, const OptimizationConfig& cfg = {});

// Same over the margin lhs - rhs of a composed inequality.
OptimizationResult optimize_margin(const ComposedInequality& ineq, const PureState& psi,
                                   double q, const OptimizationConfig& cfg = {});

// Expression value for fixed measurements on the noisy state; same fast path
// as the optimizer uses.
double noisy_expression_value(const BellExpression& expr, const PureState& psi,
                              const MeasurementSet& meas, double q);

}  // namespace gmnl
