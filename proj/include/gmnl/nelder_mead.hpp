#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace gmnl {

struct NelderMeadOptions {
  int max_iterations = 600;
  double initial_step = 0.4;
  double f_spread_tolerance = 1e-12;  // stop when the simplex values collapse
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0;
  int iterations = 0;
  std::uint64_t evaluations = 0;
};

// Downhill simplex minimization with the dimension-adaptive expansion and
// contraction coefficients.  Fully deterministic for a deterministic f.
inline NelderMeadResult nelder_mead_minimize(
    const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
    const NelderMeadOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  NelderMeadResult res;
  if (n == 0) {
    res.x = std::move(x0);
    res.value = f(res.x);
    res.evaluations = 1;
    return res;
  }
  const double alpha = 1.0;
  const double beta = 1.0 + 2.0 / n;
  const double gamma = 0.75 - 0.5 / n;
  const double delta = 1.0 - 1.0 / n;

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (int i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_step;
  std::vector<double> value(n + 1);
  for (int i = 0; i <= n; ++i) value[i] = f(simplex[i]);
  res.evaluations = n + 1;

  std::vector<int> order(n + 1);
  std::vector<double> centroid(n), cand(n);
  for (res.iterations = 0; res.iterations < opt.max_iterations; ++res.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return value[a] < value[b]; });
    const int lo = order[0], hi = order[n], second_hi = order[n - 1];
    if (value[hi] - value[lo] <= opt.f_spread_tolerance) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i <= n; ++i)
      if (i != hi)
        for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

    auto blend = [&](double t) {
      for (int j = 0; j < n; ++j) cand[j] = centroid[j] + t * (centroid[j] - simplex[hi][j]);
      ++res.evaluations;
      return f(cand);
    };

    const double fr = blend(alpha);  // reflection
    if (fr < value[lo]) {
      const std::vector<double> xr = cand;
      const double fe = blend(beta);  // expansion
      if (fe < fr) {
        simplex[hi] = cand;
        value[hi] = fe;
      } else {
        simplex[hi] = xr;
        value[hi] = fr;
      }
    } else if (fr < value[second_hi]) {
      simplex[hi] = cand;
      value[hi] = fr;
    } else {
      const bool outside = fr < value[hi];
      if (outside) {
        const std::vector<double> xr = cand;
        const double fc = blend(alpha * gamma);
        if (fc <= fr) {
          simplex[hi] = cand;
          value[hi] = fc;
        } else {
          simplex[hi] = xr;
          value[hi] = fr;
        }
      } else {
        const double fc = blend(-gamma);
        if (fc < value[hi]) {
          simplex[hi] = cand;
          value[hi] = fc;
        } else {
          // Shrink toward the best point.
          for (int i = 0; i <= n; ++i) {
            if (i == lo) continue;
            for (int j = 0; j < n; ++j)
              simplex[i][j] = simplex[lo][j] + delta * (simplex[i][j] - simplex[lo][j]);
            value[i] = f(simplex[i]);
          }
          res.evaluations += n;
        }
      }
    }
  }

  const int best =
      static_cast<int>(std::min_element(value.begin(), value.end()) - value.begin());
  res.x = simplex[best];
  res.value = value[best];
  return res;
}

}  // namespace gmnl
