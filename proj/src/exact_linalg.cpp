#include "gmnl/exact_linalg.hpp"

#include <stdexcept>

namespace gmnl {

std::vector<int> rref(RatMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[r], m[pivot]);
    const Rat inv = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  return pivots;
}

RatMatrix nullspace(const RatMatrix& a) {
  if (a.empty()) return {};
  RatMatrix m = a;
  const std::size_t cols = m[0].size();
  const std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;

  RatMatrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rat> v(cols, Rat(0));
    v[free] = 1;
    for (std::size_t pi = 0; pi < pivots.size(); ++pi)
      v[pivots[pi]] = -m[pi][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<int> independent_rows(const RatMatrix& a, std::size_t want) {
  std::vector<int> chosen;
  if (a.empty()) return chosen;
  RatMatrix echelon;  // kept in row echelon form
  const std::size_t cols = a[0].size();
  for (std::size_t i = 0; i < a.size() && chosen.size() < want; ++i) {
    std::vector<Rat> v = a[i];
    for (const auto& row : echelon) {
      std::size_t lead = 0;
      while (lead < cols && row[lead] == 0) ++lead;
      if (lead < cols && v[lead] != 0) {
        const Rat f = v[lead] / row[lead];
        for (std::size_t j = lead; j < cols; ++j) v[j] -= f * row[j];
      }
    }
    bool zero = true;
    for (const Rat& x : v)
      if (x != 0) {
        zero = false;
        break;
      }
    if (zero) continue;
    // Insert keeping rows sorted by leading column.
    std::size_t lead = 0;
    while (lead < cols && v[lead] == 0) ++lead;
    auto it = echelon.begin();
    while (it != echelon.end()) {
      std::size_t l2 = 0;
      while (l2 < cols && (*it)[l2] == 0) ++l2;
      if (l2 > lead) break;
      ++it;
    }
    echelon.insert(it, std::move(v));
    chosen.push_back(static_cast<int>(i));
  }
  return chosen;
}

RatMatrix rat_inverse(const RatMatrix& a) {
  const std::size_t n = a.size();
  RatMatrix m(n, std::vector<Rat>(2 * n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::runtime_error("rat_inverse: matrix not square");
    for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
    m[i][n + i] = 1;
  }
  const std::vector<int> pivots = rref(m);
  if (pivots.size() != n) throw std::runtime_error("rat_inverse: matrix singular");
  RatMatrix inv(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  return inv;
}

}  // namespace gmnl
