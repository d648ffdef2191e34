#pragma once

#include <vector>

#include "gmnl/rational.hpp"

namespace gmnl {

using RatMatrix = std::vector<std::vector<Rat>>;

// Reduced row echelon form in place; returns the pivot columns.
std::vector<int> rref(RatMatrix& m);

// Basis of { v : A v = 0 }, one vector per non-pivot column.
RatMatrix nullspace(const RatMatrix& a);

// Indices of a maximal set of linearly independent rows, greedy in row order.
std::vector<int> independent_rows(const RatMatrix& a, std::size_t want);

// Inverse of a square nonsingular matrix.
RatMatrix rat_inverse(const RatMatrix& a);

}  // namespace gmnl
