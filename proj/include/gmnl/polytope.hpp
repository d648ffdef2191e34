#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gmnl/core.hpp"
#include "gmnl/rational.hpp"

namespace gmnl {

// One extreme point with exact entries num[i]/den, indexed by the canonical
// flat order of its scenario.
struct RationalVertex {
  std::int64_t den = 1;
  std::vector<std::int64_t> num;

  Rat entry(std::uint64_t i) const { return Rat(num[i], den); }
};

struct VertexSet {
  Scenario scenario;
  std::vector<RationalVertex> vertices;
};

// Extreme points of the non-signaling polytope of `sc`, exact and sorted.
// Single-party scenarios enumerate deterministic points directly; multi-party
// scenarios run exact vertex enumeration and are capped at table size 64.
VertexSet ns_polytope_vertices(const Scenario& sc);

// Cache layer: vertex files live under `cache_dir` keyed by scenario.  When
// `regenerate` is set the file is rebuilt even if present.
VertexSet load_or_generate_vertices(const Scenario& sc, const std::string& cache_dir,
                                    bool regenerate = false);
std::string vertex_cache_path(const Scenario& sc, const std::string& cache_dir);
void save_vertex_file(const VertexSet& vs, const std::string& path);
VertexSet load_vertex_file(const std::string& path);

// Default cache directory: $GMNL_VERTEX_CACHE if set, else ./vertex_cache.
std::string default_vertex_cache_dir();

namespace dd {

// Extreme rays of the pointed cone { x in R^dim : row . x >= 0 for all rows }.
// Rows must have full column rank (the cone is then pointed).  Rays come back
// as integer vectors with content 1, deterministic order.
std::vector<std::vector<BigInt>> extreme_rays(const std::vector<std::vector<BigInt>>& rows,
                                              int dim);

}  // namespace dd

}  // namespace gmnl
