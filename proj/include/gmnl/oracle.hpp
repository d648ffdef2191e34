#pragma once

#include <map>
#include <string>
#include <vector>

#include "gmnl/expression.hpp"
#include "gmnl/polytope.hpp"
#include "gmnl/rational.hpp"

namespace gmnl {

// Exact maximum of `e` over deterministic local strategies (one outcome per
// party and input).  Refuses when the strategy count exceeds `cap`.
Rat local_bound(const BellExpression& e, std::uint64_t cap = 10'000'000);

// In-memory front of the on-disk vertex files keyed by block scenario.
class VertexCache {
 public:
  explicit VertexCache(std::string dir = default_vertex_cache_dir())
      : dir_(std::move(dir)) {}

  // True when the block scenario's extreme points can be produced at all.
  static bool supported(const Scenario& sc);
  const VertexSet& get(const Scenario& sc);
  const std::string& dir() const { return dir_; }

 private:
  std::string dir_;
  std::map<std::array<int, 3>, VertexSet> sets_;
};

struct BoundReport {
  Rat bound = 0;          // exact max over all enumerated hybrid products
  double value = 0.0;     // same as double
  bool attained = false;  // false when nothing could be enumerated
  bool certified = true;  // false when some split lacked vertex data
  std::vector<std::string> uncertified_splits;
  std::uint64_t hybrids_scanned = 0;
};

// Max of `e` over products of block-extremal no-signaling behaviors for one
// fixed partition (blocks as party bitmasks).
Rat max_over_partition(const BellExpression& e, const std::vector<std::uint32_t>& blocks,
                       VertexCache& cache);

// Max over all bipartitions (models with no entanglement across some split).
BoundReport bilocal_bound(const BellExpression& e, VertexCache& cache);

// Max over all partitions into blocks of size <= k (at least two blocks).
BoundReport kproducible_bound(const BellExpression& e, int k, VertexCache& cache);

// Max of each family member over the bipartitions that separate its parties;
// composition requires every such value to be <= 0.
Rat max_member_margin_across_splits(const ExpressionFamily& fam, VertexCache& cache);

}  // namespace gmnl
