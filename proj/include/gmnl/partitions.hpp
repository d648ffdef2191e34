#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include "gmnl/core.hpp"

namespace gmnl {

// Partition of parties {0..n-1} into disjoint nonempty blocks (bitmasks).
struct Partition {
  int parties = 0;
  std::vector<std::uint32_t> blocks;

  void validate() const {
    if (parties < 1 || parties > 31) throw InputError("partition party count out of range");
    std::uint32_t seen = 0;
    for (std::uint32_t b : blocks) {
      if (b == 0) throw InputError("partition has an empty block");
      if (b & seen) throw InputError("partition blocks overlap");
      seen |= b;
    }
    if (seen != (std::uint32_t(1) << parties) - 1)
      throw InputError("partition does not cover all parties");
  }

  int max_block_size() const {
    int mx = 0;
    for (std::uint32_t b : blocks) mx = std::max(mx, std::popcount(b));
    return mx;
  }
};

// Calls f(mask) for every bipartition of {0..n-1}; mask is the block holding
// party 0, the complement is implied.
void for_each_bipartition(int n, const std::function<void(std::uint32_t)>& f);

// Calls f(blocks) for every partition into at least two blocks, each of size
// at most max_block.  Blocks arrive sorted by their lowest member.
void for_each_partition(int n, int max_block,
                        const std::function<void(const std::vector<std::uint32_t>&)>& f);

}  // namespace gmnl
