#include "gmnl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace gmnl {

namespace {

struct DecodedTerm {
  std::vector<int> a, x;
  std::int64_t coeff = 0;
};

std::vector<DecodedTerm> decode_terms(const BellExpression& e) {
  if (!e.integer_coefficients())
    throw InputError("exact bounds require integer coefficients");
  std::vector<DecodedTerm> out;
  out.reserve(e.terms.size());
  for (const auto& [key, c] : e.terms) {
    DecodedTerm t;
    auto [a, x] = e.scenario.unflatten_index(key);
    t.a = std::move(a);
    t.x = std::move(x);
    t.coeff = static_cast<std::int64_t>(std::llround(c));
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

Rat local_bound(const BellExpression& e, std::uint64_t cap) {
  e.scenario.validate();
  const int n = e.scenario.parties, m = e.scenario.inputs, d = e.scenario.outcomes;
  std::uint64_t per_party = 1, total = 1;
  for (int i = 0; i < m; ++i) per_party *= d;
  for (int k = 0; k < n; ++k) {
    total *= per_party;
    if (total > cap)
      throw InputError("deterministic enumeration exceeds cap of " + std::to_string(cap) +
                       " strategies");
  }
  const std::vector<DecodedTerm> terms = decode_terms(e);

  // strategy[k][x] = outcome of party k on input x, odometer over all tables.
  std::vector<std::vector<int>> strategy(n, std::vector<int>(m, 0));
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  for (std::uint64_t s = 0;; ++s) {
    std::int64_t v = 0;
    for (const DecodedTerm& t : terms) {
      bool hit = true;
      for (int k = 0; k < n; ++k)
        if (strategy[k][t.x[k]] != t.a[k]) {
          hit = false;
          break;
        }
      if (hit) v += t.coeff;
    }
    best = std::max(best, v);
    // Advance the odometer.
    int k = n - 1, x = m - 1;
    for (;;) {
      if (++strategy[k][x] < d) break;
      strategy[k][x] = 0;
      if (--x < 0) {
        x = m - 1;
        if (--k < 0) break;
      }
    }
    if (k < 0) break;
    (void)s;
  }
  return Rat(best);
}

// ---- vertex cache -----------------------------------------------------------

bool VertexCache::supported(const Scenario& sc) {
  if (sc.parties == 1) return sc.table_size() <= 4096;
  return sc.table_size() <= 64;
}

const VertexSet& VertexCache::get(const Scenario& sc) {
  const std::array<int, 3> key{sc.parties, sc.inputs, sc.outcomes};
  auto it = sets_.find(key);
  if (it != sets_.end()) return it->second;
  if (!supported(sc))
    throw InputError("no vertex data for block scenario " + sc.str());
  VertexSet vs = sc.parties == 1 ? ns_polytope_vertices(sc)
                                 : load_or_generate_vertices(sc, dir_);
  return sets_.emplace(key, std::move(vs)).first->second;
}

// ---- hybrid products ----------------------------------------------------------

namespace {

struct BlockPlan {
  std::vector<int> parties;  // ascending global indices
  Scenario scenario;
  const VertexSet* verts = nullptr;
};

// Local flat index of the restriction of (a, x) to the block.
std::uint64_t restrict_index(const BlockPlan& b, const std::vector<int>& a,
                             const std::vector<int>& x) {
  std::vector<int> la, lx;
  la.reserve(b.parties.size());
  lx.reserve(b.parties.size());
  for (int p : b.parties) {
    la.push_back(a[p]);
    lx.push_back(x[p]);
  }
  return b.scenario.index(la, lx);
}

Rat scan_partition(const std::vector<DecodedTerm>& terms, const Scenario& sc,
                   const std::vector<std::uint32_t>& blocks, VertexCache& cache,
                   std::uint64_t* scanned) {
  const std::size_t L = blocks.size();
  std::vector<BlockPlan> plan(L);
  for (std::size_t l = 0; l < L; ++l) {
    for (int p = 0; p < sc.parties; ++p)
      if (blocks[l] & (std::uint32_t(1) << p)) plan[l].parties.push_back(p);
    plan[l].scenario =
        Scenario{static_cast<int>(plan[l].parties.size()), sc.inputs, sc.outcomes};
    plan[l].verts = &cache.get(plan[l].scenario);
  }

  // Per term and block: the local table index to look up.
  std::vector<std::vector<std::uint64_t>> idx(terms.size(), std::vector<std::uint64_t>(L));
  for (std::size_t t = 0; t < terms.size(); ++t)
    for (std::size_t l = 0; l < L; ++l)
      idx[t][l] = restrict_index(plan[l], terms[t].a, terms[t].x);

  std::vector<std::size_t> pick(L, 0);
  bool have = false;
  Rat best = 0;
  for (;;) {
    __int128 den = 1;
    for (std::size_t l = 0; l < L; ++l) den *= plan[l].verts->vertices[pick[l]].den;
    __int128 acc = 0;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      __int128 prod = terms[t].coeff;
      for (std::size_t l = 0; l < L; ++l) {
        prod *= plan[l].verts->vertices[pick[l]].num[idx[t][l]];
        if (prod == 0) break;
      }
      acc += prod;
    }
    if (scanned) ++*scanned;
    const Rat value(BigInt(static_cast<std::int64_t>(acc)),
                    BigInt(static_cast<std::int64_t>(den)));
    if (!have || value > best) {
      best = value;
      have = true;
    }
    // Odometer over vertex choices.
    std::size_t l = 0;
    while (l < L && ++pick[l] == plan[l].verts->vertices.size()) pick[l++] = 0;
    if (l == L) break;
  }
  return best;
}

std::string split_string(const std::vector<std::uint32_t>& blocks) {
  std::string s;
  for (std::uint32_t b : blocks) {
    if (!s.empty()) s += "|";
    for (int p = 0; p < 32; ++p)
      if (b & (std::uint32_t(1) << p)) s += std::to_string(p);
  }
  return s;
}

bool blocks_supported(const Scenario& sc, const std::vector<std::uint32_t>& blocks) {
  for (std::uint32_t b : blocks) {
    const Scenario bs{std::popcount(b), sc.inputs, sc.outcomes};
    if (!VertexCache::supported(bs)) return false;
  }
  return true;
}

}  // namespace

Rat max_over_partition(const BellExpression& e, const std::vector<std::uint32_t>& blocks,
                       VertexCache& cache) {
  Partition part{e.scenario.parties, blocks};
  part.validate();
  const std::vector<DecodedTerm> terms = decode_terms(e);
  return scan_partition(terms, e.scenario, blocks, cache, nullptr);
}

namespace {

BoundReport bound_over_partitions(const BellExpression& e, VertexCache& cache,
                                  const std::vector<std::vector<std::uint32_t>>& parts) {
  const std::vector<DecodedTerm> terms = decode_terms(e);
  BoundReport rep;
  for (const auto& blocks : parts) {
    if (!blocks_supported(e.scenario, blocks)) {
      rep.certified = false;
      rep.uncertified_splits.push_back(split_string(blocks));
      continue;
    }
    const Rat v = scan_partition(terms, e.scenario, blocks, cache, &rep.hybrids_scanned);
    if (!rep.attained || v > rep.bound) {
      rep.bound = v;
      rep.attained = true;
    }
  }
  rep.value = to_double(rep.bound);
  return rep;
}

}  // namespace

BoundReport bilocal_bound(const BellExpression& e, VertexCache& cache) {
  e.scenario.validate();
  if (e.scenario.parties < 2) throw InputError("bilocal bound needs at least 2 parties");
  const std::uint32_t full = (std::uint32_t(1) << e.scenario.parties) - 1;
  std::vector<std::vector<std::uint32_t>> parts;
  for_each_bipartition(e.scenario.parties, [&](std::uint32_t s) {
    parts.push_back({s, full & ~s});
  });
  return bound_over_partitions(e, cache, parts);
}

BoundReport kproducible_bound(const BellExpression& e, int k, VertexCache& cache) {
  e.scenario.validate();
  if (k < 1 || k > e.scenario.parties)
    throw InputError("producibility parameter must lie in [1, parties]");
  std::vector<std::vector<std::uint32_t>> parts;
  for_each_partition(e.scenario.parties, k,
                     [&](const std::vector<std::uint32_t>& blocks) { parts.push_back(blocks); });
  return bound_over_partitions(e, cache, parts);
}

Rat max_member_margin_across_splits(const ExpressionFamily& fam, VertexCache& cache) {
  fam.validate();
  const int n = fam.scenario.parties;
  const std::uint32_t full = (std::uint32_t(1) << n) - 1;
  bool have = false;
  Rat worst = 0;
  for (const FamilyMember& mem : fam.members) {
    std::uint32_t mmask = 0;
    for (int p : mem.parties) mmask |= std::uint32_t(1) << p;
    const std::vector<DecodedTerm> terms = decode_terms(mem.expr);
    for_each_bipartition(n, [&](std::uint32_t s) {
      const bool separates = (mmask & s) != 0 && (mmask & ~s & full) != 0;
      if (!separates) return;
      const std::vector<std::uint32_t> blocks{s, full & ~s};
      if (!blocks_supported(fam.scenario, blocks))
        throw InputError("no vertex data to check split " + split_string(blocks));
      const Rat v = scan_partition(terms, fam.scenario, blocks, cache, nullptr);
      if (!have || v > worst) {
        worst = v;
        have = true;
      }
    });
  }
  return worst;
}

}  // namespace gmnl
