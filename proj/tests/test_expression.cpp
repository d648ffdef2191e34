#include <doctest.h>

#include <random>

#include "gmnl/expression.hpp"

using namespace gmnl;

namespace {

BellExpression random_expression(std::mt19937_64& rng, const Scenario& sc, int terms) {
  std::uniform_int_distribution<std::uint64_t> key(0, sc.table_size() - 1);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  BellExpression e(sc, "random");
  for (int t = 0; t < terms; ++t) e.add_flat(key(rng), coeff(rng));
  return e;
}

int binom2(int n) { return n * (n - 1) / 2; }

}  // namespace

TEST_CASE("two-party seed has the four unit terms and bound 0") {
  const BellExpression e = chsh_seed();
  CHECK(e.terms.size() == 4);
  CHECK(e.integer_coefficients());
  CHECK(e.classical_bound == 0.0);
  const int a00[] = {0, 0}, a01[] = {0, 1}, a10[] = {1, 0};
  const int x00[] = {0, 0}, x01[] = {0, 1}, x10[] = {1, 0}, x11[] = {1, 1};
  CHECK(e.coeff(a00, x00) == 1.0);
  CHECK(e.coeff(a01, x01) == -1.0);
  CHECK(e.coeff(a10, x10) == -1.0);
  CHECK(e.coeff(a00, x11) == -1.0);
  CHECK(e.coeff(a01, x00) == 0.0);
}

TEST_CASE("three-party seed shape") {
  const BellExpression e = tri_seed();
  CHECK(e.terms.size() == 7);
  int pos = 0, neg = 0;
  for (const auto& [k, c] : e.terms) (c > 0 ? pos : neg) += 1;
  CHECK(pos == 1);
  CHECK(neg == 6);
  const int a0[] = {0, 0, 0}, x0[] = {0, 0, 0};
  CHECK(e.coeff(a0, x0) == 1.0);
}

TEST_CASE("three-outcome seed pair is an outcome relabeling") {
  const CglmpSeeds s = cglmp_seeds();
  CHECK(s.j3.terms.size() == 12);
  CHECK(s.j3_tilde.terms.size() == 12);
  CHECK(s.j3.classical_bound == 0.0);
  CHECK(s.j3_tilde.classical_bound == 0.0);

  // Swapping outcomes 0 and 1 on both parties maps one onto the other.
  auto swap01 = [](int a) { return a == 0 ? 1 : (a == 1 ? 0 : a); };
  BellExpression mapped(s.j3_tilde.scenario, "mapped");
  for (const auto& [key, c] : s.j3.terms) {
    auto [a, x] = s.j3.scenario.unflatten_index(key);
    const int av[] = {swap01(a[0]), swap01(a[1])};
    mapped.add_term(av, x, c);
  }
  CHECK(mapped.same_terms(s.j3_tilde));
  CHECK_FALSE(s.j3.same_terms(s.j3_tilde));
}

TEST_CASE("add_flat cancels exact zeros") {
  BellExpression e(Scenario{2, 2, 2});
  e.add_flat(3, 1.5);
  e.add_flat(3, -1.5);
  CHECK(e.terms.empty());
}

TEST_CASE("lifting preserves term count and coefficients") {
  const BellExpression seed = chsh_seed();
  const BellExpression up = lift(seed, 3, {0, 1}, LiftFill{0, 0});
  CHECK(up.scenario == Scenario{3, 2, 2});
  CHECK(up.terms.size() == seed.terms.size());

  const int a000[] = {0, 0, 0}, a010[] = {0, 1, 0}, a100[] = {1, 0, 0};
  const int x000[] = {0, 0, 0}, x010[] = {0, 1, 0}, x100[] = {1, 0, 0}, x110[] = {1, 1, 0};
  CHECK(up.coeff(a000, x000) == 1.0);
  CHECK(up.coeff(a010, x010) == -1.0);
  CHECK(up.coeff(a100, x100) == -1.0);
  CHECK(up.coeff(a000, x110) == -1.0);

  // Host order matters: seed party 0 may land on any target party.
  const BellExpression swapped = lift(seed, 3, {2, 0}, LiftFill{0, 0});
  const int a001[] = {0, 0, 1}, x001[] = {0, 0, 1};
  CHECK(swapped.coeff(a100, x100) == -1.0);   // seed p(01|01): party 2 hosts seed party 0
  CHECK(swapped.coeff(a001, x001) == -1.0);   // seed p(10|10)
  CHECK(swapped.terms.size() == 4);
}

TEST_CASE("lifting with a nonzero pin moves the spectator support") {
  const BellExpression up = lift(chsh_seed(), 3, {0, 2}, LiftFill{1, 1});
  const int a010[] = {0, 1, 0}, x010[] = {0, 1, 0};
  CHECK(up.coeff(a010, x010) == 1.0);  // seed p(00|00), spectator pinned to (1|1)
  CHECK(up.terms.size() == 4);
}

TEST_CASE("lift argument validation") {
  const BellExpression seed = chsh_seed();
  CHECK_THROWS_AS(lift(seed, 3, {0}, LiftFill{0, 0}), InputError);
  CHECK_THROWS_AS(lift(seed, 3, {0, 0}, LiftFill{0, 0}), InputError);
  CHECK_THROWS_AS(lift(seed, 3, {0, 3}, LiftFill{0, 0}), InputError);
  CHECK_THROWS_AS(lift(seed, 3, {0, 1}, LiftFill{2, 0}), InputError);
}

TEST_CASE("positive/negative split reassembles the expression") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 20; ++round) {
    const BellExpression e = random_expression(rng, Scenario{2, 2, 2}, 10);
    auto [pos, neg] = pos_neg_decompose(e);
    for (const auto& [k, c] : pos.terms) CHECK(c > 0);
    for (const auto& [k, c] : neg.terms) CHECK(c > 0);
    BellExpression back = pos;
    back.add_scaled(neg, -1.0);
    CHECK(back.same_terms(e));
  }
}

TEST_CASE("star family stitches pairs through the hub") {
  const ExpressionFamily fam = chsh_star_family(4);
  CHECK_NOTHROW(fam.validate());
  REQUIRE(fam.members.size() == 3);
  CHECK(fam.members[0].parties == std::vector<int>{0, 1});
  CHECK(fam.members[2].parties == std::vector<int>{0, 3});

  const auto shared = fam.shared_positive_part();
  REQUIRE(shared.has_value());
  CHECK(shared->terms.size() == 1);
  const int a[] = {0, 0, 0, 0}, x[] = {0, 0, 0, 0};
  CHECK(shared->coeff(a, x) == 1.0);
}

TEST_CASE("common negative term of the star family is the hub flip") {
  const ExpressionFamily fam = chsh_star_family(3);
  const BellExpression t = common_negative_term(fam);
  REQUIRE(t.terms.size() == 1);
  const int a[] = {1, 0, 0}, x[] = {1, 0, 0};
  CHECK(t.coeff(a, x) == 1.0);

  // The all-pairs family shares no negative term.
  CHECK(common_negative_term(chsh_symmetric_family(3)).terms.empty());
}

TEST_CASE("bipartition coefficients match the closed forms up to eight parties") {
  for (int n = 3; n <= 8; ++n) {
    CHECK(gamma_exact(chsh_star_family(n), PartitionClass::bipartitions) == n - 2);
    CHECK(gamma_exact(chsh_symmetric_family(n), PartitionClass::bipartitions) == binom2(n - 1));
  }
}

TEST_CASE("bounded-block coefficients, including the n=5 k=3 formula mismatch") {
  // Star: the hub's block holds at most k parties, so k-1 members.
  for (int n = 3; n <= 6; ++n)
    for (int k = 2; k < n; ++k)
      CHECK(gamma_exact(chsh_star_family(n), PartitionClass::bounded_blocks, k) == k - 1);

  CHECK(gamma_exact(chsh_symmetric_family(4), PartitionClass::bounded_blocks, 2) == 2);

  // All-pairs at n=5, k=3: the floor/remainder formula printed alongside this
  // family overcounts; exhaustive enumeration gives 4, the formula 5.
  const int n = 5, k = 3, rem = n % k;
  const int formula = (n / k) * binom2(k) + rem * binom2(rem);
  CHECK(formula == 5);
  CHECK(gamma_exact(chsh_symmetric_family(5), PartitionClass::bounded_blocks, 3) == 4);
}

TEST_CASE("genuine-multipartite composition of the three-party star") {
  const ComposedInequality q = compose_gmnl(chsh_star_family(3));
  CHECK(q.kind == CompositionKind::genuine_multipartite);
  CHECK(q.gamma == 1);

  // rhs = p(000|000) - p(100|100)
  const int a0[] = {0, 0, 0}, a1[] = {1, 0, 0}, x0[] = {0, 0, 0}, x1[] = {1, 0, 0};
  CHECK(q.rhs.terms.size() == 2);
  CHECK(q.rhs.coeff(a0, x0) == 1.0);
  CHECK(q.rhs.coeff(a1, x1) == -1.0);

  // The margin collapses to six unit terms.
  BellExpression want(q.scenario);
  auto add = [&want](std::initializer_list<int> a, std::initializer_list<int> x, double c) {
    want.add_term(std::vector<int>(a), std::vector<int>(x), c);
  };
  add({0, 0, 0}, {0, 0, 0}, 1);
  add({1, 0, 0}, {1, 0, 0}, -1);
  add({0, 1, 0}, {0, 1, 0}, -1);
  add({0, 0, 1}, {0, 0, 1}, -1);
  add({0, 0, 0}, {1, 1, 0}, -1);
  add({0, 0, 0}, {1, 0, 1}, -1);
  CHECK(q.margin_expression().same_terms(want));
}

TEST_CASE("all-pairs composition keeps the bare positive bound") {
  const ComposedInequality q = compose_gmnl(chsh_symmetric_family(3));
  CHECK(q.gamma == 1);
  CHECK(q.common_term.terms.empty());
  CHECK(q.rhs.terms.size() == 1);

  const ComposedInequality q4 = compose_gmnl(chsh_symmetric_family(4));
  CHECK(q4.gamma == 3);
  const int a[] = {0, 0, 0, 0}, x[] = {0, 0, 0, 0};
  CHECK(q4.rhs.coeff(a, x) == 3.0);
}

TEST_CASE("depth composition with maximal block size reduces to the bipartition bound") {
  for (int n = 3; n <= 5; ++n) {
    const ComposedInequality gm = compose_gmnl(chsh_star_family(n));
    const ComposedInequality dk = compose_depth(chsh_star_family(n), n);
    CHECK(dk.kind == CompositionKind::producibility_depth);
    CHECK(dk.gamma == gm.gamma);
    CHECK(dk.rhs.same_terms(gm.rhs));
  }
  CHECK_THROWS_AS(compose_depth(chsh_star_family(3), 0), InputError);
  CHECK_THROWS_AS(compose_depth(chsh_star_family(3), 4), InputError);
}

TEST_CASE("dropping the common term weakens the bound by gamma times it") {
  const ComposedInequality q = compose_gmnl(chsh_star_family(4));
  const ComposedInequality plain = without_common_term(q);
  CHECK(plain.common_term.terms.empty());
  CHECK(plain.gamma == q.gamma);
  CHECK(plain.lhs.same_terms(q.lhs));

  BellExpression diff = q.margin_expression();
  diff.add_scaled(plain.margin_expression(), -1.0);
  BellExpression want(q.scenario);
  want.add_scaled(q.common_term, q.gamma);
  CHECK(diff.same_terms(want));
}

TEST_CASE("three-outcome tripartite compositions have the printed structure") {
  const QutritInequalities ineqs = compose_qutrit_tripartite();

  // Shared positive part: the six mixed patterns of outcomes {0,1} at inputs 0.
  const std::vector<std::vector<int>> plus = {{0, 0, 1}, {0, 1, 0}, {0, 1, 1},
                                              {1, 0, 0}, {1, 0, 1}, {1, 1, 0}};
  for (const ComposedInequality* q : {&ineqs.symmetric, &ineqs.star}) {
    CHECK(q->gamma == 1);
    CHECK(q->positive_part.terms.size() == 6);
    for (const auto& a : plus) {
      const int x[] = {0, 0, 0};
      CHECK(q->positive_part.coeff(a, x) == 1.0);
    }
  }

  // Two-member composition: the same outcome patterns, hub input flipped.
  CHECK(ineqs.star.common_term.terms.size() == 6);
  for (const auto& a : plus) {
    const int x[] = {1, 0, 0};
    CHECK(ineqs.star.common_term.coeff(a, x) == 1.0);
  }

  // Three-member composition: no common term survives.
  CHECK(ineqs.symmetric.common_term.terms.empty());
  CHECK(ineqs.symmetric.lhs.integer_coefficients());
  CHECK(ineqs.star.lhs.integer_coefficients());
}

TEST_CASE("composition rejects families without a shared positive part") {
  ExpressionFamily fam = chsh_star_family(3);
  fam.members[1].expr = lift(chsh_seed(), 3, {0, 2}, LiftFill{1, 1});
  CHECK_THROWS_AS(compose_gmnl(fam), InputError);
}

TEST_CASE("partition enumeration covers the classic counts") {
  int bips = 0;
  for_each_bipartition(4, [&](std::uint32_t) { ++bips; });
  CHECK(bips == 7);  // 2^(4-1) - 1

  int parts = 0;
  for_each_partition(4, 4, [&](const std::vector<std::uint32_t>&) { ++parts; });
  CHECK(parts == 14);  // Bell(4) minus the single-block partition

  int pairs_only = 0;
  for_each_partition(4, 2, [&](const std::vector<std::uint32_t>& blocks) {
    ++pairs_only;
    for (std::uint32_t b : blocks) CHECK(std::popcount(b) <= 2);
  });
  CHECK(pairs_only == 10);
}
