#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmnl/behavior.hpp"
#include "gmnl/core.hpp"
#include "gmnl/partitions.hpp"

namespace gmnl {

// Sparse linear functional over behaviors: sum of coeff * p(a|x).  Terms are
// keyed by the canonical flat index of (a, x), so expressions evaluate by
// direct lookup into Behavior::p.
struct BellExpression {
  Scenario scenario;
  std::string label;
  std::map<std::uint64_t, double> terms;
  // Known classical (local) bound, when the construction guarantees one.
  std::optional<double> classical_bound;

  BellExpression() = default;
  explicit BellExpression(const Scenario& sc, std::string lbl = "")
      : scenario(sc), label(std::move(lbl)) {}

  double coeff(std::span<const int> a, std::span<const int> x) const {
    auto it = terms.find(scenario.index(a, x));
    return it == terms.end() ? 0.0 : it->second;
  }
  // Adds c to the coefficient of p(a|x); drops the term if it cancels.
  void add_term(std::span<const int> a, std::span<const int> x, double c) {
    add_flat(scenario.index(a, x), c);
  }
  void add_flat(std::uint64_t key, double c) {
    auto [it, inserted] = terms.try_emplace(key, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) terms.erase(it);
    }
  }
  void add_scaled(const BellExpression& other, double scale);
  bool same_terms(const BellExpression& other) const {
    return scenario == other.scenario && terms == other.terms;
  }
  bool integer_coefficients() const;
};

double evaluate(const BellExpression& e, const Behavior& b);

// ---- seeds -------------------------------------------------------------

// Two-party binary seed p(00|00) - p(01|01) - p(10|10) - p(00|11) <= 0.
BellExpression chsh_seed();

// Three-party binary seed with one positive and six negative unit terms,
// local bound 0.
BellExpression tri_seed();

// Two-party three-outcome seed pair (J, Jt); Jt is J with outcomes 0 and 1
// swapped on both parties.  Both have local bound 0.
struct CglmpSeeds {
  BellExpression j3;
  BellExpression j3_tilde;
};
CglmpSeeds cglmp_seeds();

// ---- lifting and decomposition ------------------------------------------

struct LiftFill {
  int outcome = 0;
  int input = 0;
};

// Embeds `seed` into an n-party scenario: seed party t acts as host[t]; every
// non-host party is pinned to fill[j] (its outcome given its input), in
// increasing party order.  Coefficients carry over unchanged.
BellExpression lift(const BellExpression& seed, int parties,
                    const std::vector<int>& host, const std::vector<LiftFill>& fill);
BellExpression lift(const BellExpression& seed, int parties,
                    const std::vector<int>& host, const LiftFill& fill_all);

// Splits into (positive part, negative part); the negative part holds the
// absolute values, so e == pos - neg termwise.
std::pair<BellExpression, BellExpression> pos_neg_decompose(const BellExpression& e);

// ---- families and composition -------------------------------------------

struct FamilyMember {
  std::vector<int> parties;  // the parties this member acts on nontrivially
  BellExpression expr;
};

struct ExpressionFamily {
  Scenario scenario;
  std::string label;
  std::vector<FamilyMember> members;

  void validate() const;
  // True when all members share one positive part (returned when equal).
  std::optional<BellExpression> shared_positive_part() const;
};

// Entrywise minimum of the members' negative parts: the largest expression T
// with nonnegative coefficients such that T <= neg(member) for every member.
BellExpression common_negative_term(const ExpressionFamily& fam);

enum class PartitionClass {
  bipartitions,     // two blocks, any sizes
  bounded_blocks,   // >= 2 blocks, each of size <= k
};

// Largest number of family members fully contained inside a single block,
// maximized over the partition class.  Exact enumeration; parties <= 12.
int gamma_exact(const ExpressionFamily& fam, PartitionClass cls, int max_block = 0);

enum class CompositionKind { genuine_multipartite, producibility_depth };

// Sum of family members bounded by gamma * (positive part - common term).
struct ComposedInequality {
  Scenario scenario;
  std::string label;
  CompositionKind kind = CompositionKind::genuine_multipartite;
  int depth_k = 0;  // meaningful for producibility_depth
  int gamma = 0;
  BellExpression lhs;            // sum over members
  BellExpression positive_part;  // shared positive part of every member
  BellExpression common_term;    // common negative term T (may be empty)
  BellExpression rhs;            // gamma * (positive_part - common_term)

  // lhs - rhs; violation means a positive value.
  BellExpression margin_expression() const;
};

double evaluate(const ComposedInequality& q, const Behavior& b);

// Requires every member to obey its own bound across separating splits
// (caller attested, or checked via the classical oracle for small n) and all
// members to share one positive part.  gamma runs over bipartitions.
ComposedInequality compose_gmnl(const ExpressionFamily& fam);

// Same with gamma over partitions into blocks of size <= k; 1 <= k <= n.
ComposedInequality compose_depth(const ExpressionFamily& fam, int k);

// Drops the common term from the bound (the weaker, unimproved inequality).
ComposedInequality without_common_term(const ComposedInequality& q);

// ---- ready-made families -------------------------------------------------

// Star of two-party seeds: members {0, j} for j = 1..n-1, others pinned to
// outcome 0 of input 0.
ExpressionFamily chsh_star_family(int parties);
// All pairs {i, j}.
ExpressionFamily chsh_symmetric_family(int parties);
// Star of three-party seeds: members {0, 1, i} for i = 2..n-1.
ExpressionFamily tri_star_family(int parties);

// Three-party three-outcome members I^{ij} = J^{ij}(outcome 1 of input 0)
// + Jt^{ij}(outcome 0 of input 0) for the pairs {0,1}, {0,2}, {1,2}.
ExpressionFamily qutrit_pair_family();

struct QutritInequalities {
  ComposedInequality symmetric;  // members {01},{02},{12}; empty common term
  ComposedInequality star;       // members {01},{02}; six-term common term
};
QutritInequalities compose_qutrit_tripartite();

}  // namespace gmnl
