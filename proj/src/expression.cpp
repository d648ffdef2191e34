#include "gmnl/expression.hpp"

#include <algorithm>
#include <cmath>

namespace gmnl {

// ---- partitions -----------------------------------------------------------

void for_each_bipartition(int n, const std::function<void(std::uint32_t)>& f) {
  if (n < 2 || n > 31) throw InputError("bipartition enumeration needs 2 <= parties <= 31");
  const std::uint32_t full = (std::uint32_t(1) << n) - 1;
  // Party 0 stays in the first block so each split appears once.
  for (std::uint32_t rest = 0; rest < (std::uint32_t(1) << (n - 1)); ++rest) {
    const std::uint32_t s = (rest << 1) | 1u;
    if (s == full) continue;
    f(s);
  }
}

namespace {

void partitions_rec(int n, int next, int max_block, std::vector<std::uint32_t>& blocks,
                    const std::function<void(const std::vector<std::uint32_t>&)>& f) {
  if (next == n) {
    if (blocks.size() >= 2) f(blocks);
    return;
  }
  const std::uint32_t bit = std::uint32_t(1) << next;
  // Index loop: recursion below may reallocate `blocks`.
  const std::size_t existing = blocks.size();
  for (std::size_t i = 0; i < existing; ++i) {
    if (std::popcount(blocks[i]) < max_block) {
      blocks[i] |= bit;
      partitions_rec(n, next + 1, max_block, blocks, f);
      blocks[i] &= ~bit;
    }
  }
  blocks.push_back(bit);
  partitions_rec(n, next + 1, max_block, blocks, f);
  blocks.pop_back();
}

}  // namespace

void for_each_partition(int n, int max_block,
                        const std::function<void(const std::vector<std::uint32_t>&)>& f) {
  if (n < 2 || n > 12) throw InputError("partition enumeration needs 2 <= parties <= 12");
  if (max_block < 1) throw InputError("partition block size must be positive");
  std::vector<std::uint32_t> blocks;
  partitions_rec(n, 0, max_block, blocks, f);
}

// ---- BellExpression --------------------------------------------------------

void BellExpression::add_scaled(const BellExpression& other, double scale) {
  if (!(scenario == other.scenario)) throw InputError("scenario mismatch in expression sum");
  for (const auto& [k, c] : other.terms) add_flat(k, scale * c);
}

bool BellExpression::integer_coefficients() const {
  for (const auto& [k, c] : terms)
    if (c != std::nearbyint(c)) return false;
  return true;
}

double evaluate(const BellExpression& e, const Behavior& b) {
  if (!(e.scenario == b.scenario))
    throw InputError("expression scenario " + e.scenario.str() +
                     " does not match behavior scenario " + b.scenario.str());
  double v = 0.0;
  for (const auto& [k, c] : e.terms) v += c * b.p[k];
  return v;
}

double evaluate(const ComposedInequality& q, const Behavior& b) {
  return evaluate(q.lhs, b) - evaluate(q.rhs, b);
}

// ---- seeds -----------------------------------------------------------------

namespace {

void put(BellExpression& e, std::initializer_list<int> a, std::initializer_list<int> x,
         double c) {
  e.add_term(std::vector<int>(a), std::vector<int>(x), c);
}

}  // namespace

BellExpression chsh_seed() {
  BellExpression e(Scenario{2, 2, 2}, "chsh");
  put(e, {0, 0}, {0, 0}, 1);
  put(e, {0, 1}, {0, 1}, -1);
  put(e, {1, 0}, {1, 0}, -1);
  put(e, {0, 0}, {1, 1}, -1);
  e.classical_bound = 0.0;
  return e;
}

BellExpression tri_seed() {
  BellExpression e(Scenario{3, 2, 2}, "tri");
  put(e, {0, 0, 0}, {0, 0, 0}, 1);
  put(e, {0, 1, 0}, {1, 1, 1}, -1);
  put(e, {0, 0, 0}, {0, 1, 1}, -1);
  put(e, {0, 0, 1}, {0, 0, 1}, -1);
  put(e, {1, 0, 0}, {1, 1, 0}, -1);
  put(e, {0, 1, 0}, {0, 1, 0}, -1);
  put(e, {1, 0, 0}, {1, 0, 0}, -1);
  e.classical_bound = 0.0;
  return e;
}

CglmpSeeds cglmp_seeds() {
  CglmpSeeds s;
  s.j3 = BellExpression(Scenario{2, 2, 3}, "j3");
  BellExpression& j = s.j3;
  put(j, {0, 1}, {0, 0}, 1);
  put(j, {0, 0}, {0, 0}, 1);
  put(j, {1, 0}, {0, 0}, 1);
  put(j, {0, 1}, {0, 1}, -1);
  put(j, {0, 2}, {0, 1}, -1);
  put(j, {1, 2}, {0, 1}, -1);
  put(j, {1, 0}, {1, 1}, -1);
  put(j, {2, 0}, {1, 1}, -1);
  put(j, {2, 1}, {1, 1}, -1);
  put(j, {0, 1}, {1, 0}, -1);
  put(j, {0, 0}, {1, 0}, -1);
  put(j, {1, 0}, {1, 0}, -1);
  j.classical_bound = 0.0;

  // Same functional with outcomes 0 and 1 swapped on both parties.
  s.j3_tilde = BellExpression(Scenario{2, 2, 3}, "j3-tilde");
  auto swap01 = [](int a) { return a == 0 ? 1 : (a == 1 ? 0 : a); };
  for (const auto& [key, c] : j.terms) {
    auto [a, x] = j.scenario.unflatten_index(key);
    const int av[] = {swap01(a[0]), swap01(a[1])};
    s.j3_tilde.add_term(av, x, c);
  }
  s.j3_tilde.classical_bound = 0.0;
  return s;
}

// ---- lift / decompose -------------------------------------------------------

BellExpression lift(const BellExpression& seed, int parties, const std::vector<int>& host,
                    const std::vector<LiftFill>& fill) {
  seed.scenario.validate();
  if (static_cast<int>(host.size()) != seed.scenario.parties)
    throw InputError("host list must name one party per seed party");
  if (static_cast<int>(fill.size()) != parties - seed.scenario.parties)
    throw InputError("fill list must cover every non-host party");
  std::vector<bool> is_host(parties, false);
  for (int h : host) {
    if (h < 0 || h >= parties || is_host[h]) throw InputError("host parties invalid");
    is_host[h] = true;
  }
  Scenario target{parties, seed.scenario.inputs, seed.scenario.outcomes};
  for (const LiftFill& fl : fill) {
    if (fl.outcome < 0 || fl.outcome >= target.outcomes || fl.input < 0 ||
        fl.input >= target.inputs)
      throw InputError("fill outcome/input out of range");
  }

  BellExpression out(target, seed.label + "-lift");
  out.classical_bound = seed.classical_bound;
  std::vector<int> a(parties), x(parties);
  for (const auto& [key, c] : seed.terms) {
    auto [sa, sx] = seed.scenario.unflatten_index(key);
    int fi = 0;
    for (int k = 0; k < parties; ++k) {
      if (!is_host[k]) {
        a[k] = fill[fi].outcome;
        x[k] = fill[fi].input;
        ++fi;
      }
    }
    for (int t = 0; t < seed.scenario.parties; ++t) {
      a[host[t]] = sa[t];
      x[host[t]] = sx[t];
    }
    out.add_term(a, x, c);
  }
  return out;
}

BellExpression lift(const BellExpression& seed, int parties, const std::vector<int>& host,
                    const LiftFill& fill_all) {
  return lift(seed, parties, host,
              std::vector<LiftFill>(parties - seed.scenario.parties, fill_all));
}

std::pair<BellExpression, BellExpression> pos_neg_decompose(const BellExpression& e) {
  BellExpression pos(e.scenario, e.label + "+"), neg(e.scenario, e.label + "-");
  for (const auto& [k, c] : e.terms) {
    if (c > 0)
      pos.add_flat(k, c);
    else
      neg.add_flat(k, -c);
  }
  return {pos, neg};
}

// ---- families ----------------------------------------------------------------

void ExpressionFamily::validate() const {
  scenario.validate();
  if (members.empty()) throw InputError("expression family is empty");
  for (const FamilyMember& m : members) {
    if (!(m.expr.scenario == scenario))
      throw InputError("family member scenario mismatch");
    for (int p : m.parties)
      if (p < 0 || p >= scenario.parties) throw InputError("family member party out of range");
  }
}

std::optional<BellExpression> ExpressionFamily::shared_positive_part() const {
  validate();
  BellExpression first = pos_neg_decompose(members[0].expr).first;
  for (std::size_t i = 1; i < members.size(); ++i)
    if (!pos_neg_decompose(members[i].expr).first.same_terms(first)) return std::nullopt;
  return first;
}

BellExpression common_negative_term(const ExpressionFamily& fam) {
  fam.validate();
  BellExpression t = pos_neg_decompose(fam.members[0].expr).second;
  for (std::size_t i = 1; i < fam.members.size() && !t.terms.empty(); ++i) {
    const BellExpression neg = pos_neg_decompose(fam.members[i].expr).second;
    for (auto it = t.terms.begin(); it != t.terms.end();) {
      auto jt = neg.terms.find(it->first);
      if (jt == neg.terms.end()) {
        it = t.terms.erase(it);
      } else {
        it->second = std::min(it->second, jt->second);
        ++it;
      }
    }
  }
  t.label = fam.label + "-common";
  return t;
}

namespace {

std::uint32_t party_mask(const std::vector<int>& parties) {
  std::uint32_t m = 0;
  for (int p : parties) m |= std::uint32_t(1) << p;
  return m;
}

int count_inside(const std::vector<std::uint32_t>& member_masks, std::uint32_t block) {
  int c = 0;
  for (std::uint32_t m : member_masks)
    if ((m & block) == m) ++c;
  return c;
}

}  // namespace

int gamma_exact(const ExpressionFamily& fam, PartitionClass cls, int max_block) {
  fam.validate();
  const int n = fam.scenario.parties;
  if (n > 12) throw InputError("gamma enumeration capped at 12 parties");
  std::vector<std::uint32_t> masks;
  for (const FamilyMember& m : fam.members) masks.push_back(party_mask(m.parties));

  int best = 0;
  if (cls == PartitionClass::bipartitions) {
    const std::uint32_t full = (std::uint32_t(1) << n) - 1;
    for_each_bipartition(n, [&](std::uint32_t s) {
      best = std::max(best, count_inside(masks, s) + count_inside(masks, full & ~s));
    });
  } else {
    if (max_block < 1 || max_block > n) throw InputError("block size must lie in [1, parties]");
    for_each_partition(n, max_block, [&](const std::vector<std::uint32_t>& blocks) {
      int c = 0;
      for (std::uint32_t b : blocks) c += count_inside(masks, b);
      best = std::max(best, c);
    });
  }
  return best;
}

// ---- composition ---------------------------------------------------------------

namespace {

ComposedInequality compose_common(const ExpressionFamily& fam, CompositionKind kind,
                                  int gamma, int depth_k, const std::string& label) {
  auto pos = fam.shared_positive_part();
  if (!pos)
    throw InputError("family members do not share one positive part");

  ComposedInequality q;
  q.scenario = fam.scenario;
  q.kind = kind;
  q.depth_k = depth_k;
  q.gamma = gamma;
  q.label = label;
  q.positive_part = *pos;
  q.common_term = common_negative_term(fam);
  q.lhs = BellExpression(fam.scenario, label + "-lhs");
  for (const FamilyMember& m : fam.members) q.lhs.add_scaled(m.expr, 1.0);
  q.rhs = BellExpression(fam.scenario, label + "-rhs");
  q.rhs.add_scaled(q.positive_part, gamma);
  q.rhs.add_scaled(q.common_term, -gamma);
  return q;
}

}  // namespace

BellExpression ComposedInequality::margin_expression() const {
  BellExpression m(scenario, label + "-margin");
  m.add_scaled(lhs, 1.0);
  m.add_scaled(rhs, -1.0);
  m.classical_bound = 0.0;
  return m;
}

ComposedInequality compose_gmnl(const ExpressionFamily& fam) {
  const int gamma = gamma_exact(fam, PartitionClass::bipartitions);
  return compose_common(fam, CompositionKind::genuine_multipartite, gamma, 0,
                        fam.label + "-gmnl");
}

ComposedInequality compose_depth(const ExpressionFamily& fam, int k) {
  if (k < 1 || k > fam.scenario.parties)
    throw InputError("depth parameter must lie in [1, parties]");
  const int gamma = gamma_exact(fam, PartitionClass::bounded_blocks, k);
  ComposedInequality q =
      compose_common(fam, CompositionKind::producibility_depth, gamma, k,
                     fam.label + "-depth" + std::to_string(k));
  return q;
}

ComposedInequality without_common_term(const ComposedInequality& q) {
  ComposedInequality out = q;
  out.label = q.label + "-plain";
  out.common_term = BellExpression(q.scenario, out.label + "-common");
  out.rhs = BellExpression(q.scenario, out.label + "-rhs");
  out.rhs.add_scaled(q.positive_part, q.gamma);
  return out;
}

// ---- ready-made families ---------------------------------------------------------

ExpressionFamily chsh_star_family(int parties) {
  if (parties < 3) throw InputError("star family needs at least 3 parties");
  ExpressionFamily fam;
  fam.scenario = Scenario{parties, 2, 2};
  fam.label = "chsh-star-n" + std::to_string(parties);
  const BellExpression seed = chsh_seed();
  for (int j = 1; j < parties; ++j) {
    FamilyMember m;
    m.parties = {0, j};
    m.expr = lift(seed, parties, m.parties, LiftFill{0, 0});
    m.expr.label = "chsh-0" + std::to_string(j);
    fam.members.push_back(std::move(m));
  }
  return fam;
}

ExpressionFamily chsh_symmetric_family(int parties) {
  if (parties < 3) throw InputError("symmetric family needs at least 3 parties");
  ExpressionFamily fam;
  fam.scenario = Scenario{parties, 2, 2};
  fam.label = "chsh-sym-n" + std::to_string(parties);
  const BellExpression seed = chsh_seed();
  for (int i = 0; i < parties; ++i) {
    for (int j = i + 1; j < parties; ++j) {
      FamilyMember m;
      m.parties = {i, j};
      m.expr = lift(seed, parties, m.parties, LiftFill{0, 0});
      m.expr.label = "chsh-" + std::to_string(i) + std::to_string(j);
      fam.members.push_back(std::move(m));
    }
  }
  return fam;
}

ExpressionFamily tri_star_family(int parties) {
  if (parties < 4) throw InputError("three-party star family needs at least 4 parties");
  ExpressionFamily fam;
  fam.scenario = Scenario{parties, 2, 2};
  fam.label = "tri-star-n" + std::to_string(parties);
  const BellExpression seed = tri_seed();
  for (int i = 2; i < parties; ++i) {
    FamilyMember m;
    m.parties = {0, 1, i};
    m.expr = lift(seed, parties, m.parties, LiftFill{0, 0});
    m.expr.label = "tri-01" + std::to_string(i);
    fam.members.push_back(std::move(m));
  }
  return fam;
}

ExpressionFamily qutrit_pair_family() {
  ExpressionFamily fam;
  fam.scenario = Scenario{3, 2, 3};
  fam.label = "qutrit-pairs";
  const CglmpSeeds seeds = cglmp_seeds();
  const std::vector<std::vector<int>> pairs = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& pr : pairs) {
    FamilyMember m;
    m.parties = pr;
    m.expr = lift(seeds.j3, 3, pr, LiftFill{1, 0});
    m.expr.add_scaled(lift(seeds.j3_tilde, 3, pr, LiftFill{0, 0}), 1.0);
    m.expr.label = "qutrit-" + std::to_string(pr[0]) + std::to_string(pr[1]);
    fam.members.push_back(std::move(m));
  }
  return fam;
}

QutritInequalities compose_qutrit_tripartite() {
  QutritInequalities out;
  ExpressionFamily fam = qutrit_pair_family();
  fam.label = "qutrit-sym";
  out.symmetric = compose_gmnl(fam);

  ExpressionFamily star = fam;
  star.label = "qutrit-star";
  star.members.erase(star.members.begin() + 2);  // keep {0,1} and {0,2}
  out.star = compose_gmnl(star);
  return out;
}

}  // namespace gmnl
