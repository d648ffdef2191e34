#include "gmnl/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "gmnl/exact_linalg.hpp"

namespace gmnl {

namespace dd {

namespace {

// Tight-constraint set of a ray, one bit per processed row (up to 128).
using Mask = std::array<std::uint64_t, 2>;

inline void set_bit(Mask& m, int i) { m[i >> 6] |= std::uint64_t(1) << (i & 63); }
inline Mask mask_and(const Mask& a, const Mask& b) { return {a[0] & b[0], a[1] & b[1]}; }
inline bool mask_subset(const Mask& sub, const Mask& sup) {
  return (sub[0] & ~sup[0]) == 0 && (sub[1] & ~sup[1]) == 0;
}
inline int mask_count(const Mask& m) {
  return std::popcount(m[0]) + std::popcount(m[1]);
}

struct Ray {
  std::vector<BigInt> x;
  Mask tight{0, 0};
};

void normalize(std::vector<BigInt>& v) {
  BigInt g = 0;
  for (const BigInt& c : v) g = boost::multiprecision::gcd(g, c);
  if (g > 1)
    for (BigInt& c : v) c /= g;
}

BigInt dot(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<std::vector<BigInt>> extreme_rays(const std::vector<std::vector<BigInt>>& rows,
                                              int dim) {
  if (rows.size() > 128) throw InputError("cone enumeration supports at most 128 rows");
  const int nrows = static_cast<int>(rows.size());

  // Initial simplicial cone from `dim` independent rows: with B the chosen
  // row block, the rays are the columns of B^{-1} (ray j is tight on every
  // chosen row but j).
  RatMatrix rat_rows(nrows, std::vector<Rat>(dim));
  for (int i = 0; i < nrows; ++i)
    for (int j = 0; j < dim; ++j) rat_rows[i][j] = Rat(rows[i][j]);
  const std::vector<int> base = independent_rows(rat_rows, dim);
  if (static_cast<int>(base.size()) != dim)
    throw std::runtime_error("cone rows do not have full rank; cone not pointed");

  RatMatrix b(dim, std::vector<Rat>(dim));
  for (int i = 0; i < dim; ++i) b[i] = rat_rows[base[i]];
  const RatMatrix binv = rat_inverse(b);

  std::vector<Ray> rays(dim);
  for (int j = 0; j < dim; ++j) {
    // Column j of B^{-1}, cleared to integers.
    BigInt lcm = 1;
    for (int i = 0; i < dim; ++i)
      lcm = boost::multiprecision::lcm(lcm, denominator(binv[i][j]));
    rays[j].x.resize(dim);
    for (int i = 0; i < dim; ++i)
      rays[j].x[i] = BigInt(numerator(binv[i][j]) * (lcm / denominator(binv[i][j])));
    normalize(rays[j].x);
    for (int i = 0; i < dim; ++i)
      if (i != j) set_bit(rays[j].tight, base[i]);
  }

  std::vector<bool> processed(nrows, false);
  for (int i : base) processed[i] = true;

  for (int ci = 0; ci < nrows; ++ci) {
    if (processed[ci]) continue;
    processed[ci] = true;

    std::vector<BigInt> sigma(rays.size());
    std::vector<int> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      sigma[r] = dot(rows[ci], rays[r].x);
      const int s = sigma[r].sign();
      if (s > 0)
        pos.push_back(static_cast<int>(r));
      else if (s < 0)
        neg.push_back(static_cast<int>(r));
      else
        zero.push_back(static_cast<int>(r));
    }
    for (int r : zero) set_bit(rays[r].tight, ci);
    if (neg.empty()) continue;

    // Adjacent (kept, cut) pairs spawn the rays of the new facet.
    std::vector<Ray> born;
    for (int p : pos) {
      for (int m : neg) {
        const Mask z = mask_and(rays[p].tight, rays[m].tight);
        if (mask_count(z) < dim - 2) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size(); ++r) {
          if (static_cast<int>(r) == p || static_cast<int>(r) == m) continue;
          if (mask_subset(z, rays[r].tight)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        Ray nr;
        nr.x.resize(dim);
        for (int j = 0; j < dim; ++j)
          nr.x[j] = sigma[p] * rays[m].x[j] - sigma[m] * rays[p].x[j];
        normalize(nr.x);
        nr.tight = z;
        set_bit(nr.tight, ci);
        born.push_back(std::move(nr));
      }
    }

    std::vector<Ray> kept;
    kept.reserve(pos.size() + zero.size() + born.size());
    for (std::size_t r = 0; r < rays.size(); ++r)
      if (sigma[r].sign() >= 0) kept.push_back(std::move(rays[r]));
    for (Ray& nr : born) kept.push_back(std::move(nr));
    rays.swap(kept);
  }

  std::vector<std::vector<BigInt>> out;
  out.reserve(rays.size());
  for (Ray& r : rays) out.push_back(std::move(r.x));
  return out;
}

}  // namespace dd

// ---- non-signaling polytope -------------------------------------------------

namespace {

// Deterministic single-party boxes: one outcome per input.
VertexSet single_party_vertices(const Scenario& sc) {
  VertexSet vs;
  vs.scenario = sc;
  const std::uint64_t count = [&] {
    std::uint64_t c = 1;
    for (int i = 0; i < sc.inputs; ++i) c *= sc.outcomes;
    return c;
  }();
  for (std::uint64_t s = 0; s < count; ++s) {
    RationalVertex v;
    v.den = 1;
    v.num.assign(sc.table_size(), 0);
    std::uint64_t rem = s;
    std::vector<int> choice(sc.inputs);
    for (int i = sc.inputs - 1; i >= 0; --i) {
      choice[i] = static_cast<int>(rem % sc.outcomes);
      rem /= sc.outcomes;
    }
    for (int x = 0; x < sc.inputs; ++x) {
      const int a[] = {choice[x]}, xv[] = {x};
      v.num[sc.index(a, xv)] = 1;
    }
    vs.vertices.push_back(std::move(v));
  }
  return vs;
}

// Rows of the equality system: normalization per input tuple, and for each
// party the equality of the other parties' marginal across that party's
// inputs.  All entries 0/±1; right-hand sides are 1 and 0 respectively.
RatMatrix ns_equality_rows(const Scenario& sc, std::vector<Rat>* rhs) {
  const std::uint64_t nx = sc.input_tuples();
  const std::uint64_t na = sc.outcome_tuples();
  RatMatrix rows;
  for (std::uint64_t x = 0; x < nx; ++x) {
    std::vector<Rat> row(sc.table_size(), Rat(0));
    for (std::uint64_t a = 0; a < na; ++a) row[a * nx + x] = 1;
    rows.push_back(std::move(row));
    if (rhs) rhs->push_back(Rat(1));
  }
  for (int k = 0; k < sc.parties; ++k) {
    for (std::uint64_t x = 0; x < nx; ++x) {
      const std::vector<int> xv = sc.unflatten_input(x);
      if (xv[k] == 0) continue;  // compare input xv[k] against input 0
      std::vector<int> x0 = xv;
      x0[k] = 0;
      for (std::uint64_t arest = 0; arest < na / sc.outcomes; ++arest) {
        // Decode the outcomes of all parties but k.
        std::vector<int> av(sc.parties, 0);
        std::uint64_t rem = arest;
        for (int j = sc.parties - 1; j >= 0; --j) {
          if (j == k) continue;
          av[j] = static_cast<int>(rem % sc.outcomes);
          rem /= sc.outcomes;
        }
        std::vector<Rat> row(sc.table_size(), Rat(0));
        for (int ak = 0; ak < sc.outcomes; ++ak) {
          av[k] = ak;
          row[sc.index(av, xv)] += 1;
          row[sc.index(av, x0)] -= 1;
        }
        rows.push_back(std::move(row));
        if (rhs) rhs->push_back(Rat(0));
      }
    }
  }
  return rows;
}

VertexSet enumerate_ns_vertices(const Scenario& sc) {
  const std::uint64_t tbl = sc.table_size();
  const RatMatrix eq = ns_equality_rows(sc, nullptr);
  const RatMatrix basis = nullspace(eq);  // rows of `basis` span the solution space shifts
  const int dim = static_cast<int>(basis.size());

  // Homogeneous coordinates (t, s): p_i = p0_i s + (N t)_i with p0 uniform.
  // Scaling row i by outcome_tuples() gives integer rows; then
  // p_i = scale_i * (row_i . ray) / (outcome_tuples() * s).
  const BigInt na(sc.outcome_tuples());
  std::vector<std::vector<BigInt>> rows;
  std::vector<BigInt> row_scale;  // gcd divided out of each coordinate row
  std::vector<BigInt> srow(dim + 1, 0);
  srow[dim] = 1;
  rows.push_back(srow);  // s >= 0
  row_scale.push_back(1);
  for (std::uint64_t i = 0; i < tbl; ++i) {
    std::vector<BigInt> row(dim + 1);
    BigInt lcm = 1;
    for (int j = 0; j < dim; ++j)
      lcm = boost::multiprecision::lcm(lcm, denominator(basis[j][i]));
    for (int j = 0; j < dim; ++j)
      row[j] = BigInt(numerator(basis[j][i]) * (lcm / denominator(basis[j][i])) * na);
    row[dim] = lcm;
    BigInt g = 0;
    for (const BigInt& c : row) g = boost::multiprecision::gcd(g, c);
    if (g > 1)
      for (BigInt& c : row) c /= g;
    rows.push_back(std::move(row));
    row_scale.push_back(g > 1 ? g : BigInt(1));
  }

  const auto rays = dd::extreme_rays(rows, dim + 1);

  VertexSet vs;
  vs.scenario = sc;
  for (const auto& ray : rays) {
    if (ray[dim].sign() <= 0)
      throw std::runtime_error("unbounded direction in non-signaling polytope");
    std::vector<Rat> p(tbl);
    const BigInt scale_den = na * ray[dim];
    for (std::uint64_t i = 0; i < tbl; ++i) {
      BigInt acc = 0;
      const auto& row = rows[i + 1];
      for (int j = 0; j <= dim; ++j)
        if (row[j] != 0) acc += row[j] * ray[j];
      p[i] = Rat(acc * row_scale[i + 1], scale_den);
    }
    BigInt den = 1;
    for (const Rat& v : p) den = boost::multiprecision::lcm(den, denominator(v));
    RationalVertex rv;
    if (den > BigInt(std::numeric_limits<std::int64_t>::max()))
      throw std::runtime_error("vertex denominator exceeds 64-bit range");
    rv.den = den.convert_to<std::int64_t>();
    rv.num.resize(tbl);
    for (std::uint64_t i = 0; i < tbl; ++i) {
      const BigInt n = numerator(p[i]) * (den / denominator(p[i]));
      rv.num[i] = n.convert_to<std::int64_t>();
      if (rv.num[i] < 0 || rv.num[i] > rv.den)
        throw std::runtime_error("vertex entry outside [0,1]");
    }
    vs.vertices.push_back(std::move(rv));
  }

  // Exact re-validation against the defining equalities (all coefficients 0/±1).
  std::vector<Rat> rhs;
  const RatMatrix eqr = ns_equality_rows(sc, &rhs);
  std::vector<std::vector<std::pair<std::uint64_t, int>>> sparse(eqr.size());
  for (std::size_t r = 0; r < eqr.size(); ++r)
    for (std::uint64_t i = 0; i < tbl; ++i)
      if (eqr[r][i] != 0) sparse[r].emplace_back(i, eqr[r][i] > 0 ? 1 : -1);
  for (const RationalVertex& v : vs.vertices) {
    for (std::size_t r = 0; r < eqr.size(); ++r) {
      std::int64_t acc = 0;
      for (const auto& [i, sgn] : sparse[r]) acc += sgn * v.num[i];
      const std::int64_t want = rhs[r] == 1 ? v.den : 0;
      if (acc != want) throw std::runtime_error("vertex violates defining equalities");
    }
  }

  std::sort(vs.vertices.begin(), vs.vertices.end(),
            [](const RationalVertex& a, const RationalVertex& b) {
              for (std::size_t i = 0; i < a.num.size(); ++i) {
                const __int128 lhs = static_cast<__int128>(a.num[i]) * b.den;
                const __int128 rhs2 = static_cast<__int128>(b.num[i]) * a.den;
                if (lhs != rhs2) return lhs < rhs2;
              }
              return false;
            });
  return vs;
}

}  // namespace

VertexSet ns_polytope_vertices(const Scenario& sc) {
  sc.validate();
  if (sc.parties == 1) {
    if (sc.table_size() > 4096) throw InputError("single-party scenario too large");
    return single_party_vertices(sc);
  }
  if (sc.table_size() > 64)
    throw InputError("vertex enumeration not supported for scenario " + sc.str());
  return enumerate_ns_vertices(sc);
}

// ---- cache ----------------------------------------------------------------------

std::string default_vertex_cache_dir() {
  if (const char* env = std::getenv("GMNL_VERTEX_CACHE"); env && *env) return env;
  return "vertex_cache";
}

std::string vertex_cache_path(const Scenario& sc, const std::string& cache_dir) {
  return cache_dir + "/ns_vertices_" + std::to_string(sc.parties) + "_" +
         std::to_string(sc.inputs) + "_" + std::to_string(sc.outcomes) + ".json";
}

void save_vertex_file(const VertexSet& vs, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["scenario"] = {{"n", vs.scenario.parties},
                   {"m", vs.scenario.inputs},
                   {"d", vs.scenario.outcomes}};
  j["vertex_count"] = vs.vertices.size();
  nlohmann::json rows = nlohmann::json::array();
  for (const RationalVertex& v : vs.vertices) {
    nlohmann::json row = nlohmann::json::array();
    row.push_back(v.den);
    for (std::int64_t n : v.num) row.push_back(n);
    rows.push_back(std::move(row));
  }
  j["vertices"] = std::move(rows);
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vertex file " + path);
  out << j.dump() << "\n";
}

VertexSet load_vertex_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open vertex file " + path);
  nlohmann::json j;
  in >> j;
  if (j.value("format_version", 0) != 1)
    throw InputError("vertex file has unsupported format version");
  VertexSet vs;
  vs.scenario = Scenario{j["scenario"]["n"].get<int>(), j["scenario"]["m"].get<int>(),
                         j["scenario"]["d"].get<int>()};
  vs.scenario.validate();
  const std::uint64_t tbl = vs.scenario.table_size();
  for (const auto& row : j["vertices"]) {
    RationalVertex v;
    if (row.size() != tbl + 1) throw InputError("vertex row length mismatch");
    v.den = row[0].get<std::int64_t>();
    if (v.den <= 0) throw InputError("vertex denominator must be positive");
    v.num.reserve(tbl);
    for (std::size_t i = 1; i < row.size(); ++i) v.num.push_back(row[i].get<std::int64_t>());
    vs.vertices.push_back(std::move(v));
  }
  if (vs.vertices.size() != j["vertex_count"].get<std::size_t>())
    throw InputError("vertex count mismatch in " + path);
  return vs;
}

VertexSet load_or_generate_vertices(const Scenario& sc, const std::string& cache_dir,
                                    bool regenerate) {
  const std::string path = vertex_cache_path(sc, cache_dir);
  if (!regenerate && std::filesystem::exists(path)) {
    VertexSet vs = load_vertex_file(path);
    if (vs.scenario == sc) return vs;
  }
  VertexSet vs = ns_polytope_vertices(sc);
  save_vertex_file(vs, path);
  return vs;
}

}  // namespace gmnl
