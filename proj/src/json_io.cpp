#include "gmnl/json_io.hpp"

#include <filesystem>
#include <fstream>

namespace gmnl {

using nlohmann::json;

std::string version_string() { return "gmnl 0.1.0"; }

std::uint64_t config_digest(const json& config) {
  const std::string bytes = config.dump() + version_string();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

json scenario_json(const Scenario& sc) {
  return json{{"n", sc.parties}, {"m", sc.inputs}, {"d", sc.outcomes}};
}

Scenario scenario_from_json(const json& j) {
  Scenario sc{j.at("n").get<int>(), j.at("m").get<int>(), j.at("d").get<int>()};
  sc.validate();
  return sc;
}

json behavior_json(const Behavior& b) {
  return json{{"scenario", scenario_json(b.scenario)}, {"p", b.p}};
}

Behavior behavior_from_json(const json& j) {
  Behavior b;
  b.scenario = scenario_from_json(j.at("scenario"));
  b.p = j.at("p").get<std::vector<double>>();
  if (b.p.size() != b.scenario.table_size())
    throw InputError("behavior table size does not match its scenario");
  return b;
}

json expression_json(const BellExpression& e) {
  json terms = json::array();
  for (const auto& [key, c] : e.terms) {
    auto [a, x] = e.scenario.unflatten_index(key);
    terms.push_back(json{{"a", a}, {"x", x}, {"c", c}});
  }
  json j{{"scenario", scenario_json(e.scenario)}, {"label", e.label}, {"terms", terms}};
  if (e.classical_bound) j["classical_bound"] = *e.classical_bound;
  return j;
}

BellExpression expression_from_json(const json& j) {
  BellExpression e(scenario_from_json(j.at("scenario")), j.value("label", ""));
  for (const auto& t : j.at("terms")) {
    const auto a = t.at("a").get<std::vector<int>>();
    const auto x = t.at("x").get<std::vector<int>>();
    e.add_term(a, x, t.at("c").get<double>());
  }
  if (j.contains("classical_bound")) e.classical_bound = j["classical_bound"].get<double>();
  return e;
}

json composed_json(const ComposedInequality& q) {
  return json{{"scenario", scenario_json(q.scenario)},
              {"label", q.label},
              {"kind", q.kind == CompositionKind::genuine_multipartite ? "gmnl" : "depth"},
              {"depth_k", q.depth_k},
              {"gamma", q.gamma},
              {"lhs", expression_json(q.lhs)},
              {"positive_part", expression_json(q.positive_part)},
              {"common_term", expression_json(q.common_term)},
              {"rhs", expression_json(q.rhs)},
              {"margin", expression_json(q.margin_expression())}};
}

json state_json(const PureState& psi) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
    amps.push_back(json::array({psi.amplitudes[i].real(), psi.amplitudes[i].imag()}));
  return json{{"subsystems", psi.subsystems}, {"local_dim", psi.local_dim},
              {"amplitudes", amps}};
}

PureState state_from_json(const json& j) {
  PureState psi;
  psi.subsystems = j.at("subsystems").get<int>();
  psi.local_dim = j.at("local_dim").get<int>();
  const auto& amps = j.at("amplitudes");
  psi.amplitudes = Vector::Zero(static_cast<Eigen::Index>(amps.size()));
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i)
    psi.amplitudes[i] = Complex(amps[i][0].get<double>(), amps[i][1].get<double>());
  psi.validate();
  return psi;
}

json canonical_state_json(const CanonicalState& s) {
  return json{{"a", s.a}, {"b", s.b}, {"c", s.c}, {"d", s.d}, {"e", s.e},
              {"phase", s.phase}};
}

CanonicalState canonical_state_from_json(const json& j) {
  CanonicalState s;
  s.a = j.at("a").get<double>();
  s.b = j.at("b").get<double>();
  s.c = j.at("c").get<double>();
  s.d = j.at("d").get<double>();
  s.e = j.at("e").get<double>();
  s.phase = j.value("phase", 0.0);
  s.validate();
  return s;
}

json report_json(const NoiseThresholdResult& r) {
  return json{{"label", r.label},
              {"parties", r.parties},
              {"threshold", r.threshold},
              {"resolution", r.resolution},
              {"margin_noiseless", r.margin_noiseless},
              {"evaluations", r.evaluations}};
}

json report_json(const std::vector<ThresholdComparison>& rows) {
  json arr = json::array();
  for (const ThresholdComparison& c : rows)
    arr.push_back(json{{"parties", c.parties},
                       {"improved", report_json(c.improved)},
                       {"plain", report_json(c.plain)}});
  return json{{"comparison", arr}};
}

json report_json(const CertificationBatchReport& r) {
  return json{{"count", r.count},         {"seed", r.seed},
              {"positive", r.positive},   {"min_margin", r.min_margin},
              {"max_margin", r.max_margin}, {"mean_margin", r.mean_margin},
              {"born_checks", r.born_checks}, {"max_born_gap", r.max_born_gap}};
}

json report_json(const QutritSurveyReport& r) {
  json rows = json::array();
  for (const QutritSurveyRow& row : r.rows)
    rows.push_back(json{{"index", row.index},
                        {"sym_margin", row.sym_margin},
                        {"star_margin", row.star_margin}});
  return json{{"count", r.count},
              {"seed", r.seed},
              {"sym_violations", r.sym_violations},
              {"star_violations", r.star_violations},
              {"ghz_sym_margin", r.ghz_sym_margin},
              {"ghz_star_margin", r.ghz_star_margin},
              {"ghz_star_threshold", report_json(r.ghz_star_threshold)},
              {"rows", rows}};
}

json report_json(const DepthDemoReport& r) {
  json rows = json::array();
  for (const DepthDemoRow& row : r.rows)
    rows.push_back(json{{"k", row.k},
                        {"certified_bound", row.certified_bound},
                        {"bound_certified", row.bound_certified},
                        {"optimized_value", row.optimized_value},
                        {"refuted", row.refuted}});
  return json{{"parties", r.parties}, {"rows", rows}, {"certified_depth", r.certified_depth}};
}

std::string threshold_csv(const std::vector<ThresholdComparison>& rows) {
  std::string out = "label,parties,threshold,margin_noiseless\n";
  auto line = [&out](const NoiseThresholdResult& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%d,%.6f,%.9f\n", r.label.c_str(), r.parties,
                  r.threshold, r.margin_noiseless);
    out += buf;
  };
  for (const ThresholdComparison& c : rows) {
    line(c.improved);
    line(c.plain);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace gmnl
