#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "gmnl/experiments.hpp"
#include "gmnl/json_io.hpp"

using namespace gmnl;
using nlohmann::json;

namespace {

const std::vector<std::string> kInequalityNames{"chsh-star", "chsh-star-base", "chsh-sym",
                                                "tri-star", "qutrit-star", "qutrit-sym"};

// Composed inequality by name; k = 0 selects the genuine-multipartite bound,
// k >= 2 the k-producibility bound.
ComposedInequality make_inequality(const std::string& name, int n, int k) {
  auto compose = [&](const ExpressionFamily& fam) {
    return k == 0 ? compose_gmnl(fam) : compose_depth(fam, k);
  };
  if (name == "chsh-star") return compose(chsh_star_family(n));
  if (name == "chsh-star-base") return without_common_term(compose(chsh_star_family(n)));
  if (name == "chsh-sym") return compose(chsh_symmetric_family(n));
  if (name == "tri-star") return compose(tri_star_family(n));
  if (name == "qutrit-star" || name == "qutrit-sym") {
    if (n != 3) throw InputError("qutrit inequalities are defined for n = 3");
    if (k != 0) throw InputError("qutrit inequalities have no producibility variant");
    const QutritInequalities q = compose_qutrit_tripartite();
    return name == "qutrit-star" ? q.star : q.symmetric;
  }
  throw InputError("unknown inequality '" + name + "'");
}

PureState make_state(const std::string& spec, int n) {
  if (spec == "ghz2") return ghz_state(n, 2);
  if (spec == "ghz3") return ghz_state(n, 3);
  std::ifstream in(spec);
  if (!in) throw InputError("cannot open state file " + spec);
  json j;
  in >> j;
  return state_from_json(j);
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

json run_config(std::initializer_list<std::pair<std::string, json>> kv) {
  json cfg;
  for (const auto& [key, value] : kv) cfg[key] = value;
  json j;
  j["config"] = cfg;
  j["config_digest"] = config_digest(cfg);
  j["version"] = version_string();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composition and certification toolkit for multipartite Bell inequalities"};
  app.require_subcommand(1);

  std::string ineq_name = "chsh-star", state_spec = "ghz2", out_path, behavior_path;
  std::string cache_dir = default_vertex_cache_dir();
  int n = 3, k = 0, count = 10, scen_n = 2, scen_m = 2, scen_d = 2;
  std::vector<int> party_counts{3, 4, 5};
  double q = 0.0, resolution = 1e-3, survey_resolution = 1e-5;
  std::uint64_t seed = 1;
  int restarts = 50, iterations = 0;  // 0 = per-command default
  bool tie = false;

  auto add_ineq_flags = [&](CLI::App* cmd) {
    cmd->add_option("--ineq", ineq_name, "inequality family")
        ->check(CLI::IsMember(kInequalityNames));
    cmd->add_option("--n", n, "number of parties");
    cmd->add_option("--k", k, "producibility depth (0 = genuine multipartite)");
  };
  auto add_opt_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "optimizer seed");
    cmd->add_option("--restarts", restarts, "optimizer restarts");
    cmd->add_option("--iterations", iterations, "simplex iterations per restart");
    cmd->add_flag("--tie-parties", tie, "share measurement parameters across parties 1..n-1");
  };
  // Qutrit searches run in 48 dimensions and need a larger iteration budget.
  auto opt_config = [&](int default_iterations) {
    OptimizationConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.tie_parties = tie;
    cfg.max_iterations = iterations > 0 ? iterations : default_iterations;
    return cfg;
  };

  CLI::App* c_expr = app.add_subcommand("expr", "print a composed inequality");
  add_ineq_flags(c_expr);
  c_expr->add_option("--out", out_path, "write JSON here instead of stdout");

  CLI::App* c_eval = app.add_subcommand("evaluate", "evaluate an inequality margin");
  add_ineq_flags(c_eval);
  add_opt_flags(c_eval);
  c_eval->add_option("--behavior", behavior_path, "behavior JSON file to evaluate");
  c_eval->add_option("--state", state_spec, "ghz2, ghz3 or a state JSON file");
  c_eval->add_option("--q", q, "white noise weight")->check(CLI::Range(0.0, 1.0));
  c_eval->add_option("--out", out_path, "write JSON here instead of stdout");

  CLI::App* c_bound = app.add_subcommand("bound", "certified hybrid bound of a margin");
  add_ineq_flags(c_bound);
  c_bound->add_option("--vertex-cache", cache_dir, "vertex cache directory");
  c_bound->add_option("--out", out_path, "write JSON here instead of stdout");

  CLI::App* c_sweep = app.add_subcommand("sweep", "noise thresholds of the star composition");
  c_sweep->add_option("--n-list", party_counts, "party counts to sweep");
  c_sweep->add_option("--resolution", resolution, "bisection resolution on q");
  add_opt_flags(c_sweep);
  c_sweep->add_option("--out", out_path, "output path prefix (.json/.csv appended)");

  CLI::App* c_cert = app.add_subcommand("certify", "batch-certify random canonical states");
  c_cert->add_option("--count", count, "number of states");
  c_cert->add_option("--seed", seed, "sampling seed");
  c_cert->add_option("--out", out_path, "write JSON here instead of stdout");

  CLI::App* c_survey = app.add_subcommand("survey", "three-qutrit violation survey");
  c_survey->add_option("--count", count, "number of random states");
  add_opt_flags(c_survey);
  c_survey->add_option("--resolution", survey_resolution, "threshold resolution");
  c_survey->add_option("--out", out_path, "write JSON here instead of stdout");

  CLI::App* c_depth = app.add_subcommand("depth", "producibility depth certificate");
  c_depth->add_option("--n", n, "number of parties");
  add_opt_flags(c_depth);
  c_depth->add_option("--vertex-cache", cache_dir, "vertex cache directory");
  c_depth->add_option("--out", out_path, "write JSON here instead of stdout");

  CLI::App* c_vertices = app.add_subcommand("vertices", "extremal no-signaling boxes");
  c_vertices->add_option("--parties", scen_n, "parties");
  c_vertices->add_option("--inputs", scen_m, "inputs per party");
  c_vertices->add_option("--outcomes", scen_d, "outcomes per input");
  c_vertices->add_option("--vertex-cache", cache_dir, "vertex cache directory");

  try {
    app.parse(argc, argv);

    if (c_expr->parsed()) {
      emit(composed_json(make_inequality(ineq_name, n, k)), out_path);
    } else if (c_eval->parsed()) {
      const ComposedInequality ineq = make_inequality(ineq_name, n, k);
      json j = run_config({{"ineq", ineq_name}, {"n", n}, {"k", k}, {"q", q},
                           {"seed", seed}, {"restarts", restarts}});
      if (!behavior_path.empty()) {
        std::ifstream in(behavior_path);
        if (!in) throw InputError("cannot open behavior file " + behavior_path);
        json bj;
        in >> bj;
        const Behavior b = behavior_from_json(bj);
        b.validate();
        j["lhs"] = evaluate(ineq.lhs, b);
        j["margin"] = evaluate(ineq, b);
      } else {
        const bool qutrit = ineq.scenario.outcomes == 3;
        const OptimizationConfig cfg = opt_config(qutrit ? 3000 : 600);
        const OptimizationResult r = optimize_margin(ineq, make_state(state_spec, n), q, cfg);
        j["margin"] = r.value;
        j["best_restart"] = r.best_restart;
        j["evaluations"] = r.evaluations;
      }
      j["violated"] = j["margin"].get<double>() > 0;
      emit(j, out_path);
    } else if (c_bound->parsed()) {
      const ComposedInequality ineq = make_inequality(ineq_name, n, k);
      VertexCache cache(cache_dir);
      const BellExpression margin = ineq.margin_expression();
      const BoundReport rep = k == 0 ? bilocal_bound(margin, cache)
                                     : kproducible_bound(margin, k, cache);
      if (!rep.attained)
        throw InputError("no split small enough to enumerate; scenario exceeds the vertex cap");
      json j = run_config({{"ineq", ineq_name}, {"n", n}, {"k", k}});
      j["bound"] = rep.value;
      j["bound_exact"] = rep.bound.str();
      j["certified"] = rep.certified;
      j["uncertified_splits"] = rep.uncertified_splits;
      j["hybrids_scanned"] = rep.hybrids_scanned;
      emit(j, out_path);
    } else if (c_sweep->parsed()) {
      NoiseThresholdOptions opt;
      opt.resolution = resolution;
      opt.opt = opt_config(600);
      const auto rows = star_threshold_comparison(party_counts, opt);
      json j = run_config({{"n_list", party_counts}, {"resolution", resolution},
                           {"seed", seed}, {"restarts", restarts}});
      j.update(report_json(rows));
      if (out_path.empty()) {
        emit(j, "");
      } else {
        write_text_file(out_path + ".json", j.dump(2) + "\n");
        write_text_file(out_path + ".csv", threshold_csv(rows));
      }
    } else if (c_cert->parsed()) {
      json j = run_config({{"count", count}, {"seed", seed}});
      j.update(report_json(certification_batch(count, seed)));
      emit(j, out_path);
    } else if (c_survey->parsed()) {
      const OptimizationConfig cfg = opt_config(3000);
      json j = run_config({{"count", count}, {"seed", seed}, {"restarts", restarts},
                           {"resolution", survey_resolution}});
      j.update(report_json(qutrit_survey(count, seed, cfg, survey_resolution)));
      emit(j, out_path);
    } else if (c_depth->parsed()) {
      const OptimizationConfig cfg = opt_config(600);
      VertexCache cache(cache_dir);
      json j = run_config({{"n", n}, {"seed", seed}, {"restarts", restarts}});
      j.update(report_json(depth_demo(n, cfg, cache)));
      emit(j, out_path);
    } else if (c_vertices->parsed()) {
      const Scenario sc{scen_n, scen_m, scen_d};
      const VertexSet vs = load_or_generate_vertices(sc, cache_dir);
      json j = run_config({{"scenario", scenario_json(sc)}});
      j["vertex_count"] = vs.vertices.size();
      j["cache_file"] = vertex_cache_path(sc, cache_dir);
      emit(j, "");
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << json{{"error", e.what()}, {"type", "input"}}.dump() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << json{{"error", e.what()}, {"type", "input"}}.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"type", "internal"}}.dump() << "\n";
    return 1;
  }
}
