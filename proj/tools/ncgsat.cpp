// ncgsat command-line front end: solve, convert, gen, check, bench.

#include <CLI11.hpp>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncgsat/cnf.hpp"
#include "ncgsat/formula.hpp"
#include "ncgsat/gen.hpp"
#include "ncgsat/oracle.hpp"
#include "ncgsat/rng.hpp"
#include "ncgsat/score.hpp"
#include "ncgsat/search.hpp"

using nlohmann::json;
namespace ng = ncgsat;

namespace {

constexpr int kExitSat = 10;
constexpr int kExitExhausted = 20;
constexpr int kExitError = 1;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

ng::Problem load_problem(const std::string& path, const std::string& format) {
  std::string text = read_file(path);
  std::string fmt = format;
  if (fmt == "auto") {
    if (ends_with(path, ".cnf")) fmt = "cnf";
    else if (ends_with(path, ".bool")) fmt = "bool";
    else
      throw std::runtime_error(
          "cannot infer format of '" + path +
          "' from its extension; pass --format bool|cnf");
  }
  if (fmt == "cnf") return ng::parse_dimacs(text);
  if (fmt == "bool") return ng::parse_formula(text);
  throw std::runtime_error("unknown format '" + fmt + "'");
}

json score_to_json(const ng::Score& s) {
  if (s >= std::numeric_limits<std::int64_t>::min() &&
      s <= std::numeric_limits<std::int64_t>::max())
    return json(s.convert_to<std::int64_t>());
  return json(s.str());
}

json stats_record(const ng::SearchResult& res, const ng::SearchConfig& cfg,
                  const ng::Problem* problem) {
  json rec;
  rec["outcome"] = res.sat ? "sat" : "exhausted";
  rec["tries"] = res.tries_used;
  rec["flips"] = res.flips_used;
  rec["best_score"] = score_to_json(res.best_score);
  rec["elapsed"] = res.elapsed_sec;
  rec["variant"] = ng::to_string(cfg.variant);
  rec["backend"] = ng::to_string(cfg.backend);
  rec["seed"] = cfg.seed;
  if (cfg.record_trace) rec["trace"] = res.trace;
  if (res.sat && problem) {
    json model = json::object();
    for (ng::VarId v = 0; v < problem->var_count(); ++v)
      model[problem->var_names[v]] = res.model.get(v) ? 1 : 0;
    rec["model"] = model;
  }
  return rec;
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string path;
  std::string format = "auto";
  ng::SearchConfig cfg;
  std::string variant = "gsat";
  std::string backend = "nc";
  bool emit_json = false;
};

int cmd_solve(const SolveArgs& args) {
  ng::SearchConfig cfg = args.cfg;
  if (auto v = ng::variant_from_string(args.variant)) {
    cfg.variant = *v;
  } else {
    std::cerr << "error: unknown variant '" << args.variant << "'\n";
    return kExitError;
  }
  if (auto b = ng::backend_from_string(args.backend)) {
    cfg.backend = *b;
  } else {
    std::cerr << "error: unknown backend '" << args.backend << "'\n";
    return kExitError;
  }

  ng::Problem problem = load_problem(args.path, args.format);
  ng::SearchResult res = ng::gsat_run(problem, cfg);

  if (args.emit_json) {
    std::cout << stats_record(res, cfg, &problem).dump(2) << "\n";
  } else if (res.sat) {
    for (ng::VarId v = 0; v < problem.var_count(); ++v)
      std::cout << problem.var_names[v] << "=" << (res.model.get(v) ? 1 : 0)
                << "\n";
  } else {
    std::cout << "no satisfying assignment found (best score "
              << res.best_score << " after " << res.tries_used
              << " tries, " << res.flips_used << " flips)\n";
  }
  return res.sat ? kExitSat : kExitExhausted;
}

// ---------------------------------------------------------------------------
// convert
// ---------------------------------------------------------------------------

struct ConvertArgs {
  std::string path;
  std::string format = "auto";
  std::string mode = "standard";
  bool polarity = false;
  std::uint64_t guard = 1'000'000;
  std::string name_map_path;
};

int cmd_convert(const ConvertArgs& args) {
  ng::Problem problem = load_problem(args.path, args.format);
  if (args.mode == "standard") {
    ng::ClauseSet cs = ng::cnf_standard(problem, args.guard);
    std::vector<std::string> comments = {"standard conversion of " +
                                         args.path};
    std::cout << ng::to_dimacs(cs, comments);
    std::cerr << "clauses=" << cs.clauses.size() << " vars=" << cs.var_count
              << " fresh=0\n";
    return 0;
  }
  if (args.mode == "definitional") {
    ng::DefinitionalCnf def = ng::cnf_definitional(problem, args.polarity);
    std::vector<std::string> comments = {
        std::string("definitional conversion of ") + args.path +
        (args.polarity ? " (polarity-optimized)" : "")};
    std::cout << ng::to_dimacs(def.clauses, comments);
    std::cerr << "clauses=" << def.clauses.clauses.size()
              << " vars=" << def.clauses.var_count
              << " fresh=" << def.fresh_vars << "\n";
    if (!args.name_map_path.empty()) {
      json map = json::object();
      for (const auto& [fresh, text] : def.definitions) map[fresh] = text;
      std::ofstream out(args.name_map_path);
      if (!out)
        throw std::runtime_error("cannot write '" + args.name_map_path + "'");
      out << map.dump(2) << "\n";
    }
    return 0;
  }
  std::cerr << "error: unknown mode '" << args.mode << "'\n";
  return kExitError;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenKcnfArgs {
  std::uint32_t n = 50, m = 215, k = 3;
  std::uint64_t seed = 0;
  bool planted = false;
  std::string out;
};

struct GenFormulaArgs {
  std::uint32_t depth = 4, arity = 3, vars = 8;
  std::uint64_t seed = 0;
  ng::gen::OpWeights weights;
  std::string out;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int cmd_gen_kcnf(const GenKcnfArgs& args) {
  ng::Problem problem;
  std::string note = "random " + std::to_string(args.k) + "-cnf n=" +
                     std::to_string(args.n) + " m=" + std::to_string(args.m) +
                     " seed=" + std::to_string(args.seed) +
                     (args.planted ? " planted=1" : "");
  if (args.planted)
    problem = ng::gen::random_kcnf_planted(args.n, args.m, args.k, args.seed)
                  .problem;
  else
    problem = ng::gen::random_kcnf(args.n, args.m, args.k, args.seed);
  ng::ClauseSet cs = ng::cnf_standard(problem);
  std::vector<std::string> comments = {note};
  write_output(args.out, ng::to_dimacs(cs, comments));
  return 0;
}

int cmd_gen_formula(const GenFormulaArgs& args) {
  ng::Problem problem = ng::gen::random_formula(args.depth, args.arity,
                                                args.vars, args.weights,
                                                args.seed);
  std::ostringstream out;
  out << "# random formula depth=" << args.depth << " arity=" << args.arity
      << " vars=" << args.vars << " seed=" << args.seed << " weights=and:"
      << args.weights.and_w << ",or:" << args.weights.or_w
      << ",not:" << args.weights.not_w << ",imp:" << args.weights.implies_w
      << ",iff:" << args.weights.iff_w << "\n";
  out << ng::render(problem) << "\n";
  write_output(args.out, out.str());
  return 0;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckArgs {
  std::string path;
  std::string format = "auto";
  std::uint64_t seed = 0;
  bool exhaustive = false;
};

int cmd_check(const CheckArgs& args) {
  ng::Problem problem = load_problem(args.path, args.format);
  const std::uint32_t n = problem.var_count();
  bool ok = true;
  auto report = [&ok](const std::string& what, bool pass) {
    std::cout << (pass ? "PASS " : "FAIL ") << what << "\n";
    ok = ok && pass;
  };

  ng::CompiledFormula cf(problem.root, n);
  std::vector<ng::ScorePair> cache;

  // 32 random assignments: recursive score vs score by definition.
  ng::Rng rng(args.seed);
  bool spot_ok = true;
  std::uint64_t sample_score = 0;
  for (int i = 0; i < 32 && spot_ok; ++i) {
    ng::Assignment t(n);
    for (ng::VarId v = 0; v < n; ++v) t.set(v, rng.bit());
    ng::eval_scores(cf, t, cache);
    std::uint64_t reference =
        ng::oracle::score_by_definition(problem.root, n, t);
    sample_score = reference;
    spot_ok = cache[0].s == reference &&
              (cache[0].s == 0) == ng::evaluate(problem.root, t) &&
              ((cache[0].s == 0) != (cache[0].s_neg == 0));
  }
  report("recursive score matches clause counting on 32 assignments (last "
         "sampled score " + std::to_string(sample_score) + ")",
         spot_ok);

  if (args.exhaustive) {
    ng::oracle::Enumeration e = ng::oracle::enumerate_models(problem);
    std::cout << (e.satisfiable ? "satisfiable" : "unsatisfiable") << ", "
              << e.model_count << " models over 2^" << n << " assignments\n";
    report("exhaustive enumeration completed", true);
  }

  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : kExitError;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string config_path;
  bool emit_json = false;
  std::string out;
};

struct BenchRow {
  std::string sweep, family, variant, backend;
  double walk_prob = 0;
  std::uint64_t instances = 0, solved = 0, total_flips = 0,
                total_work = 0;
  double wall_s = 0;
};

ng::Problem bench_instance(const json& family, std::uint64_t seed) {
  std::string kind = family.at("kind").get<std::string>();
  if (kind == "kcnf") {
    std::uint32_t n = family.at("n").get<std::uint32_t>();
    std::uint32_t m = family.at("m").get<std::uint32_t>();
    std::uint32_t k = family.value("k", 3u);
    if (family.value("planted", false))
      return ng::gen::random_kcnf_planted(n, m, k, seed).problem;
    return ng::gen::random_kcnf(n, m, k, seed);
  }
  if (kind == "formula") {
    ng::gen::OpWeights w;
    w.and_w = family.value("and", w.and_w);
    w.or_w = family.value("or", w.or_w);
    w.not_w = family.value("not", w.not_w);
    w.implies_w = family.value("implies", w.implies_w);
    w.iff_w = family.value("iff", w.iff_w);
    return ng::gen::random_formula(family.value("depth", 4u),
                                   family.value("arity", 3u),
                                   family.value("vars", 8u), w, seed);
  }
  if (kind == "file") {
    return load_problem(family.at("path").get<std::string>(),
                        family.value("format", "auto"));
  }
  throw std::runtime_error("unknown instance family kind '" + kind + "'");
}

int cmd_bench(const BenchArgs& args) {
  json config = json::parse(read_file(args.config_path));
  std::vector<BenchRow> rows;

  for (const json& sweep : config.value("sweeps", json::array())) {
    std::string name = sweep.value("name", "sweep");
    const json& family = sweep.at("family");
    std::uint64_t instances = sweep.value("instances", 10u);
    std::uint64_t first_seed = sweep.value("first_seed", 1u);
    std::vector<std::string> variants =
        sweep.value("variants", std::vector<std::string>{"gsat"});
    std::vector<double> walk_probs =
        sweep.value("walk_probs", std::vector<double>{0.0});
    std::vector<std::string> backends =
        sweep.value("backends", std::vector<std::string>{"nc"});

    for (const std::string& variant : variants) {
      for (double p : walk_probs) {
        for (const std::string& backend : backends) {
          BenchRow row;
          row.sweep = name;
          row.family = family.at("kind").get<std::string>();
          row.variant = variant;
          row.backend = backend;
          row.walk_prob = p;
          row.instances = instances;
          for (std::uint64_t i = 0; i < instances; ++i) {
            std::uint64_t seed = first_seed + i;
            ng::Problem problem = bench_instance(family, seed);
            ng::SearchConfig cfg;
            cfg.max_tries = sweep.value("max_tries", 10u);
            cfg.max_flips = sweep.value("max_flips", 500u);
            cfg.walk_prob = p;
            cfg.seed = seed;
            auto v = ng::variant_from_string(variant);
            auto b = ng::backend_from_string(backend);
            if (!v || !b)
              throw std::runtime_error("bad variant/backend in sweep '" +
                                       name + "'");
            cfg.variant = *v;
            cfg.backend = *b;
            ng::SearchResult res = ng::gsat_run(problem, cfg);
            row.solved += res.sat ? 1 : 0;
            row.total_flips += res.flips_used;
            row.total_work += res.update_work;
            row.wall_s += res.elapsed_sec;
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }

  std::ostringstream out;
  if (args.emit_json) {
    json arr = json::array();
    for (const BenchRow& r : rows) {
      json o;
      o["sweep"] = r.sweep;
      o["family"] = r.family;
      o["variant"] = r.variant;
      o["backend"] = r.backend;
      o["walk_prob"] = r.walk_prob;
      o["instances"] = r.instances;
      o["solved"] = r.solved;
      o["success_rate"] =
          r.instances ? static_cast<double>(r.solved) / r.instances : 0.0;
      o["mean_flips"] =
          r.instances ? static_cast<double>(r.total_flips) / r.instances : 0.0;
      o["mean_work_per_flip"] =
          r.total_flips ? static_cast<double>(r.total_work) / r.total_flips
                        : 0.0;
      o["wall_s"] = r.wall_s;
      arr.push_back(o);
    }
    out << arr.dump(2) << "\n";
  } else {
    out << "sweep,family,variant,backend,walk_prob,instances,solved,"
           "success_rate,mean_flips,mean_work_per_flip,wall_s\n";
    for (const BenchRow& r : rows) {
      out << r.sweep << "," << r.family << "," << r.variant << ","
          << r.backend << "," << r.walk_prob << "," << r.instances << ","
          << r.solved << ","
          << (r.instances ? static_cast<double>(r.solved) / r.instances : 0.0)
          << ","
          << (r.instances ? static_cast<double>(r.total_flips) / r.instances
                          : 0.0)
          << ","
          << (r.total_flips
                  ? static_cast<double>(r.total_work) / r.total_flips
                  : 0.0)
          << "," << r.wall_s << "\n";
    }
  }
  write_output(args.out, out.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GSAT-style stochastic local search run directly on "
               "non-clausal propositional formulas"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "search for a satisfying assignment");
  solve_cmd->add_option("input", solve.path, "formula (.bool) or DIMACS "
                        "(.cnf) file")->required();
  solve_cmd->add_option("--format", solve.format, "auto|bool|cnf")
      ->envname("NCGSAT_FORMAT");
  solve_cmd->add_option("--max-tries", solve.cfg.max_tries, "restarts")
      ->envname("NCGSAT_MAX_TRIES");
  solve_cmd->add_option("--max-flips", solve.cfg.max_flips, "flips per try")
      ->envname("NCGSAT_MAX_FLIPS");
  solve_cmd->add_option("--variant", solve.variant,
                        "gsat|csat|dsat|rsat|msat")
      ->envname("NCGSAT_VARIANT");
  solve_cmd->add_option("--walk-prob", solve.cfg.walk_prob,
                        "random-walk probability in [0,1]")
      ->envname("NCGSAT_WALK_PROB");
  solve_cmd->add_flag("--averaging-in", solve.cfg.averaging_in,
                      "seed tries >= 3 from the two latest tries' bests");
  solve_cmd->add_option("--seed", solve.cfg.seed, "random seed")
      ->envname("NCGSAT_SEED");
  solve_cmd->add_option("--backend", solve.backend, "nc|clausal")
      ->envname("NCGSAT_BACKEND");
  solve_cmd->add_flag("--json", solve.emit_json, "emit the JSON stats record");
  solve_cmd->add_flag("--trace", solve.cfg.record_trace,
                      "record the flip trace (json output only; large)");
  solve_cmd->add_option("--parallel-tries", solve.cfg.parallel_tries,
                        "run tries on this many worker threads")
      ->envname("NCGSAT_PARALLEL_TRIES");

  ConvertArgs convert;
  CLI::App* convert_cmd =
      app.add_subcommand("convert", "emit a DIMACS clausal conversion");
  convert_cmd->add_option("input", convert.path, "input file")->required();
  convert_cmd->add_option("--format", convert.format, "auto|bool|cnf");
  convert_cmd->add_option("--mode", convert.mode, "standard|definitional");
  convert_cmd->add_flag("--polarity", convert.polarity,
                        "definitional: emit defining clauses only for the "
                        "polarities a subformula occurs under");
  convert_cmd->add_option("--guard", convert.guard,
                          "standard-mode output clause limit");
  convert_cmd->add_option("--name-map", convert.name_map_path,
                          "write the fresh-variable JSON name map here");

  CLI::App* gen_cmd = app.add_subcommand("gen", "generate instances");
  gen_cmd->require_subcommand(1);
  GenKcnfArgs gk;
  CLI::App* gen_kcnf = gen_cmd->add_subcommand("kcnf", "uniform random k-CNF");
  gen_kcnf->add_option("-n,--vars", gk.n, "variables");
  gen_kcnf->add_option("-m,--clauses", gk.m, "clauses");
  gen_kcnf->add_option("-k,--arity", gk.k, "literals per clause");
  gen_kcnf->add_option("--seed", gk.seed, "seed");
  gen_kcnf->add_flag("--planted", gk.planted,
                     "filter clauses to keep a hidden assignment satisfying");
  gen_kcnf->add_option("-o,--out", gk.out, "output path (default stdout)");

  GenFormulaArgs gf;
  CLI::App* gen_formula =
      gen_cmd->add_subcommand("formula", "random formula tree");
  gen_formula->add_option("--depth", gf.depth, "max depth");
  gen_formula->add_option("--arity", gf.arity, "max And/Or arity");
  gen_formula->add_option("--vars", gf.vars, "variable pool size");
  gen_formula->add_option("--seed", gf.seed, "seed");
  gen_formula->add_option("--w-and", gf.weights.and_w, "And weight");
  gen_formula->add_option("--w-or", gf.weights.or_w, "Or weight");
  gen_formula->add_option("--w-not", gf.weights.not_w, "Not weight");
  gen_formula->add_option("--w-imp", gf.weights.implies_w, "Implies weight");
  gen_formula->add_option("--w-iff", gf.weights.iff_w, "Iff weight");
  gen_formula->add_option("-o,--out", gf.out, "output path (default stdout)");

  CheckArgs check;
  CLI::App* check_cmd = app.add_subcommand(
      "check", "cross-check the score engine against brute force");
  check_cmd->add_option("input", check.path, "input file")->required();
  check_cmd->add_option("--format", check.format, "auto|bool|cnf");
  check_cmd->add_option("--seed", check.seed, "seed for the spot checks")
      ->envname("NCGSAT_SEED");
  check_cmd->add_flag("--exhaustive", check.exhaustive,
                      "also enumerate all assignments (<= 20 variables)");

  BenchArgs bench;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "run a declarative benchmark sweep");
  bench_cmd->add_option("config", bench.config_path, "JSON sweep config")
      ->required();
  bench_cmd->add_flag("--json", bench.emit_json, "emit JSON instead of CSV");
  bench_cmd->add_option("-o,--out", bench.out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve);
    if (convert_cmd->parsed()) return cmd_convert(convert);
    if (gen_kcnf->parsed()) return cmd_gen_kcnf(gk);
    if (gen_formula->parsed()) return cmd_gen_formula(gf);
    if (check_cmd->parsed()) return cmd_check(check);
    if (bench_cmd->parsed()) return cmd_bench(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
