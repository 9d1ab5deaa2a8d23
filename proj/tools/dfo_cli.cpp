// Command-line front end: generate, solve, bench, check.
//
// Exit codes: 0 converged / all envelopes hold, 2 not converged / an
// envelope is violated, 1 error.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "dfo/dfo.hpp"

namespace {

using dfo::Json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

void emit(const std::string& path, const Json& j) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    dfo::write_text_file(path, text);
  }
}

struct GenerateArgs {
  long n = 50;
  long p = 0;
  std::string family = "NUM";
  std::string cone = "nonpos";
  std::optional<long> sparsity;
  std::uint64_t seed = 1;
  double gamma = 0.5;
  std::string out = "-";
};

dfo::GeneratorSpec to_spec(const GenerateArgs& a) {
  dfo::GeneratorSpec s;
  s.n = a.n;
  s.p = a.p;
  s.family = dfo::parse_family(a.family);
  s.cone = dfo::parse_cone_kind(a.cone);
  s.sparsity = a.sparsity;
  s.seed = a.seed;
  s.gamma_abs = a.gamma;
  return s;
}

void add_generator_flags(CLI::App* cmd, GenerateArgs& a) {
  cmd->add_option("--n", a.n, "Number of primal variables");
  cmd->add_option("--p", a.p, "Number of constraint rows (default 3n/2)");
  cmd->add_option("--family", a.family, "NUM, RES or QP");
  cmd->add_option("--cone", a.cone, "zero, nonneg, nonpos or soc");
  cmd->add_option("--sparsity", a.sparsity, "Nonzeros per row of G");
  cmd->add_option("--seed", a.seed, "Random seed");
  cmd->add_option("--gamma", a.gamma, "|gamma| of the log term");
}

struct SolverFlags {
  std::string config_file;
  std::optional<std::string> method;
  std::optional<double> epsilon;
  std::optional<long> max_iter;
  std::optional<std::string> recovery;
  std::optional<std::string> x0;
  std::optional<double> inner_tol;
  std::optional<double> kappa;
  std::optional<double> delta;
  std::optional<long> restart_interval;
  std::optional<long> hybrid_k;
  std::optional<double> alpha;
  std::optional<double> lipschitz_g;
  std::optional<double> f_star;
  std::optional<double> dual_radius;
  bool adaptive_restart = false;
  bool stop_at_budget = false;
  bool no_stop = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--config", f.config_file, "key = value config file");
  cmd->add_option("--method", f.method, "DG, DFG, RDFG, RegDFG or Hybrid");
  cmd->add_option("--epsilon", f.epsilon, "Target accuracy (default 1e-2)");
  cmd->add_option("--max-iter", f.max_iter, "Iteration cap (default 15000)");
  cmd->add_option("--recovery", f.recovery, "last, avg or both");
  cmd->add_option("--x0", f.x0, "Starting multiplier, comma separated");
  cmd->add_option("--inner-tol", f.inner_tol, "Inner solve tolerance");
  cmd->add_option("--kappa", f.kappa, "Error-bound constant (R-DFG K_c)");
  cmd->add_option("--delta", f.delta, "Regularization weight (RegDFG)");
  cmd->add_option("--restart-interval", f.restart_interval, "R-DFG K_c");
  cmd->add_option("--hybrid-k", f.hybrid_k, "DFG steps before switching to DG");
  cmd->add_option("--alpha", f.alpha, "Constant DG step size");
  cmd->add_option("--lipschitz-g", f.lipschitz_g, "L_G for variable DG steps");
  cmd->add_option("--f-star", f.f_star, "Known optimal value (adaptive R-DFG)");
  cmd->add_option("--dual-radius", f.dual_radius, "Estimate of R_d (RegDFG)");
  cmd->add_flag("--adaptive-restart", f.adaptive_restart, "R-DFG restarts on f*");
  cmd->add_flag("--stop-at-budget", f.stop_at_budget, "RegDFG stops at its budget");
  cmd->add_flag("--no-stop", f.no_stop, "Ignore the stopping rule");
}

void apply_solver_flags(const SolverFlags& f, dfo::SolverConfig& c) {
  if (!f.config_file.empty()) {
    const auto kv = dfo::load_key_values(f.config_file);
    const auto used = dfo::apply_solver_keys(kv, c);
    for (const auto& [key, value] : kv) {
      if (std::find(used.begin(), used.end(), key) == used.end()) {
        throw dfo::ConfigError("unknown config key '" + key + "'");
      }
    }
  }
  if (f.method) c.method = dfo::parse_method(*f.method);
  if (f.epsilon) c.epsilon = *f.epsilon;
  if (f.max_iter) c.max_iter = *f.max_iter;
  if (f.recovery) c.recovery = dfo::parse_recovery(*f.recovery);
  if (f.x0) c.x0 = dfo::parse_vector_text(*f.x0);
  if (f.inner_tol) c.inner_tol = *f.inner_tol;
  if (f.kappa) c.kappa = *f.kappa;
  if (f.delta) c.delta = *f.delta;
  if (f.restart_interval) c.restart_interval = *f.restart_interval;
  if (f.hybrid_k) c.hybrid_k = *f.hybrid_k;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.lipschitz_g) c.lipschitz_g = *f.lipschitz_g;
  if (f.f_star) c.f_star = *f.f_star;
  if (f.dual_radius) c.dual_radius = *f.dual_radius;
  if (f.adaptive_restart) c.adaptive_restart = true;
  if (f.stop_at_budget) c.stop_at_budget = true;
  if (f.no_stop) c.use_stopping_rule = false;
}

int cmd_generate(const GenerateArgs& a) {
  const dfo::ConicProblem prob = dfo::generate_random_problem(to_spec(a));
  const std::string text = dfo::problem_to_json(prob).dump() + "\n";
  if (a.out == "-") {
    std::cout << text;
  } else {
    dfo::write_text_file(a.out, text);
  }
  return kExitOk;
}

struct SolveArgs {
  std::string problem;
  GenerateArgs gen;
  SolverFlags solver;
  std::string reference = "auto";
  std::string trace_out;
  std::string report_out;
};

int cmd_solve(const SolveArgs& a) {
  const dfo::ConicProblem prob = a.problem.empty()
                                     ? dfo::generate_random_problem(to_spec(a.gen))
                                     : dfo::load_problem(a.problem);
  dfo::SolverConfig cfg;
  apply_solver_flags(a.solver, cfg);
  std::optional<dfo::ReferenceSolution> ref;
  const bool small = prob.n() <= 500 && prob.p() <= 1000;
  if (a.reference == "always" || (a.reference == "auto" && small)) {
    ref = dfo::reference_solution(prob, cfg.x0);
  } else if (a.reference != "none" && a.reference != "auto") {
    throw dfo::ConfigError("--reference must be auto, always or none");
  }
  dfo::DualOracle oracle(prob, cfg.inner_tol);
  dfo::RunOptions opts;
  if (ref) opts.reference = ref->trace_reference();
  const dfo::RunResult run = dfo::run(oracle, cfg, opts);
  if (!a.trace_out.empty()) dfo::save_trace_csv(a.trace_out, run.trace);
  emit(a.report_out, dfo::make_run_report(prob, cfg, run, ref, a.trace_out));
  return run.converged() ? kExitOk : kExitNotConverged;
}

struct BenchArgs {
  std::string config_file;
  std::optional<std::string> families;
  std::optional<long> n;
  std::optional<std::string> seeds;
  std::optional<std::string> methods;
  std::optional<std::string> cone;
  std::optional<double> epsilon;
  std::optional<long> max_iter;
  std::optional<int> jobs;
  std::optional<std::string> trace_dir;
  std::string report_out;
};

int cmd_bench(const BenchArgs& a) {
  dfo::KeyValues kv;
  if (!a.config_file.empty()) kv = dfo::load_key_values(a.config_file);
  if (a.families) kv["families"] = *a.families;
  if (a.n) kv["n"] = std::to_string(*a.n);
  if (a.seeds) kv["seeds"] = *a.seeds;
  if (a.methods) kv["methods"] = *a.methods;
  if (a.cone) kv["cone"] = *a.cone;
  if (a.epsilon) kv["epsilon"] = std::to_string(*a.epsilon);
  if (a.max_iter) kv["max_iter"] = std::to_string(*a.max_iter);
  if (a.jobs) kv["jobs"] = std::to_string(*a.jobs);
  if (a.trace_dir) kv["trace_dir"] = *a.trace_dir;
  const dfo::ExperimentConfig cfg = dfo::experiment_config_from(kv);
  const dfo::ExperimentReport rep = dfo::run_experiment(cfg);
  const Json j = dfo::experiment_report_json(rep);
  emit(a.report_out, j);
  return j["all_converged"].get<bool>() ? kExitOk : kExitNotConverged;
}

struct CheckArgs {
  std::string trace;
  std::string method = "DFG";
  std::vector<std::string> families;
  std::string consts_file;
  std::optional<double> lipschitz_dual;
  std::optional<double> lipschitz_g;
  std::optional<double> dual_radius;
  std::optional<double> x0_norm;
  std::optional<double> sigma_f;
  std::optional<double> kappa;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::optional<double> f_star;
  std::string report_out;
};

int cmd_check(const CheckArgs& a) {
  const dfo::Method method = dfo::parse_method(a.method);
  const dfo::IterationTrace trace = dfo::load_trace_csv(a.trace, method);
  dfo::BoundConstants c;
  if (!a.consts_file.empty()) {
    const Json j = dfo::read_json_file(a.consts_file);
    auto take = [&](const char* key, std::optional<double>& dst) {
      if (j.contains(key) && !j[key].is_null()) dst = j[key].get<double>();
    };
    take("L_d", c.lipschitz_dual);
    take("L_G", c.lipschitz_g);
    take("R_d", c.dual_radius);
    take("x0_norm", c.x0_norm);
    take("sigma_f", c.sigma_f);
    take("kappa", c.kappa);
    take("delta", c.delta);
    take("epsilon", c.epsilon);
    take("f_star", c.f_star);
  }
  auto over = [](const std::optional<double>& v, std::optional<double>& dst) {
    if (v) dst = v;
  };
  over(a.lipschitz_dual, c.lipschitz_dual);
  over(a.lipschitz_g, c.lipschitz_g);
  over(a.dual_radius, c.dual_radius);
  over(a.x0_norm, c.x0_norm);
  over(a.sigma_f, c.sigma_f);
  over(a.kappa, c.kappa);
  over(a.delta, c.delta);
  over(a.epsilon, c.epsilon);
  over(a.f_star, c.f_star);
  if (!c.lipschitz_g) c.lipschitz_g = c.lipschitz_dual;

  std::vector<dfo::BoundFamily> fams;
  for (const auto& f : a.families) fams.push_back(dfo::parse_bound_family(f));
  if (fams.empty()) fams = dfo::default_envelopes(method);

  Json out;
  out["trace"] = a.trace;
  out["method"] = std::string(dfo::method_name(method));
  Json verdicts = Json::array();
  bool all_ok = true;
  for (auto f : fams) {
    const dfo::BoundEnvelope env = dfo::check_envelope(trace, f, c);
    all_ok = all_ok && env.ok();
    verdicts.push_back(dfo::envelope_to_json(env));
  }
  out["envelopes"] = std::move(verdicts);
  out["ok"] = all_ok;
  emit(a.report_out, out);
  return all_ok ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual first-order methods for strongly convex conic problems"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a random problem file");
  add_generator_flags(g, gen);
  g->add_option("--out", gen.out, "Output path ('-' for stdout)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run one solver on a problem");
  s->add_option("--problem", solve.problem,
                "Problem JSON (omit to generate from --seed/--n/--family)");
  add_generator_flags(s, solve.gen);
  add_solver_flags(s, solve.solver);
  s->add_option("--reference", solve.reference,
                "auto, always or none: compute a reference solution");
  s->add_option("--trace-out", solve.trace_out, "Trace CSV path");
  s->add_option("--report-out", solve.report_out, "Report JSON path");

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Run a seeded batch experiment");
  b->add_option("--config", bench.config_file, "key = value config file");
  b->add_option("--families", bench.families, "e.g. NUM,RES");
  b->add_option("--n", bench.n, "Problem size");
  b->add_option("--seeds", bench.seeds, "e.g. 1-10 or 1,2,3");
  b->add_option("--methods", bench.methods, "e.g. DG,DFG");
  b->add_option("--cone", bench.cone, "Cone kind");
  b->add_option("--epsilon", bench.epsilon, "Target accuracy");
  b->add_option("--max-iter", bench.max_iter, "Iteration cap");
  b->add_option("--jobs", bench.jobs, "Worker threads");
  b->add_option("--trace-dir", bench.trace_dir, "Directory for trace CSVs");
  b->add_option("--report-out", bench.report_out, "Report JSON path");

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Check a trace against bound envelopes");
  c->add_option("--trace", check.trace, "Trace CSV")->required();
  c->add_option("--method", check.method, "Method that produced the trace");
  c->add_option("--family", check.families, "Bound family (repeatable)");
  c->add_option("--consts", check.consts_file, "Constants JSON file");
  c->add_option("--L-d", check.lipschitz_dual, "L_d");
  c->add_option("--L-G", check.lipschitz_g, "L_G");
  c->add_option("--R-d", check.dual_radius, "R_d");
  c->add_option("--x0-norm", check.x0_norm, "||x0||");
  c->add_option("--sigma", check.sigma_f, "sigma_f");
  c->add_option("--kappa", check.kappa, "kappa");
  c->add_option("--delta", check.delta, "delta");
  c->add_option("--epsilon", check.epsilon, "epsilon");
  c->add_option("--f-star", check.f_star, "f*");
  c->add_option("--report-out", check.report_out, "Verdict JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (g->parsed()) return cmd_generate(gen);
    if (s->parsed()) return cmd_solve(solve);
    if (b->parsed()) return cmd_bench(bench);
    if (c->parsed()) return cmd_check(check);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
