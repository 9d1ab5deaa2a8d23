#ifndef DFO_BENCH_HPP
#define DFO_BENCH_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dfo/certify.hpp"
#include "dfo/cones.hpp"
#include "dfo/errors.hpp"
#include "dfo/inner.hpp"
#include "dfo/io.hpp"
#include "dfo/methods.hpp"
#include "dfo/model.hpp"

namespace dfo {

// NUM: gamma < 0, a > 0, b = 0, U = R^n_+      (utility maximization)
// RES: gamma > 0, a = 0, b != 0, U = box       (resource allocation)
// QP:  gamma = 0, U = R^n
enum class ProblemFamily { kNum, kRes, kQp };

inline std::string_view family_name(ProblemFamily f) {
  switch (f) {
    case ProblemFamily::kNum:
      return "NUM";
    case ProblemFamily::kRes:
      return "RES";
    case ProblemFamily::kQp:
      return "QP";
  }
  return "?";
}

inline ProblemFamily parse_family(std::string_view s) {
  if (s == "NUM" || s == "num") return ProblemFamily::kNum;
  if (s == "RES" || s == "res") return ProblemFamily::kRes;
  if (s == "QP" || s == "qp") return ProblemFamily::kQp;
  throw ConfigError("unknown problem family '" + std::string(s) + "'");
}

struct GeneratorSpec {
  Eigen::Index n = 50;
  Eigen::Index p = 0;  // 0: 3n/2
  ProblemFamily family = ProblemFamily::kQp;
  ConeKind cone = ConeKind::kNonpos;
  std::optional<Eigen::Index> sparsity;  // nonzeros per row of G
  std::uint64_t seed = 1;
  double gamma_abs = 0.5;
  double box_radius = 1.0;  // RES: U = [-r, r]^n

  Eigen::Index rows() const { return p > 0 ? p : (3 * n) / 2; }
  // Default: 50 nonzeros per row above n = 2000, dense otherwise.
  std::optional<Eigen::Index> row_nonzeros() const {
    if (sparsity) return sparsity;
    if (n > 2000) return Eigen::Index{50};
    return std::nullopt;
  }
};

namespace detail {

class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return normal_(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  Eigen::Index index(Eigen::Index n) {
    return std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng_);
  }
  Vector vector(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = (*this)();
    return v;
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Dense Q = D^T D / n shifted to lambda_min = 1; large n uses a diagonal Q.
inline SymmetricForm generate_q(Gaussian& rnd, Eigen::Index n) {
  if (n > 2000) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = rnd.uniform(0.0, 9.0);
    d.array() += 1.0 - d.minCoeff();
    return SymmetricForm::diagonal(std::move(d));
  }
  DenseMatrix dm(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) dm(i, j) = rnd();
  }
  DenseMatrix q = dm.transpose() * dm / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(q, Eigen::EigenvaluesOnly);
  q.diagonal().array() += 1.0 - es.eigenvalues().minCoeff();
  return SymmetricForm(std::move(q));
}

inline ConstraintMatrix generate_g(Gaussian& rnd, Eigen::Index p,
                                   Eigen::Index n,
                                   std::optional<Eigen::Index> nnz) {
  if (!nnz) {
    DenseMatrix g(p, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < p; ++i) g(i, j) = rnd();
    }
    return ConstraintMatrix(std::move(g));
  }
  const Eigen::Index per_row = std::clamp<Eigen::Index>(*nnz, 1, n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(p * per_row));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < p; ++i) {
    cols.clear();
    while (static_cast<Eigen::Index>(cols.size()) < per_row) {
      const Eigen::Index c = rnd.index(n);
      if (std::find(cols.begin(), cols.end(), c) == cols.end()) {
        cols.push_back(c);
      }
    }
    std::sort(cols.begin(), cols.end());
    for (Eigen::Index c : cols) trip.emplace_back(i, c, rnd());
  }
  SparseMatrix g(p, n);
  g.setFromTriplets(trip.begin(), trip.end());
  return ConstraintMatrix(std::move(g));
}

// A point of int(K) at distance >= 1 from its boundary (zero cone: 0).
inline Vector interior_point(Gaussian& rnd, const Cone& cone) {
  const Eigen::Index p = cone.dim;
  Vector s(p);
  switch (cone.kind) {
    case ConeKind::kZero:
      return Vector::Zero(p);
    case ConeKind::kNonneg:
      for (Eigen::Index i = 0; i < p; ++i) s[i] = 1.0 + rnd.uniform(0.0, 1.0);
      return s;
    case ConeKind::kNonpos:
      for (Eigen::Index i = 0; i < p; ++i) s[i] = -1.0 - rnd.uniform(0.0, 1.0);
      return s;
    case ConeKind::kSecondOrder: {
      for (Eigen::Index i = 1; i < p; ++i) s[i] = rnd();
      // t - ||z|| = sqrt(2) puts s at distance 1 from the boundary.
      s[0] = s.tail(p - 1).norm() + std::sqrt(2.0);
      return s;
    }
  }
  return s;
}

}  // namespace detail

// Random instance: Q with lambda_min(Q) = 1, Gaussian q, a, b and G, and
// g = s - G u_hat with u_hat in U and s in int(K), so u_hat is a Slater point.
inline ConicProblem generate_random_problem(const GeneratorSpec& spec) {
  const Eigen::Index n = spec.n;
  const Eigen::Index p = spec.rows();
  if (n < 2) throw ConfigError("generator: n must be >= 2");
  if (p < 1) throw ConfigError("generator: p must be >= 1");
  if (!(spec.gamma_abs >= 0.0)) throw ConfigError("generator: gamma_abs must be >= 0");
  if (spec.cone == ConeKind::kSecondOrder && p < 2) {
    throw ConfigError("generator: second-order cone needs p >= 2");
  }
  detail::Gaussian rnd(spec.seed);
  SymmetricForm q_mat = detail::generate_q(rnd, n);
  Vector q = rnd.vector(n);
  ObjectiveOracle obj;
  SimpleSet set = SimpleSet::whole(n);
  Vector u_hat(n);
  switch (spec.family) {
    case ProblemFamily::kNum: {
      Vector a = rnd.vector(n).cwiseAbs();
      obj = ObjectiveOracle::quad_log(std::move(q_mat), std::move(q),
                                      -spec.gamma_abs, std::move(a),
                                      Vector::Zero(n));
      set = SimpleSet::nonneg(n);
      for (Eigen::Index i = 0; i < n; ++i) u_hat[i] = rnd.uniform(0.1, 1.0);
      break;
    }
    case ProblemFamily::kRes: {
      Vector b = rnd.vector(n) / std::sqrt(static_cast<double>(n));
      obj = ObjectiveOracle::quad_log(std::move(q_mat), std::move(q),
                                      spec.gamma_abs, Vector::Zero(n),
                                      std::move(b));
      const double r = spec.box_radius;
      set = SimpleSet::box(Vector::Constant(n, -r), Vector::Constant(n, r));
      for (Eigen::Index i = 0; i < n; ++i) {
        u_hat[i] = rnd.uniform(-0.5 * r, 0.5 * r);
      }
      break;
    }
    case ProblemFamily::kQp:
      obj = ObjectiveOracle::quadratic(std::move(q_mat), std::move(q));
      u_hat = rnd.vector(n);
      break;
  }
  ConstraintMatrix g_mat = detail::generate_g(rnd, p, n, spec.row_nonzeros());
  const Cone cone = spec.cone == ConeKind::kSecondOrder ? Cone::second_order(p)
                                                        : Cone{spec.cone, p};
  Vector g = detail::interior_point(rnd, cone) - g_mat.apply(u_hat);
  return ConicProblem(std::move(obj), std::move(g_mat), std::move(g), cone,
                      std::move(set));
}

// --- Reports -------------------------------------------------------------------

inline std::vector<BoundFamily> default_envelopes(Method m) {
  switch (m) {
    case Method::kDG:
      return {BoundFamily::kDgDualGap, BoundFamily::kDgLastInfeas,
              BoundFamily::kDgAvgInfeas, BoundFamily::kDgAvgSuboptUpper,
              BoundFamily::kDgAvgSuboptLower};
    case Method::kDFG:
      return {BoundFamily::kDfgDualGap, BoundFamily::kDfgLastInfeas,
              BoundFamily::kDfgAvgInfeas, BoundFamily::kDfgAvgSubopt,
              BoundFamily::kDfgLastSubopt};
    case Method::kHybrid:
      return {BoundFamily::kConeHybridInfeas};
    case Method::kRegDFG:
      return {BoundFamily::kRegDfgInfeas};
    case Method::kRDFG:
      return {};
  }
  return {};
}

inline Json optional_json(const std::optional<long>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json optional_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

// JSON-safe double: NaN and infinities become null.
inline Json number_json(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

inline Json config_to_json(const SolverConfig& c) {
  Json j;
  j["method"] = std::string(method_name(c.method));
  j["epsilon"] = c.epsilon;
  j["max_iter"] = c.max_iter;
  j["inner_tol"] = c.inner_tol;
  j["recovery"] = std::string(recovery_name(c.recovery));
  j["stop_rule"] = c.stop_rule == StopRule::kBoth ? "both" : "either";
  j["use_stopping_rule"] = c.use_stopping_rule;
  j["alpha"] = optional_json(c.alpha);
  j["lipschitz_g"] = optional_json(c.lipschitz_g);
  j["restart_interval"] = optional_json(c.restart_interval);
  j["restart_contraction"] = c.restart_contraction;
  j["kappa"] = optional_json(c.kappa);
  j["adaptive_restart"] = c.adaptive_restart;
  j["f_star"] = optional_json(c.f_star);
  j["delta"] = optional_json(c.delta);
  j["dual_radius"] = optional_json(c.dual_radius);
  j["hybrid_k"] = c.hybrid_k;
  j["x0"] = c.x0 ? detail::vector_to_json(*c.x0) : Json(nullptr);
  return j;
}

inline Json envelope_to_json(const BoundEnvelope& e) {
  Json j;
  j["name"] = e.name;
  j["checked"] = e.k.size();
  j["violated_at"] = optional_json(e.violated_at);
  j["ok"] = e.ok();
  return j;
}

// Report for one solver run. `reference` enables suboptimality certificates
// and envelope checks.
inline Json make_run_report(const ConicProblem& prob, const SolverConfig& cfg,
                            const RunResult& run,
                            const std::optional<ReferenceSolution>& reference,
                            const std::string& trace_path = {}) {
  Json j;
  j["config"] = config_to_json(cfg);
  j["problem"] = {{"n", prob.n()},
                  {"p", prob.p()},
                  {"cone", std::string(cone_kind_name(prob.cone().kind))},
                  {"set", std::string(set_kind_name(prob.set().kind))}};
  j["termination"] = std::string(termination_name(run.termination));
  j["converged"] = run.converged();
  j["stopping"] = {{"rule", cfg.stop_rule == StopRule::kBoth ? "ds and pf"
                                                               : "ds or pf"},
                   {"ds_threshold", cfg.epsilon * cfg.epsilon},
                   {"pf_threshold", cfg.epsilon}};
  j["iterations"] = run.trace.rows.empty() ? 0 : run.trace.rows.back().k;
  j["iterations_to_stop"] = {{"last", optional_json(run.stop_last)},
                             {"avg", optional_json(run.stop_avg)}};
  j["lipschitz_dual"] = run.lipschitz_dual;
  j["lipschitz_g"] = run.lipschitz_g;
  if (run.restart_interval > 0) j["restart_interval"] = run.restart_interval;
  j["restarts"] = run.state.restart_count;
  if (run.delta) j["delta"] = *run.delta;
  if (run.regularized_budget) j["regularized_budget"] = *run.regularized_budget;
  if (run.dual_radius_estimate) {
    j["dual_radius_estimate"] = *run.dual_radius_estimate;
  }
  if (!run.trace.rows.empty()) {
    const auto& last = run.trace.rows.back();
    Json cert;
    cert["d"] = last.d;
    cert["infeas_last"] = last.infeas_last;
    cert["infeas_avg"] = last.infeas_avg;
    cert["f_last"] = last.f_last;
    cert["f_avg"] = last.f_avg;
    cert["subopt_last"] = number_json(last.subopt_last);
    cert["subopt_avg"] = number_json(last.subopt_avg);
    cert["gradmap_norm"] = last.gradmap_norm;
    j["certificates"] = std::move(cert);
  }
  if (!run.trace.epochs.empty()) {
    Json ep = Json::array();
    for (const auto& e : run.trace.epochs) {
      ep.push_back({{"epoch", e.epoch},
                    {"start_k", e.start_k},
                    {"end_k", e.end_k},
                    {"d_start", e.d_start},
                    {"d_end", e.d_end}});
    }
    j["epochs"] = std::move(ep);
  }
  Json envs = Json::array();
  if (reference) {
    const auto& ref = *reference;
    j["reference"] = {{"f_star", ref.f_star},
                      {"dual_radius", ref.dual_radius},
                      {"source", std::string(reference_source_name(ref.source))},
                      {"approximate", ref.approximate},
                      {"kkt_residual", ref.residuals.max()}};
    const Vector x0 = cfg.x0 ? *cfg.x0 : Vector::Zero(prob.p());
    BoundConstants consts =
        bound_constants(run, ref, x0, prob.objective().sigma_f());
    consts.epsilon = cfg.epsilon;
    for (BoundFamily f : default_envelopes(run.trace.method)) {
      try {
        envs.push_back(envelope_to_json(check_envelope(run.trace, f, consts)));
      } catch (const ConfigError& e) {
        envs.push_back({{"name", std::string(bound_family_name(f))},
                        {"error", e.what()}});
      }
    }
  }
  j["envelopes"] = std::move(envs);
  if (!trace_path.empty()) j["trace_path"] = trace_path;
  return j;
}

// --- Experiments ------------------------------------------------------------------

struct ExperimentConfig {
  std::vector<ProblemFamily> families{ProblemFamily::kNum};
  Eigen::Index n = 50;
  Eigen::Index p = 0;
  ConeKind cone = ConeKind::kNonpos;
  std::optional<Eigen::Index> sparsity;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<Method> methods{Method::kDG, Method::kDFG};
  // Method is set per run; recovery defaults to both so every run reports
  // iterations-to-stop for the last iterate and the average.
  SolverConfig solver = [] {
    SolverConfig s;
    s.recovery = Recovery::kBoth;
    return s;
  }();
  std::string trace_dir;  // empty: no trace files
  int jobs = 1;
};

struct ExperimentRun {
  ProblemFamily family = ProblemFamily::kNum;
  std::uint64_t seed = 0;
  Method method = Method::kDG;
  std::optional<long> stop_last;
  std::optional<long> stop_avg;
  long iterations = 0;
  Termination termination = Termination::kMaxIter;
  double infeas_last = 0.0;
  double infeas_avg = 0.0;
  std::string error;
  std::string trace_path;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentRun> runs;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

// "1-10" or "1,2,5".
inline std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  for (const auto& tok : split_list(s)) {
    const auto dash = tok.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const auto lo = std::stoull(tok.substr(0, dash));
        const auto hi = std::stoull(tok.substr(dash + 1));
        if (hi < lo) throw ConfigError("seed range '" + tok + "' is empty");
        for (auto v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(std::stoull(tok));
      }
    } catch (const std::logic_error&) {
      throw ConfigError("bad seed list entry '" + tok + "'");
    }
  }
  return out;
}

}  // namespace detail

// Keys: families, n, p, cone, sparsity, seeds, methods, trace_dir, jobs, plus
// every solver key accepted by apply_solver_keys.
inline ExperimentConfig experiment_config_from(const KeyValues& kv) {
  ExperimentConfig cfg;
  const auto used = apply_solver_keys(kv, cfg.solver);
  for (const auto& [key, value] : kv) {
    if (std::find(used.begin(), used.end(), key) != used.end()) continue;
    if (key == "families" || key == "family") {
      cfg.families.clear();
      for (const auto& f : detail::split_list(value)) {
        cfg.families.push_back(parse_family(f));
      }
    } else if (key == "n") {
      cfg.n = detail::kv_long(key, value);
    } else if (key == "p") {
      cfg.p = detail::kv_long(key, value);
    } else if (key == "cone") {
      cfg.cone = parse_cone_kind(value);
    } else if (key == "sparsity") {
      cfg.sparsity = detail::kv_long(key, value);
    } else if (key == "seeds") {
      cfg.seeds = detail::parse_seeds(value);
    } else if (key == "methods") {
      cfg.methods.clear();
      for (const auto& m : detail::split_list(value)) {
        cfg.methods.push_back(parse_method(m));
      }
    } else if (key == "trace_dir") {
      cfg.trace_dir = value;
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(detail::kv_long(key, value));
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (cfg.families.empty() || cfg.seeds.empty() || cfg.methods.empty()) {
    throw ConfigError("experiment needs families, seeds and methods");
  }
  return cfg;
}

// Runs every (family, seed, method) combination. Solver errors are recorded
// in the run entry; they do not abort the batch.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  struct Task {
    ProblemFamily family;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (auto f : cfg.families) {
    for (auto s : cfg.seeds) tasks.push_back({f, s});
  }
  ExperimentReport report;
  report.config = cfg;
  report.runs.resize(tasks.size() * cfg.methods.size());

  auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    GeneratorSpec gs;
    gs.n = cfg.n;
    gs.p = cfg.p;
    gs.family = task.family;
    gs.cone = cfg.cone;
    gs.sparsity = cfg.sparsity;
    gs.seed = task.seed;
    std::optional<ConicProblem> prob;
    std::optional<DualOracle> oracle;
    std::string setup_error;
    try {
      prob = generate_random_problem(gs);
      oracle.emplace(*prob, cfg.solver.inner_tol);
    } catch (const Error& e) {
      setup_error = e.what();
    }
    for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
      ExperimentRun& out = report.runs[t * cfg.methods.size() + m];
      out.family = task.family;
      out.seed = task.seed;
      out.method = cfg.methods[m];
      if (!oracle) {
        out.error = setup_error;
        continue;
      }
      try {
        SolverConfig sc = cfg.solver;
        sc.method = cfg.methods[m];
        const RunResult r = run(*oracle, sc);
        out.stop_last = r.stop_last;
        out.stop_avg = r.stop_avg;
        out.termination = r.termination;
        if (!r.trace.rows.empty()) {
          out.iterations = r.trace.rows.back().k;
          out.infeas_last = r.trace.rows.back().infeas_last;
          out.infeas_avg = r.trace.rows.back().infeas_avg;
        }
        if (!cfg.trace_dir.empty()) {
          out.trace_path = cfg.trace_dir + "/" +
                           std::string(family_name(task.family)) + "_n" +
                           std::to_string(cfg.n) + "_s" +
                           std::to_string(task.seed) + "_" +
                           std::string(method_name(sc.method)) + ".csv";
          save_trace_csv(out.trace_path, r.trace);
        }
      } catch (const Error& e) {
        out.error = e.what();
      }
    }
  };

  const int jobs = std::max(1, cfg.jobs);
  if (jobs == 1 || tasks.size() < 2) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++) run_task(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  return report;
}

// Mean iterations-to-stop over converged runs, per (family, method,
// recovery).
inline Json experiment_table(const ExperimentReport& rep) {
  Json rows = Json::array();
  for (auto fam : rep.config.families) {
    Json row;
    row["family"] = std::string(family_name(fam));
    row["n"] = rep.config.n;
    for (auto m : rep.config.methods) {
      for (bool last : {true, false}) {
        double sum = 0.0;
        long count = 0;
        for (const auto& r : rep.runs) {
          if (r.family != fam || r.method != m) continue;
          const auto& v = last ? r.stop_last : r.stop_avg;
          if (v) {
            sum += static_cast<double>(*v);
            ++count;
          }
        }
        const std::string key = std::string("k_") + (last ? "last" : "avg") +
                                "_" + std::string(method_name(m));
        row[key] = count > 0 ? Json(sum / static_cast<double>(count))
                             : Json(nullptr);
        row[key + "_converged"] = count;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json experiment_report_json(const ExperimentReport& rep) {
  Json j;
  const auto& c = rep.config;
  Json cfg = config_to_json(c.solver);
  cfg.erase("method");
  Json fams = Json::array();
  for (auto f : c.families) fams.push_back(std::string(family_name(f)));
  Json meths = Json::array();
  for (auto m : c.methods) meths.push_back(std::string(method_name(m)));
  cfg["families"] = std::move(fams);
  cfg["methods"] = std::move(meths);
  cfg["n"] = c.n;
  cfg["p"] = c.p > 0 ? c.p : (3 * c.n) / 2;
  cfg["cone"] = std::string(cone_kind_name(c.cone));
  cfg["sparsity"] = c.sparsity ? Json(*c.sparsity) : Json(nullptr);
  cfg["seeds"] = c.seeds;
  j["config"] = std::move(cfg);
  Json runs = Json::array();
  bool all_converged = true;
  for (const auto& r : rep.runs) {
    Json e;
    e["family"] = std::string(family_name(r.family));
    e["seed"] = r.seed;
    e["method"] = std::string(method_name(r.method));
    e["iterations_to_stop"] = {{"last", optional_json(r.stop_last)},
                               {"avg", optional_json(r.stop_avg)}};
    e["iterations"] = r.iterations;
    e["termination"] = std::string(termination_name(r.termination));
    e["converged"] = r.error.empty() && r.termination != Termination::kMaxIter;
    e["infeas_last"] = r.infeas_last;
    e["infeas_avg"] = r.infeas_avg;
    if (!r.error.empty()) e["error"] = r.error;
    if (!r.trace_path.empty()) e["trace_path"] = r.trace_path;
    all_converged = all_converged && e["converged"].get<bool>();
    runs.push_back(std::move(e));
  }
  j["runs"] = std::move(runs);
  j["table"] = experiment_table(rep);
  j["all_converged"] = all_converged;
  return j;
}

}  // namespace dfo

#endif  // DFO_BENCH_HPP
