#ifndef DFO_METHODS_HPP
#define DFO_METHODS_HPP

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dfo/cones.hpp"
#include "dfo/errors.hpp"
#include "dfo/inner.hpp"
#include "dfo/model.hpp"

namespace dfo {

enum class Method { kDG, kDFG, kRDFG, kRegDFG, kHybrid };
enum class Recovery { kLast, kAverage, kBoth };
enum class StopRule { kBoth, kEither };
enum class StopVerdict { kContinue, kStopDs, kStopPf, kStopBoth };
enum class Termination { kConverged, kMaxIter, kCompleted };
enum class Phase { kDG, kDFG };

inline std::string_view method_name(Method m) {
  switch (m) {
    case Method::kDG:
      return "DG";
    case Method::kDFG:
      return "DFG";
    case Method::kRDFG:
      return "RDFG";
    case Method::kRegDFG:
      return "RegDFG";
    case Method::kHybrid:
      return "Hybrid";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "DG" || s == "dg") return Method::kDG;
  if (s == "DFG" || s == "dfg") return Method::kDFG;
  if (s == "RDFG" || s == "rdfg" || s == "R-DFG") return Method::kRDFG;
  if (s == "RegDFG" || s == "regdfg") return Method::kRegDFG;
  if (s == "Hybrid" || s == "hybrid") return Method::kHybrid;
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

inline std::string_view recovery_name(Recovery r) {
  switch (r) {
    case Recovery::kLast:
      return "last";
    case Recovery::kAverage:
      return "avg";
    case Recovery::kBoth:
      return "both";
  }
  return "?";
}

inline Recovery parse_recovery(std::string_view s) {
  if (s == "last") return Recovery::kLast;
  if (s == "avg" || s == "average") return Recovery::kAverage;
  if (s == "both") return Recovery::kBoth;
  throw ConfigError("unknown recovery '" + std::string(s) + "'");
}

inline std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::kConverged:
      return "converged";
    case Termination::kMaxIter:
      return "max_iter";
    case Termination::kCompleted:
      return "completed";
  }
  return "?";
}

struct SolverConfig {
  Method method = Method::kDFG;
  // DG step size. Unset: 1/L_d. With lipschitz_g set and no alpha, DG
  // alternates between 1/L_G (even k) and 1/L_d (odd k).
  std::optional<double> alpha;
  std::optional<double> lipschitz_g;
  double epsilon = 1e-2;
  long max_iter = 15000;
  double inner_tol = kDefaultInnerTol;
  bool use_stopping_rule = true;
  // Which recovered primal point(s) must pass the stopping test.
  Recovery recovery = Recovery::kLast;
  StopRule stop_rule = StopRule::kBoth;
  // R-DFG.
  std::optional<long> restart_interval;
  double restart_contraction = 1.0 / 2.718281828459045;
  std::optional<double> kappa;
  bool adaptive_restart = false;
  std::optional<double> f_star;
  // Regularized DFG.
  std::optional<double> delta;
  std::optional<double> dual_radius;  // user estimate of R_d
  bool stop_at_budget = false;
  // Hybrid DFG -> DG.
  long hybrid_k = 0;
  std::optional<Vector> x0;
};

// Optional high-accuracy solution used to fill the suboptimality columns.
struct TraceReference {
  double f_star = 0.0;
  Vector x_star;
  Vector u_star;
};

struct IterationRow {
  long k = 0;
  double d = 0.0;
  double grad_norm = 0.0;
  double gradmap_norm = 0.0;
  double infeas_last = 0.0;
  double subopt_last = std::numeric_limits<double>::quiet_NaN();
  double infeas_avg = 0.0;
  double subopt_avg = std::numeric_limits<double>::quiet_NaN();
  double dist_x0 = 0.0;
  std::int64_t wall_ns = 0;
  // Not part of the CSV schema.
  double f_last = 0.0;
  double f_avg = 0.0;
  double d_delta = std::numeric_limits<double>::quiet_NaN();
  double dist_xstar = std::numeric_limits<double>::quiet_NaN();
  double dist_ustar_last = std::numeric_limits<double>::quiet_NaN();
  double dist_ustar_avg = std::numeric_limits<double>::quiet_NaN();
  Phase phase = Phase::kDG;
  int epoch = 0;
};

struct EpochRecord {
  int epoch = 0;
  long start_k = 0;
  long end_k = 0;
  double d_start = 0.0;
  double d_end = 0.0;
};

struct IterationTrace {
  Method method = Method::kDG;
  std::vector<IterationRow> rows;
  std::vector<EpochRecord> epochs;  // R-DFG only
};

struct DualMethodState {
  long k = 0;
  Vector x;       // x^k
  Vector x_prev;  // x^{k-1}
  Vector y;       // next extrapolated point (y^{k+1}); DG keeps y = x
  double theta = 0.0;       // theta_k
  double theta_prev = 0.0;  // theta_{k-1}
  Vector w;       // x^{k-1} + theta_k (x^k - x^{k-1})
  double s_alpha = 0.0;  // sum of alpha_j
  double s_theta = 0.0;  // sum of theta_j
  Vector avg_u;   // weighted primal average
  Vector last_u;  // u^k
  int restart_count = 0;

  static DualMethodState start(const Vector& x0) {
    DualMethodState s;
    s.x = x0;
    s.x_prev = x0;
    s.y = x0;
    s.w = x0;
    return s;
  }
};

// Extra information attached to every row k >= 1 for observers: the point
// where the dual gradient was taken to produce x^k and the oracle values
// there.
struct StepDetail {
  Vector y;
  double d_y = 0.0;
  Vector grad_y;
  double alpha = 0.0;  // step size used to reach x^k
  double theta = 0.0;  // theta_k (DFG phases)
};

using StepObserver = std::function<void(const IterationRow&,
                                        const DualMethodState&,
                                        const StepDetail*)>;

struct RunOptions {
  std::optional<TraceReference> reference;
  StepObserver observer;
};

struct RunResult {
  IterationTrace trace;
  DualMethodState state;
  Termination termination = Termination::kMaxIter;
  std::optional<long> stop_last;  // iterations-to-stop, last iterate
  std::optional<long> stop_avg;   // iterations-to-stop, average
  double lipschitz_dual = 0.0;
  double lipschitz_g = 0.0;       // L_G entering the DG bounds
  long restart_interval = 0;      // R-DFG (0: adaptive only)
  std::optional<double> delta;    // RegDFG
  std::optional<double> dual_radius_estimate;
  std::optional<double> regularized_budget;

  bool converged() const { return termination != Termination::kMaxIter; }
};

inline double theta_next(double theta) {
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
}

// Streaming weighted average: (S avg + w u) / (S + w). With S + w = 0 the
// average stays at its current (zero) value.
inline std::pair<Vector, double> update_weighted_average(const Vector& avg,
                                                         double s,
                                                         const Vector& u,
                                                         double weight) {
  Vector base = avg.size() == u.size() ? avg : Vector::Zero(u.size());
  const double total = s + weight;
  if (total <= 0.0) return {base, total};
  return {(s / total) * base + (weight / total) * u, total};
}

// ds = |d(x^{k+1}) - d(x^k)| <= eps^2 and pf = dist_K(G w + g) <= eps.
inline StopVerdict stopping_check(double ds, double pf, double epsilon,
                                  StopRule rule = StopRule::kBoth) {
  const bool ds_ok = ds <= epsilon * epsilon;
  const bool pf_ok = pf <= epsilon;
  if (ds_ok && pf_ok) return StopVerdict::kStopBoth;
  if (rule == StopRule::kBoth) return StopVerdict::kContinue;
  if (ds_ok) return StopVerdict::kStopDs;
  if (pf_ok) return StopVerdict::kStopPf;
  return StopVerdict::kContinue;
}

inline bool is_stop(StopVerdict v) { return v != StopVerdict::kContinue; }

// K_c = floor(2 kappa / c).
inline long restart_interval_from_kappa(double kappa, double c) {
  if (!(kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (!(c > 0.0 && c < 1.0)) throw ConfigError("restart contraction c must lie in (0,1)");
  return std::max<long>(1, static_cast<long>(std::floor(2.0 * kappa / c)));
}

// k = 2 sqrt((L_d + delta) / delta) log(R_d sqrt(2 (L_d + 2 delta)) / eps).
inline double regularized_budget(double lipschitz, double delta, double radius,
                                 double epsilon) {
  return 2.0 * std::sqrt((lipschitz + delta) / delta) *
         std::log(radius * std::sqrt(2.0 * (lipschitz + 2.0 * delta)) / epsilon);
}

// One projected dual gradient step from an evaluated point:
// x^{k+1} = [x^k + alpha grad d(x^k)]_{K*}, with the alpha-weighted average
// updated by u^k.
inline DualMethodState dg_step(const DualMethodState& s,
                               const DualOracleResult& at_x, const Cone& cone,
                               double alpha) {
  DualMethodState next = s;
  std::tie(next.avg_u, next.s_alpha) =
      update_weighted_average(s.avg_u, s.s_alpha, at_x.u_of_x, alpha);
  next.last_u = at_x.u_of_x;
  next.x_prev = s.x;
  next.x = project_dual_cone(cone, s.x + alpha * at_x.d_grad);
  next.y = next.x;
  next.w = next.x;
  next.k = s.k + 1;
  return next;
}

inline DualMethodState dg_step(const DualMethodState& s,
                               const DualOracle& oracle, double alpha) {
  return dg_step(s, oracle.evaluate(s.x), oracle.problem().cone(), alpha);
}

// One fast-gradient step. `at_y` is the oracle at s.y = y^{k+1}:
//   x^{k+1} = [y^{k+1} + grad d(y^{k+1}) / L_d]_{K*}
//   theta_{k+2} = (1 + sqrt(1 + 4 theta_{k+1}^2)) / 2
//   y^{k+2} = x^{k+1} + (theta_{k+1} - 1) / theta_{k+2} (x^{k+1} - x^k)
// `momentum` overrides (theta_{k+1} - 1) / theta_{k+2} when set; `shift`
// adds an extra gradient term (used for the regularized dual).
inline DualMethodState dfg_step(const DualMethodState& s,
                                const DualOracleResult& at_y, const Cone& cone,
                                double lipschitz,
                                std::optional<double> momentum = std::nullopt,
                                const Vector* grad_shift = nullptr) {
  DualMethodState next = s;
  const double theta = theta_next(s.theta);  // theta_{k+1}
  Vector grad = at_y.d_grad;
  if (grad_shift != nullptr) grad += *grad_shift;
  next.x_prev = s.x;
  next.x = project_dual_cone(cone, s.y + grad / lipschitz);
  next.theta_prev = s.theta;
  next.theta = theta;
  next.w = s.x + theta * (next.x - s.x);
  std::tie(next.avg_u, next.s_theta) =
      update_weighted_average(s.avg_u, s.s_theta, at_y.u_of_x, theta);
  next.last_u = at_y.u_of_x;
  const double beta =
      momentum ? *momentum : (theta - 1.0) / theta_next(theta);
  next.y = next.x + beta * (next.x - s.x);
  next.k = s.k + 1;
  return next;
}

inline DualMethodState dfg_step(const DualMethodState& s,
                                const DualOracle& oracle, double lipschitz) {
  return dfg_step(s, oracle.evaluate(s.y), oracle.problem().cone(), lipschitz);
}

namespace detail {

using Clock = std::chrono::steady_clock;

// Shared bookkeeping for all runners: row assembly, stopping rule, observer.
class TraceRecorder {
 public:
  TraceRecorder(const DualOracle& oracle, const SolverConfig& config,
                const RunOptions& options, const Vector& x0, Method method)
      : oracle_(oracle),
        config_(config),
        options_(options),
        x0_(x0),
        start_(Clock::now()) {
    trace_.method = method;
  }

  // Appends row k for the current state; `at_x` is the oracle at state.x.
  // Returns true when the stopping rule says to stop.
  bool record(const DualMethodState& state, const DualOracleResult& at_x,
              const Vector& avg_u, Phase phase, int epoch,
              const StepDetail* detail, double d_delta = std::nan("")) {
    const auto& prob = oracle_.problem();
    const double lip = oracle_.lipschitz_dual();
    IterationRow row;
    row.k = state.k;
    row.d = at_x.d_value;
    row.grad_norm = at_x.d_grad.norm();
    row.gradmap_norm =
        lip > 0.0
            ? gradient_map_from(prob.cone(), state.x, at_x.d_grad, lip).map.norm()
            : 0.0;
    row.infeas_last = dist_cone(prob.cone(), -at_x.d_grad);
    row.f_last = objective_value(prob.objective(), at_x.u_of_x);
    row.infeas_avg =
        dist_cone(prob.cone(), prob.G().apply(avg_u) + prob.g());
    row.f_avg = objective_value(prob.objective(), avg_u);
    row.dist_x0 = (state.x - x0_).norm();
    row.phase = phase;
    row.epoch = epoch;
    row.d_delta = d_delta;
    if (options_.reference) {
      const auto& ref = *options_.reference;
      row.subopt_last = row.f_last - ref.f_star;
      row.subopt_avg = row.f_avg - ref.f_star;
      if (ref.x_star.size() == state.x.size()) {
        row.dist_xstar = (state.x - ref.x_star).norm();
      }
      if (ref.u_star.size() == avg_u.size()) {
        row.dist_ustar_last = (at_x.u_of_x - ref.u_star).norm();
        row.dist_ustar_avg = (avg_u - ref.u_star).norm();
      }
    }
    row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      Clock::now() - start_)
                      .count();

    bool stop = false;
    if (!trace_.rows.empty()) {
      const double ds = std::abs(row.d - trace_.rows.back().d);
      if (!stop_last_ &&
          is_stop(stopping_check(ds, row.infeas_last, config_.epsilon,
                                 config_.stop_rule))) {
        stop_last_ = row.k;
      }
      if (!stop_avg_ &&
          is_stop(stopping_check(ds, row.infeas_avg, config_.epsilon,
                                 config_.stop_rule))) {
        stop_avg_ = row.k;
      }
      switch (config_.recovery) {
        case Recovery::kLast:
          stop = stop_last_.has_value();
          break;
        case Recovery::kAverage:
          stop = stop_avg_.has_value();
          break;
        case Recovery::kBoth:
          stop = stop_last_.has_value() && stop_avg_.has_value();
          break;
      }
    }
    trace_.rows.push_back(row);
    if (options_.observer) options_.observer(trace_.rows.back(), state, detail);
    return config_.use_stopping_rule && stop;
  }

  IterationTrace& trace() { return trace_; }
  std::optional<long> stop_last() const { return stop_last_; }
  std::optional<long> stop_avg() const { return stop_avg_; }

 private:
  const DualOracle& oracle_;
  const SolverConfig& config_;
  const RunOptions& options_;
  Vector x0_;
  Clock::time_point start_;
  IterationTrace trace_;
  std::optional<long> stop_last_;
  std::optional<long> stop_avg_;
};

inline Vector resolve_x0(const DualOracle& oracle, const SolverConfig& config) {
  const auto& prob = oracle.problem();
  Vector x0 = config.x0 ? *config.x0 : Vector::Zero(prob.p());
  if (x0.size() != prob.p()) {
    throw ConfigError("x0 has length " + std::to_string(x0.size()) +
                      ", expected " + std::to_string(prob.p()));
  }
  const double outside = dist_dual_cone(prob.cone(), x0);
  if (outside > kDualFeasibilityTol) {
    throw ConfigError("x0 lies " + std::to_string(outside) +
                      " outside the dual cone");
  }
  return x0;
}

inline void check_common(const SolverConfig& config) {
  if (!(config.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (config.max_iter < 0) throw ConfigError("max_iter must be >= 0");
}

struct DgSchedule {
  double l_d;
  std::optional<double> alpha;
  std::optional<double> l_g;

  double at(long k) const {
    if (alpha) return *alpha;
    if (l_g && k % 2 == 0) return 1.0 / *l_g;
    return 1.0 / l_d;
  }
  double effective_l_g() const {
    if (l_g) return *l_g;
    if (alpha) return 1.0 / *alpha;
    return l_d;
  }
};

inline DgSchedule make_schedule(const SolverConfig& config, double l_d) {
  DgSchedule sch{l_d, config.alpha, config.lipschitz_g};
  const double slack = 1e-12;
  if (config.lipschitz_g && *config.lipschitz_g < l_d * (1.0 - slack)) {
    throw ConfigError("L_G must satisfy L_G >= L_d");
  }
  if (config.alpha) {
    const double a = *config.alpha;
    if (!(a > 0.0) || a * l_d > 1.0 + slack) {
      throw ConfigError("DG step size must satisfy 0 < alpha <= 1/L_d");
    }
    if (config.lipschitz_g && a < (1.0 - slack) / *config.lipschitz_g) {
      throw ConfigError("DG step size must satisfy alpha >= 1/L_G");
    }
  }
  return sch;
}

// Plain DG loop starting from an already evaluated state. Rows are emitted
// for every new iterate; returns true when stopped by the rule.
inline bool dg_loop(const DualOracle& oracle, const DgSchedule& schedule,
                    DualMethodState& state, DualOracleResult& at_x,
                    long last_k, TraceRecorder& rec, Phase phase) {
  const Cone& cone = oracle.problem().cone();
  while (state.k < last_k) {
    const double alpha = schedule.at(state.k);
    StepDetail detail{state.x, at_x.d_value, at_x.d_grad, alpha, 0.0};
    DualMethodState next = dg_step(state, at_x, cone, alpha);
    DualOracleResult next_eval = oracle.evaluate(next.x, &at_x.u_of_x);
    // The average at row k includes u^k with weight alpha_k.
    auto [avg, s_alpha] = update_weighted_average(
        next.avg_u, next.s_alpha, next_eval.u_of_x, schedule.at(next.k));
    state = std::move(next);
    at_x = std::move(next_eval);
    if (rec.record(state, at_x, avg, phase, 0, &detail)) return true;
  }
  return false;
}

}  // namespace detail

inline RunResult run_dg(const DualOracle& oracle, const SolverConfig& config,
                        const RunOptions& options = {}) {
  detail::check_common(config);
  const double l_d = oracle.lipschitz_dual();
  const auto schedule = detail::make_schedule(config, l_d);
  const Vector x0 = detail::resolve_x0(oracle, config);
  detail::TraceRecorder rec(oracle, config, options, x0, Method::kDG);

  DualMethodState state = DualMethodState::start(x0);
  DualOracleResult at_x = oracle.evaluate(x0);
  auto [avg0, s0] = update_weighted_average(state.avg_u, state.s_alpha,
                                            at_x.u_of_x, schedule.at(0));
  rec.record(state, at_x, avg0, Phase::kDG, 0, nullptr);
  const bool stopped = detail::dg_loop(oracle, schedule, state, at_x,
                                       config.max_iter, rec, Phase::kDG);
  // Fold u^K into the accumulators so the returned state matches the last row.
  std::tie(state.avg_u, state.s_alpha) = update_weighted_average(
      state.avg_u, state.s_alpha, at_x.u_of_x, schedule.at(state.k));
  state.last_u = at_x.u_of_x;

  RunResult out;
  out.trace = std::move(rec.trace());
  out.state = std::move(state);
  out.termination = stopped ? Termination::kConverged : Termination::kMaxIter;
  out.stop_last = rec.stop_last();
  out.stop_avg = rec.stop_avg();
  out.lipschitz_dual = l_d;
  out.lipschitz_g = schedule.effective_l_g();
  return out;
}

namespace detail {

// Fast-gradient epoch from `state` (which must satisfy y = x, theta = 0 at
// the epoch start). Runs until `last_k`, the restart predicate fires, or the
// stopping rule fires. Returns true when stopped by the rule.
struct DfgEpochOptions {
  std::optional<double> momentum;  // constant momentum (regularized dual)
  double delta = 0.0;              // regularization weight
  const Vector* center = nullptr;  // regularization center x^0
  std::function<bool(const IterationRow&)> restart;
  int epoch = 0;
  Phase phase = Phase::kDFG;
};

inline bool dfg_epoch(const DualOracle& oracle, double lipschitz,
                      DualMethodState& state, DualOracleResult& at_x,
                      DualOracleResult& at_y_cache, long last_k,
                      TraceRecorder& rec, const DfgEpochOptions& opt,
                      bool* restarted) {
  const Cone& cone = oracle.problem().cone();
  *restarted = false;
  const double step_lip = lipschitz + opt.delta;
  while (state.k < last_k) {
    // Oracle at y^{k+1}; at an epoch start y = x so it is already known.
    DualOracleResult at_y =
        (state.y.size() == state.x.size() && state.theta == 0.0)
            ? at_x
            : oracle.evaluate(state.y, &at_y_cache.u_of_x);
    Vector shift;
    const Vector* shift_ptr = nullptr;
    if (opt.delta > 0.0) {
      shift = -opt.delta * (state.y - *opt.center);
      shift_ptr = &shift;
    }
    StepDetail detail{state.y, at_y.d_value, at_y.d_grad, 1.0 / step_lip,
                      theta_next(state.theta)};
    if (shift_ptr != nullptr) detail.grad_y += shift;
    DualMethodState next =
        dfg_step(state, at_y, cone, step_lip, opt.momentum, shift_ptr);
    DualOracleResult next_eval = oracle.evaluate(next.x, &at_y.u_of_x);
    at_y_cache = std::move(at_y);
    state = std::move(next);
    at_x = std::move(next_eval);
    double d_delta = std::nan("");
    if (opt.delta > 0.0) {
      d_delta = at_x.d_value -
                0.5 * opt.delta * (state.x - *opt.center).squaredNorm();
    }
    if (rec.record(state, at_x, state.avg_u, opt.phase, opt.epoch, &detail,
                   d_delta)) {
      return true;
    }
    if (opt.restart && opt.restart(rec.trace().rows.back())) {
      *restarted = true;
      return false;
    }
  }
  return false;
}

inline void restart_state(DualMethodState& s) {
  s.x_prev = s.x;
  s.y = s.x;
  s.w = s.x;
  s.theta = 0.0;
  s.theta_prev = 0.0;
  s.s_theta = 0.0;
  s.avg_u = Vector();
  s.restart_count += 1;
}

}  // namespace detail

inline RunResult run_dfg(const DualOracle& oracle, const SolverConfig& config,
                         const RunOptions& options = {}) {
  detail::check_common(config);
  const double l_d = oracle.lipschitz_dual();
  const Vector x0 = detail::resolve_x0(oracle, config);
  detail::TraceRecorder rec(oracle, config, options, x0, Method::kDFG);

  DualMethodState state = DualMethodState::start(x0);
  DualOracleResult at_x = oracle.evaluate(x0);
  DualOracleResult at_y = at_x;
  // theta_0 = 0, so the average is empty at k = 0; the row reports u(x^0).
  rec.record(state, at_x, at_x.u_of_x, Phase::kDFG, 0, nullptr);
  bool restarted = false;
  const bool stopped =
      detail::dfg_epoch(oracle, l_d, state, at_x, at_y, config.max_iter, rec,
                        {}, &restarted);
  RunResult out;
  out.trace = std::move(rec.trace());
  out.state = std::move(state);
  out.termination = stopped ? Termination::kConverged : Termination::kMaxIter;
  out.stop_last = rec.stop_last();
  out.stop_avg = rec.stop_avg();
  out.lipschitz_dual = l_d;
  out.lipschitz_g = l_d;
  return out;
}

// Restarted fast gradient. Each epoch runs DFG from x^{0,j} until K_c
// iterations have passed or, in adaptive mode, until
// f* - d(x^{k,j}) <= c^2 (f* - d(x^{0,j})). The theta-weighted average is
// reset at every restart.
inline RunResult run_rdfg(const DualOracle& oracle, const SolverConfig& config,
                          const RunOptions& options = {}) {
  detail::check_common(config);
  const double c = config.restart_contraction;
  if (!(c > 0.0 && c < 1.0)) {
    throw ConfigError("restart contraction c must lie in (0,1)");
  }
  long interval = 0;
  if (config.restart_interval) {
    if (*config.restart_interval < 1) {
      throw ConfigError("restart interval must be >= 1");
    }
    interval = *config.restart_interval;
  } else if (config.kappa) {
    interval = restart_interval_from_kappa(*config.kappa, c);
  }
  std::optional<double> f_star = config.f_star;
  if (!f_star && options.reference) f_star = options.reference->f_star;
  if (config.adaptive_restart && !config.f_star) {
    throw ConfigError("adaptive R-DFG restart requires f_star");
  }
  if (!config.adaptive_restart && interval == 0) {
    throw ConfigError(
        "R-DFG needs a restart interval, kappa, or adaptive mode with f_star");
  }

  const double l_d = oracle.lipschitz_dual();
  const Vector x0 = detail::resolve_x0(oracle, config);
  detail::TraceRecorder rec(oracle, config, options, x0, Method::kRDFG);

  DualMethodState state = DualMethodState::start(x0);
  DualOracleResult at_x = oracle.evaluate(x0);
  DualOracleResult at_y = at_x;
  rec.record(state, at_x, at_x.u_of_x, Phase::kDFG, 0, nullptr);

  bool stopped = false;
  int epoch = 0;
  std::vector<EpochRecord> epochs;
  while (!stopped && state.k < config.max_iter) {
    EpochRecord er;
    er.epoch = epoch;
    er.start_k = state.k;
    er.d_start = at_x.d_value;
    const long epoch_end =
        interval > 0 ? std::min(config.max_iter, state.k + interval)
                     : config.max_iter;
    detail::DfgEpochOptions opt;
    opt.epoch = epoch;
    if (config.adaptive_restart) {
      const double target_ratio = c * c;
      const double fs = *config.f_star;
      const double gap0 = fs - er.d_start;
      opt.restart = [=](const IterationRow& row) {
        return fs - row.d <= target_ratio * gap0;
      };
    }
    bool restarted = false;
    stopped = detail::dfg_epoch(oracle, l_d, state, at_x, at_y, epoch_end, rec,
                                opt, &restarted);
    er.end_k = state.k;
    er.d_end = at_x.d_value;
    epochs.push_back(er);
    if (!stopped && state.k < config.max_iter) {
      detail::restart_state(state);
      ++epoch;
    }
  }
  RunResult out;
  out.trace = std::move(rec.trace());
  out.trace.epochs = std::move(epochs);
  out.state = std::move(state);
  out.termination = stopped ? Termination::kConverged : Termination::kMaxIter;
  out.stop_last = rec.stop_last();
  out.stop_avg = rec.stop_avg();
  out.lipschitz_dual = l_d;
  out.lipschitz_g = l_d;
  out.restart_interval = interval;
  return out;
}

// Fast gradient on d_delta(x) = d(x) - delta/2 ||x - x^0||^2 with constant
// momentum (sqrt(L_d + delta) - sqrt(delta)) / (sqrt(L_d + delta) + sqrt(delta)).
// Primal recovery v^k = u(x^k).
inline RunResult run_regularized_dfg(const DualOracle& oracle,
                                     const SolverConfig& config,
                                     const RunOptions& options = {}) {
  detail::check_common(config);
  const double l_d = oracle.lipschitz_dual();
  const Vector x0 = detail::resolve_x0(oracle, config);

  double radius = 0.0;
  std::optional<double> radius_estimate;
  double delta = 0.0;
  if (config.delta) {
    delta = *config.delta;
    if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  }
  if (config.dual_radius) {
    radius = *config.dual_radius;
  } else {
    // Cheap DFG pre-run: R_d ~ ||x^0 - x^200||.
    SolverConfig pre = config;
    pre.method = Method::kDFG;
    pre.max_iter = 200;
    pre.use_stopping_rule = false;
    const RunResult pr = run_dfg(oracle, pre);
    radius = (pr.state.x - x0).norm();
    radius_estimate = radius;
  }
  if (!(radius > 1e-12)) radius = 1.0;
  if (!config.delta) delta = config.epsilon / (radius * radius);

  const double budget = regularized_budget(l_d, delta, radius, config.epsilon);
  long max_iter = config.max_iter;
  if (config.stop_at_budget) {
    max_iter = std::min<long>(max_iter,
                              static_cast<long>(std::ceil(std::max(0.0, budget))));
  }

  detail::TraceRecorder rec(oracle, config, options, x0, Method::kRegDFG);
  DualMethodState state = DualMethodState::start(x0);
  DualOracleResult at_x = oracle.evaluate(x0);
  DualOracleResult at_y = at_x;
  rec.record(state, at_x, at_x.u_of_x, Phase::kDFG, 0, nullptr, at_x.d_value);

  detail::DfgEpochOptions opt;
  const double l_reg = l_d + delta;
  opt.momentum = (std::sqrt(l_reg) - std::sqrt(delta)) /
                 (std::sqrt(l_reg) + std::sqrt(delta));
  opt.delta = delta;
  opt.center = &x0;
  bool restarted = false;
  const bool stopped = detail::dfg_epoch(oracle, l_d, state, at_x, at_y,
                                         max_iter, rec, opt, &restarted);
  RunResult out;
  out.trace = std::move(rec.trace());
  out.state = std::move(state);
  if (stopped) {
    out.termination = Termination::kConverged;
  } else if (config.stop_at_budget && max_iter < config.max_iter) {
    out.termination = Termination::kCompleted;
  } else {
    out.termination = Termination::kMaxIter;
  }
  out.stop_last = rec.stop_last();
  out.stop_avg = rec.stop_avg();
  out.lipschitz_dual = l_d;
  out.lipschitz_g = l_d;
  out.delta = delta;
  out.dual_radius_estimate = radius_estimate;
  out.regularized_budget = budget;
  return out;
}

// k steps of DFG, then k steps of DG (alpha = 1/L_d) started from x^k.
// Averages restart at the phase switch.
inline RunResult run_hybrid(const DualOracle& oracle,
                            const SolverConfig& config,
                            const RunOptions& options = {}) {
  detail::check_common(config);
  if (config.hybrid_k < 1) throw ConfigError("hybrid split k must be >= 1");
  const double l_d = oracle.lipschitz_dual();
  const Vector x0 = detail::resolve_x0(oracle, config);
  detail::TraceRecorder rec(oracle, config, options, x0, Method::kHybrid);

  const long split = std::min(config.hybrid_k, config.max_iter);
  const long total = std::min(2 * config.hybrid_k, config.max_iter);

  DualMethodState state = DualMethodState::start(x0);
  DualOracleResult at_x = oracle.evaluate(x0);
  DualOracleResult at_y = at_x;
  rec.record(state, at_x, at_x.u_of_x, Phase::kDFG, 0, nullptr);
  bool restarted = false;
  bool stopped = detail::dfg_epoch(oracle, l_d, state, at_x, at_y, split, rec,
                                   {}, &restarted);
  if (!stopped) {
    // Hand x^k to DG.
    const long k = state.k;
    DualMethodState dg = DualMethodState::start(state.x);
    dg.k = k;
    dg.x_prev = state.x_prev;
    const detail::DgSchedule schedule{l_d, std::nullopt, std::nullopt};
    stopped = detail::dg_loop(oracle, schedule, dg, at_x, total, rec,
                              Phase::kDG);
    state = std::move(dg);
    state.last_u = at_x.u_of_x;
  }
  RunResult out;
  out.trace = std::move(rec.trace());
  out.state = std::move(state);
  if (stopped) {
    out.termination = Termination::kConverged;
  } else if (total == 2 * config.hybrid_k) {
    out.termination = Termination::kCompleted;
  } else {
    out.termination = Termination::kMaxIter;
  }
  out.stop_last = rec.stop_last();
  out.stop_avg = rec.stop_avg();
  out.lipschitz_dual = l_d;
  out.lipschitz_g = l_d;
  return out;
}

inline RunResult run(const DualOracle& oracle, const SolverConfig& config,
                     const RunOptions& options = {}) {
  switch (config.method) {
    case Method::kDG:
      return run_dg(oracle, config, options);
    case Method::kDFG:
      return run_dfg(oracle, config, options);
    case Method::kRDFG:
      return run_rdfg(oracle, config, options);
    case Method::kRegDFG:
      return run_regularized_dfg(oracle, config, options);
    case Method::kHybrid:
      return run_hybrid(oracle, config, options);
  }
  throw ConfigError("unknown method");
}

}  // namespace dfo

#endif  // DFO_METHODS_HPP
