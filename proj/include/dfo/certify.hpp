#ifndef DFO_CERTIFY_HPP
#define DFO_CERTIFY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dfo/cones.hpp"
#include "dfo/errors.hpp"
#include "dfo/inner.hpp"
#include "dfo/methods.hpp"
#include "dfo/model.hpp"

namespace dfo {

inline double primal_infeasibility(const ConicProblem& problem, const Vector& u) {
  if (u.size() != problem.n()) throw ConfigError("primal point has wrong length");
  return dist_cone(problem.cone(), problem.G().apply(u) + problem.g());
}

enum class ReferenceSource { kKkt, kActiveSet, kHighAccuracyRun };

inline std::string_view reference_source_name(ReferenceSource s) {
  switch (s) {
    case ReferenceSource::kKkt:
      return "kkt";
    case ReferenceSource::kActiveSet:
      return "active-set";
    case ReferenceSource::kHighAccuracyRun:
      return "high-accuracy-run";
  }
  return "?";
}

struct KktResiduals {
  double stationarity = 0.0;     // ||u - P_U(u - (grad f(u) - G^T x))||
  double feasibility = 0.0;      // dist_K(G u + g)
  double dual_feasibility = 0.0; // dist_{K*}(x)
  double complementarity = 0.0;  // |<x, G u + g>|

  double max() const {
    return std::max({stationarity, feasibility, dual_feasibility,
                     complementarity});
  }
};

inline KktResiduals kkt_residuals(const ConicProblem& problem, const Vector& u,
                                  const Vector& x) {
  KktResiduals r;
  const Vector grad =
      objective_grad(problem.objective(), u) - problem.G().apply_transpose(x);
  r.stationarity = (u - project_simple_set(problem.set(), u - grad)).norm();
  const Vector cons = problem.G().apply(u) + problem.g();
  r.feasibility = dist_cone(problem.cone(), cons);
  r.dual_feasibility = dist_dual_cone(problem.cone(), x);
  r.complementarity = std::abs(x.dot(cons));
  return r;
}

struct ReferenceSolution {
  Vector u_star;
  Vector x_star;
  double f_star = 0.0;
  double dual_radius = 0.0;  // R_d = ||x^0 - x*||
  ReferenceSource source = ReferenceSource::kKkt;
  bool approximate = false;
  KktResiduals residuals;

  TraceReference trace_reference() const { return {f_star, x_star, u_star}; }
};

inline double primal_suboptimality(const ConicProblem& problem, const Vector& u,
                                   const ReferenceSolution& ref) {
  return objective_value(problem.objective(), u) - ref.f_star;
}

struct ReferenceOptions {
  double run_tol = 1e-12;        // target gradient-map norm for the run
  double inner_tol = 1e-12;
  long max_iter = 200000;
  double kkt_tol = 1e-9;
};

namespace detail {

inline bool is_plain_quadratic(const ObjectiveOracle& obj) {
  return !obj.has_log_term();
}

// Equality-constrained QP min 1/2 u^T Q u + q^T u s.t. A u + b = 0.
// Returns the minimum-norm multiplier shifted to the point of the multiplier
// set closest to `x0`.
struct EqualityKkt {
  Vector u;
  Vector x;
  double consistency = 0.0;
};

inline EqualityKkt solve_equality_kkt(const ObjectiveOracle& obj,
                                      const DenseMatrix& a, const Vector& b,
                                      const Vector& x0) {
  const DenseMatrix q_mat = obj.Q().to_dense();
  Eigen::LLT<DenseMatrix> llt(q_mat);
  if (llt.info() != Eigen::Success) {
    throw NumericError("reference: Q is not positive definite", 0.0);
  }
  EqualityKkt out;
  if (a.rows() == 0) {
    out.u = llt.solve(-obj.q());
    out.x = Vector::Zero(0);
    return out;
  }
  const DenseMatrix qinv_at = llt.solve(a.transpose());
  const DenseMatrix m = a * qinv_at;
  const Vector rhs = a * llt.solve(obj.q()) - b;
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod(m);
  const Vector x_mn = cod.solve(rhs);
  out.consistency = (m * x_mn - rhs).norm();
  // Shift along null(A^T): x = x_mn + (x0 - P_range(A) x0).
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod_a(a);
  const Vector range_part = a * cod_a.solve(x0);
  out.x = x_mn + (x0 - range_part);
  out.u = llt.solve(a.transpose() * out.x - obj.q());
  return out;
}

// Restarted fast gradient used only for reference solutions. Momentum is
// reset whenever the dual value decreases.
inline Vector high_accuracy_dual(const DualOracle& oracle, const Vector& x0,
                                 const ReferenceOptions& opt) {
  const Cone& cone = oracle.problem().cone();
  const double lip = oracle.lipschitz_dual();
  if (!(lip > 0.0)) return x0;
  DualMethodState s = DualMethodState::start(x0);
  DualOracleResult at_x = oracle.evaluate(x0);
  DualOracleResult at_y = at_x;
  for (long it = 0; it < opt.max_iter; ++it) {
    if (s.theta != 0.0) at_y = oracle.evaluate(s.y, &at_y.u_of_x);
    else at_y = at_x;
    DualMethodState next = dfg_step(s, at_y, cone, lip);
    DualOracleResult next_eval = oracle.evaluate(next.x, &at_y.u_of_x);
    const double step = (next.x - s.x).norm();
    if (next_eval.d_value < at_x.d_value) {
      // Restart from the better point.
      s.y = s.x;
      s.x_prev = s.x;
      s.theta = 0.0;
      continue;
    }
    s = std::move(next);
    at_x = std::move(next_eval);
    const double gm =
        gradient_map_from(cone, s.x, at_x.d_grad, lip).map.norm();
    if (gm <= opt.run_tol * std::max(1.0, s.x.norm()) &&
        step <= 10.0 * opt.run_tol * std::max(1.0, s.x.norm())) {
      break;
    }
  }
  return s.x;
}

// For quadratic objectives on U = R^n with orthant or zero cones: solve the
// equality KKT system on the constraints that look active at u and keep the
// result when it is a valid KKT pair.
inline std::optional<std::pair<Vector, Vector>> polish_active_set(
    const ConicProblem& problem, const Vector& u, const Vector& x,
    const Vector& x0, double kkt_tol) {
  const auto& obj = problem.objective();
  if (!is_plain_quadratic(obj) || problem.set().kind != SetKind::kWhole) {
    return std::nullopt;
  }
  const ConeKind kind = problem.cone().kind;
  if (kind == ConeKind::kSecondOrder) return std::nullopt;
  const DenseMatrix g_dense = problem.G().to_dense();
  const Vector cons = g_dense * u + problem.g();
  const double scale = 1.0 + cons.cwiseAbs().maxCoeff();
  std::optional<std::pair<Vector, Vector>> best;
  double best_res = std::numeric_limits<double>::infinity();
  for (double thr : {1e-6, 1e-8, 1e-4}) {
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < cons.size(); ++i) {
      if (kind == ConeKind::kZero || std::abs(cons[i]) <= thr * scale ||
          std::abs(x[i]) > 1e3 * thr) {
        active.push_back(i);
      }
    }
    DenseMatrix a(active.size(), g_dense.cols());
    Vector b(active.size());
    Vector x0_a(active.size());
    for (std::size_t r = 0; r < active.size(); ++r) {
      a.row(r) = g_dense.row(active[r]);
      b[r] = problem.g()[active[r]];
      x0_a[r] = x0[active[r]];
    }
    for (bool shift : {true, false}) {
      EqualityKkt sol = solve_equality_kkt(
          obj, a, b, shift ? x0_a : Vector::Zero(x0_a.size()));
      Vector full_x = Vector::Zero(problem.p());
      for (std::size_t r = 0; r < active.size(); ++r) {
        full_x[active[r]] = sol.x[r];
      }
      const double res = kkt_residuals(problem, sol.u, full_x).max();
      if (res <= kkt_tol && res < best_res) {
        best_res = res;
        best = std::make_pair(sol.u, full_x);
      }
    }
    if (best) break;
  }
  return best;
}

}  // namespace detail

// Quadratic + U = R^n + zero cone: exact KKT solve. Otherwise a restarted
// fast-gradient run to a gradient-map norm of ~1e-12, followed by an
// active-set polish when the structure allows it.
inline ReferenceSolution reference_solution(
    const ConicProblem& problem, const std::optional<Vector>& x0_opt = {},
    const ReferenceOptions& opt = {}) {
  const Vector x0 = x0_opt ? *x0_opt : Vector::Zero(problem.p());
  if (x0.size() != problem.p()) throw ConfigError("x0 has wrong length");
  const auto& obj = problem.objective();
  ReferenceSolution ref;
  if (detail::is_plain_quadratic(obj) &&
      problem.set().kind == SetKind::kWhole &&
      problem.cone().kind == ConeKind::kZero) {
    const auto sol = detail::solve_equality_kkt(obj, problem.G().to_dense(),
                                                problem.g(), x0);
    const double rhs_scale = 1.0 + problem.g().norm() + obj.q().norm();
    if (sol.consistency > 1e-8 * rhs_scale) {
      throw NumericError(
          "reference: equality constraints are inconsistent (primal "
          "infeasible)",
          sol.consistency);
    }
    ref.u_star = sol.u;
    ref.x_star = sol.x;
    ref.source = ReferenceSource::kKkt;
  } else {
    DualOracle oracle(problem, opt.inner_tol);
    const Vector x = detail::high_accuracy_dual(oracle, x0, opt);
    ref.x_star = x;
    ref.u_star = oracle.evaluate(x).u_of_x;
    ref.source = ReferenceSource::kHighAccuracyRun;
    ref.approximate = true;
    if (auto polished = detail::polish_active_set(problem, ref.u_star, x, x0,
                                                  opt.kkt_tol)) {
      const double before = kkt_residuals(problem, ref.u_star, x).max();
      const double after =
          kkt_residuals(problem, polished->first, polished->second).max();
      if (after <= before) {
        ref.u_star = polished->first;
        ref.x_star = polished->second;
        ref.source = ReferenceSource::kActiveSet;
        ref.approximate = false;
      }
    }
  }
  ref.f_star = objective_value(obj, ref.u_star);
  ref.dual_radius = (x0 - ref.x_star).norm();
  ref.residuals = kkt_residuals(problem, ref.u_star, ref.x_star);
  return ref;
}

// --- Theoretical bounds -----------------------------------------------------

enum class BoundFamily {
  kDgDualGap,
  kDgLastInfeas,
  kDgLastSubopt,
  kDgAvgInfeas,
  kDgAvgSuboptUpper,
  kDgAvgSuboptLower,
  kDgAvgDistance,
  kDfgDualGap,
  kDfgLastInfeas,
  kDfgLastSubopt,
  kDfgAvgInfeas,
  kDfgAvgSubopt,
  kEbDgDistance,
  kEbDgGap,
  kRdfgBudget,
  kLin2kDgInfeas,
  kLinHybridInfeas,
  kCone2kDgInfeas,
  kCone2kDgSuboptLower,
  kCone2kDgSuboptUpper,
  kConeHybridInfeas,
  kConeHybridSuboptLower,
  kConeHybridSuboptUpper,
  kRegDfgInfeas,
  kRegDfgBudget,
};

inline constexpr BoundFamily kAllBoundFamilies[] = {
    BoundFamily::kDgDualGap,           BoundFamily::kDgLastInfeas,
    BoundFamily::kDgLastSubopt,        BoundFamily::kDgAvgInfeas,
    BoundFamily::kDgAvgSuboptUpper,    BoundFamily::kDgAvgSuboptLower,
    BoundFamily::kDgAvgDistance,       BoundFamily::kDfgDualGap,
    BoundFamily::kDfgLastInfeas,       BoundFamily::kDfgLastSubopt,
    BoundFamily::kDfgAvgInfeas,        BoundFamily::kDfgAvgSubopt,
    BoundFamily::kEbDgDistance,        BoundFamily::kEbDgGap,
    BoundFamily::kRdfgBudget,          BoundFamily::kLin2kDgInfeas,
    BoundFamily::kLinHybridInfeas,     BoundFamily::kCone2kDgInfeas,
    BoundFamily::kCone2kDgSuboptLower, BoundFamily::kCone2kDgSuboptUpper,
    BoundFamily::kConeHybridInfeas,    BoundFamily::kConeHybridSuboptLower,
    BoundFamily::kConeHybridSuboptUpper, BoundFamily::kRegDfgInfeas,
    BoundFamily::kRegDfgBudget,
};

enum class BoundMetric {
  kNone,  // scalar budgets
  kDualGap,
  kInfeasLast,
  kInfeasAvg,
  kSuboptLast,
  kAbsSuboptLast,
  kSuboptAvg,
  kAbsSuboptAvg,
  kDistXStar,
  kDistUStarAvgSquared,
};

enum class BoundSense { kUpper, kLower };

// Which rows a family constrains.
enum class RowSelection {
  kFromMinK,     // every row with k >= min_k
  kEvenIndex,    // rows 2k, k >= 1, bound evaluated at k
  kHybridFinal,  // final row 2k of a hybrid run, bound evaluated at k
  kAfterBudget,  // rows past the regularized budget
  kNone,
};

struct BoundFamilyInfo {
  BoundFamily family;
  std::string_view name;
  BoundMetric metric;
  BoundSense sense;
  RowSelection rows;
  long min_k;
  std::vector<Method> methods;
};

inline BoundFamilyInfo bound_family_info(BoundFamily f) {
  using M = BoundMetric;
  using S = BoundSense;
  using R = RowSelection;
  const std::vector<Method> dg{Method::kDG};
  const std::vector<Method> dfg{Method::kDFG};
  const std::vector<Method> hyb{Method::kHybrid};
  switch (f) {
    case BoundFamily::kDgDualGap:
      return {f, "DG-dual-gap", M::kDualGap, S::kUpper, R::kFromMinK, 1, dg};
    case BoundFamily::kDgLastInfeas:
      return {f, "DG-last-infeas", M::kInfeasLast, S::kUpper, R::kFromMinK, 1, dg};
    case BoundFamily::kDgLastSubopt:
      return {f, "DG-last-subopt", M::kAbsSuboptLast, S::kUpper, R::kFromMinK, 1, dg};
    case BoundFamily::kDgAvgInfeas:
      return {f, "DG-avg-infeas", M::kInfeasAvg, S::kUpper, R::kFromMinK, 0, dg};
    case BoundFamily::kDgAvgSuboptUpper:
      return {f, "DG-avg-subopt-upper", M::kSuboptAvg, S::kUpper, R::kFromMinK, 0, dg};
    case BoundFamily::kDgAvgSuboptLower:
      return {f, "DG-avg-subopt-lower", M::kSuboptAvg, S::kLower, R::kFromMinK, 0, dg};
    case BoundFamily::kDgAvgDistance:
      return {f, "DG-avg-distance", M::kDistUStarAvgSquared, S::kUpper, R::kFromMinK, 0, dg};
    case BoundFamily::kDfgDualGap:
      return {f, "DFG-dual-gap", M::kDualGap, S::kUpper, R::kFromMinK, 1, dfg};
    case BoundFamily::kDfgLastInfeas:
      return {f, "DFG-last-infeas", M::kInfeasLast, S::kUpper, R::kFromMinK, 1, dfg};
    case BoundFamily::kDfgLastSubopt:
      return {f, "DFG-last-subopt", M::kAbsSuboptLast, S::kUpper, R::kFromMinK, 1, dfg};
    case BoundFamily::kDfgAvgInfeas:
      return {f, "DFG-avg-infeas", M::kInfeasAvg, S::kUpper, R::kFromMinK, 1, dfg};
    case BoundFamily::kDfgAvgSubopt:
      return {f, "DFG-avg-subopt", M::kAbsSuboptAvg, S::kUpper, R::kFromMinK, 1, dfg};
    case BoundFamily::kEbDgDistance:
      return {f, "EB-DG-distance", M::kDistXStar, S::kUpper, R::kFromMinK, 0, dg};
    case BoundFamily::kEbDgGap:
      return {f, "EB-DG-gap", M::kDualGap, S::kUpper, R::kFromMinK, 1, dg};
    case BoundFamily::kRdfgBudget:
      return {f, "RDFG-budget", M::kNone, S::kUpper, R::kNone, 0, {}};
    case BoundFamily::kLin2kDgInfeas:
      return {f, "Lin-2kDG-infeas", M::kInfeasLast, S::kUpper, R::kEvenIndex, 1, dg};
    case BoundFamily::kLinHybridInfeas:
      return {f, "Lin-hybrid-infeas", M::kInfeasLast, S::kUpper, R::kHybridFinal, 1, hyb};
    case BoundFamily::kCone2kDgInfeas:
      return {f, "Cone-2kDG-infeas", M::kInfeasLast, S::kUpper, R::kEvenIndex, 1, dg};
    case BoundFamily::kCone2kDgSuboptLower:
      return {f, "Cone-2kDG-subopt-lower", M::kSuboptLast, S::kLower, R::kEvenIndex, 1, dg};
    case BoundFamily::kCone2kDgSuboptUpper:
      return {f, "Cone-2kDG-subopt-upper", M::kSuboptLast, S::kUpper, R::kEvenIndex, 1, dg};
    case BoundFamily::kConeHybridInfeas:
      return {f, "Cone-hybrid-infeas", M::kInfeasLast, S::kUpper, R::kHybridFinal, 1, hyb};
    case BoundFamily::kConeHybridSuboptLower:
      return {f, "Cone-hybrid-subopt-lower", M::kSuboptLast, S::kLower, R::kHybridFinal, 1, hyb};
    case BoundFamily::kConeHybridSuboptUpper:
      return {f, "Cone-hybrid-subopt-upper", M::kSuboptLast, S::kUpper, R::kHybridFinal, 1, hyb};
    case BoundFamily::kRegDfgInfeas:
      return {f, "RegDFG-infeas", M::kInfeasLast, S::kUpper, R::kAfterBudget, 0,
              {Method::kRegDFG}};
    case BoundFamily::kRegDfgBudget:
      return {f, "RegDFG-budget", M::kNone, S::kUpper, R::kNone, 0, {}};
  }
  throw ConfigError("unknown bound family");
}

inline std::string_view bound_family_name(BoundFamily f) {
  return bound_family_info(f).name;
}

inline BoundFamily parse_bound_family(std::string_view s) {
  for (BoundFamily f : kAllBoundFamilies) {
    if (bound_family_name(f) == s) return f;
  }
  throw ConfigError("unknown bound family '" + std::string(s) + "'");
}

struct BoundConstants {
  std::optional<double> lipschitz_dual;  // L_d
  std::optional<double> lipschitz_g;     // L_G
  std::optional<double> dual_radius;     // R_d
  std::optional<double> x0_norm;         // ||x^0||
  std::optional<double> sigma_f;
  std::optional<double> kappa;
  std::optional<double> delta;
  std::optional<double> contraction;     // c
  std::optional<double> epsilon;
  std::optional<double> f_star;
};

namespace detail {

inline double need(const std::optional<double>& v, std::string_view what,
                   BoundFamily f) {
  if (!v) {
    throw ConfigError("bound " + std::string(bound_family_name(f)) +
                      " needs constant " + std::string(what));
  }
  return *v;
}

inline double over(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

}  // namespace detail

// Bound value for family `f` at index k. Budget families ignore k.
inline double theoretical_bounds(BoundFamily f, long k, const BoundConstants& c) {
  using detail::need;
  using detail::over;
  const double kk = static_cast<double>(k);
  auto L = [&] { return need(c.lipschitz_dual, "L_d", f); };
  auto LG = [&] { return need(c.lipschitz_g, "L_G", f); };
  auto R = [&] { return need(c.dual_radius, "R_d", f); };
  auto X0 = [&] { return need(c.x0_norm, "||x0||", f); };
  switch (f) {
    case BoundFamily::kDgDualGap:
      return over(4.0 * LG() * R() * R(), kk);
    case BoundFamily::kDgLastInfeas:
      return over(3.0 * LG() * R(), std::sqrt(kk));
    case BoundFamily::kDgLastSubopt:
      return over((6.0 * R() + 3.0 * X0()) * LG() * R(), std::sqrt(kk));
    case BoundFamily::kDgAvgInfeas:
      return 2.0 * LG() * R() / (kk + 1.0);
    case BoundFamily::kDgAvgSuboptUpper:
      return LG() * X0() * X0() / (2.0 * (kk + 1.0));
    case BoundFamily::kDgAvgSuboptLower:
      return -2.0 * LG() * R() * (R() + X0()) / (kk + 1.0);
    case BoundFamily::kDgAvgDistance: {
      const double s = need(c.sigma_f, "sigma_f", f);
      return (LG() * X0() * X0() / s + 4.0 * LG() * R() * (R() + X0()) / s) /
             (kk + 1.0);
    }
    case BoundFamily::kDfgDualGap:
      return 2.0 * L() * R() * R() / ((kk + 1.0) * (kk + 1.0));
    case BoundFamily::kDfgLastInfeas:
      return 2.0 * L() * R() / (kk + 1.0);
    case BoundFamily::kDfgLastSubopt:
      return (2.0 * R() + X0()) * 2.0 * L() * R() / (kk + 1.0);
    case BoundFamily::kDfgAvgInfeas:
      return 8.0 * L() * R() / ((kk + 1.0) * (kk + 1.0));
    case BoundFamily::kDfgAvgSubopt: {
      const double m = std::max(R(), X0());
      return 8.0 * L() / ((kk + 1.0) * (kk + 1.0)) * (R() * R() + m * m);
    }
    case BoundFamily::kEbDgDistance: {
      const double kap = need(c.kappa, "kappa", f);
      return std::pow(kap / std::sqrt(1.0 + kap * kap), kk) * R();
    }
    case BoundFamily::kEbDgGap: {
      const double kap = need(c.kappa, "kappa", f);
      return 0.5 * L() * R() * R() *
             std::pow(kap * kap / (1.0 + kap * kap), kk - 1.0);
    }
    case BoundFamily::kRdfgBudget: {
      const double kap = need(c.kappa, "kappa", f);
      const double eps = need(c.epsilon, "epsilon", f);
      return std::exp(1.0) * kap * std::log(L() * R() * R() / eps);
    }
    case BoundFamily::kLin2kDgInfeas:
    case BoundFamily::kCone2kDgInfeas:
      return over(3.0 * L() * R(), kk);
    case BoundFamily::kCone2kDgSuboptLower:
      return -over(3.0 * L() * R() * (R() + X0()), kk);
    case BoundFamily::kCone2kDgSuboptUpper:
      return over(2.0 * L() * R() * (2.0 * R() + X0()), std::sqrt(kk));
    case BoundFamily::kLinHybridInfeas:
    case BoundFamily::kConeHybridInfeas:
      return 2.0 * L() * R() / std::pow(kk + 1.0, 1.5);
    case BoundFamily::kConeHybridSuboptLower:
      return -2.0 * L() * (R() * R() + R() * X0()) / std::pow(kk + 1.0, 1.5);
    case BoundFamily::kConeHybridSuboptUpper:
      return (2.0 * R() + X0()) * 3.0 * L() * R() / (kk + 1.0);
    case BoundFamily::kRegDfgInfeas: {
      const double eps = need(c.epsilon, "epsilon", f);
      return 4.0 * eps * (std::sqrt(L() * L() * L()) + 1.0 / R());
    }
    case BoundFamily::kRegDfgBudget: {
      const double eps = need(c.epsilon, "epsilon", f);
      const double d = c.delta ? *c.delta : eps / (R() * R());
      return regularized_budget(L(), d, R(), eps);
    }
  }
  throw ConfigError("unknown bound family");
}

struct BoundEnvelope {
  std::string name;
  std::vector<long> k;          // trace indices checked
  std::vector<double> values;   // bound at each checked index
  std::vector<double> metric;   // trace metric at each checked index
  std::optional<long> violated_at;
  double worst_ratio = 0.0;     // max over checked rows of excess / slack scale

  bool ok() const { return !violated_at.has_value(); }
};

inline constexpr double kEnvelopeRelSlack = 1e-6;
inline constexpr double kEnvelopeAbsSlack = 1e-10;

namespace detail {

inline double row_metric(const IterationRow& row, BoundMetric m,
                         const BoundConstants& c, BoundFamily f) {
  const auto require = [&](double v, const char* what) {
    if (std::isnan(v)) {
      throw ConfigError("bound " + std::string(bound_family_name(f)) +
                        " needs trace metric " + what +
                        " (run with a reference solution)");
    }
    return v;
  };
  switch (m) {
    case BoundMetric::kDualGap:
      return need(c.f_star, "f_star", f) - row.d;
    case BoundMetric::kInfeasLast:
      return row.infeas_last;
    case BoundMetric::kInfeasAvg:
      return row.infeas_avg;
    case BoundMetric::kSuboptLast:
      return require(row.subopt_last, "subopt_last");
    case BoundMetric::kAbsSuboptLast:
      return std::abs(require(row.subopt_last, "subopt_last"));
    case BoundMetric::kSuboptAvg:
      return require(row.subopt_avg, "subopt_avg");
    case BoundMetric::kAbsSuboptAvg:
      return std::abs(require(row.subopt_avg, "subopt_avg"));
    case BoundMetric::kDistXStar:
      return require(row.dist_xstar, "dist_xstar");
    case BoundMetric::kDistUStarAvgSquared: {
      const double v = require(row.dist_ustar_avg, "dist_ustar_avg");
      return v * v;
    }
    case BoundMetric::kNone:
      break;
  }
  throw ConfigError("bound " + std::string(bound_family_name(f)) +
                    " has no trace metric");
}

}  // namespace detail

// Compares the trace metric of `family` with its bound row by row. Slack is
// max(1e-6 |bound|, 1e-10).
inline BoundEnvelope check_envelope(const IterationTrace& trace,
                                    BoundFamily family,
                                    const BoundConstants& consts) {
  const BoundFamilyInfo info = bound_family_info(family);
  if (info.metric == BoundMetric::kNone) {
    throw ConfigError("bound " + std::string(info.name) +
                      " is a scalar budget, not a trace envelope");
  }
  if (std::find(info.methods.begin(), info.methods.end(), trace.method) ==
      info.methods.end()) {
    throw ConfigError("bound " + std::string(info.name) +
                      " does not apply to a " +
                      std::string(method_name(trace.method)) + " trace");
  }
  BoundEnvelope env;
  env.name = std::string(info.name);
  long after = 0;
  if (info.rows == RowSelection::kAfterBudget) {
    after = static_cast<long>(std::ceil(std::max(
        0.0, theoretical_bounds(BoundFamily::kRegDfgBudget, 0, consts))));
  }
  auto check_row = [&](const IterationRow& row, long bound_k) {
    const double bound = theoretical_bounds(family, bound_k, consts);
    const double metric = detail::row_metric(row, info.metric, consts, family);
    const double slack =
        std::max(kEnvelopeRelSlack * std::abs(bound), kEnvelopeAbsSlack);
    const double excess =
        info.sense == BoundSense::kUpper ? metric - bound : bound - metric;
    env.k.push_back(row.k);
    env.values.push_back(bound);
    env.metric.push_back(metric);
    if (std::isfinite(bound)) {
      env.worst_ratio = std::max(env.worst_ratio, excess / slack);
    }
    if (!env.violated_at && (excess > slack || std::isnan(metric))) {
      env.violated_at = row.k;
    }
  };
  const auto& rows = trace.rows;
  switch (info.rows) {
    case RowSelection::kFromMinK:
      for (const auto& row : rows) {
        if (row.k >= info.min_k) check_row(row, row.k);
      }
      break;
    case RowSelection::kEvenIndex:
      for (const auto& row : rows) {
        if (row.k >= 2 && row.k % 2 == 0) check_row(row, row.k / 2);
      }
      break;
    case RowSelection::kHybridFinal:
      if (!rows.empty() && rows.back().k >= 2 && rows.back().k % 2 == 0) {
        check_row(rows.back(), rows.back().k / 2);
      }
      break;
    case RowSelection::kAfterBudget:
      for (const auto& row : rows) {
        if (row.k >= after) check_row(row, row.k);
      }
      break;
    case RowSelection::kNone:
      break;
  }
  return env;
}

// Constants for the envelopes of one run against its reference solution.
inline BoundConstants bound_constants(const RunResult& run,
                                      const ReferenceSolution& ref,
                                      const Vector& x0, double sigma_f) {
  BoundConstants c;
  c.lipschitz_dual = run.lipschitz_dual;
  c.lipschitz_g = run.lipschitz_g;
  c.dual_radius = ref.dual_radius;
  c.x0_norm = x0.norm();
  c.sigma_f = sigma_f;
  c.f_star = ref.f_star;
  c.delta = run.delta;
  return c;
}

// --- Empirical rates --------------------------------------------------------

struct RateFit {
  double exponent = 0.0;        // slope of log(value) vs log(k)
  double r_squared = 0.0;
  double semilog_slope = 0.0;   // slope of log(value) vs k
  double semilog_r_squared = 0.0;
  std::size_t points = 0;
  std::size_t excluded = 0;     // non-positive or non-finite values dropped
  std::string warning;
};

namespace detail {

inline std::pair<double, double> least_squares(const std::vector<double>& x,
                                               const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  const double r2 = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return {slope, r2};
}

}  // namespace detail

// Fits the last `tail_fraction` of the series (by position).
inline RateFit empirical_rate_exponent(
    const std::vector<std::pair<double, double>>& series,
    double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ConfigError("tail_fraction must lie in (0, 1]");
  }
  const std::size_t n = series.size();
  const auto take = static_cast<std::size_t>(
      std::ceil(tail_fraction * static_cast<double>(n)));
  RateFit fit;
  std::vector<double> lk;
  std::vector<double> kv;
  std::vector<double> lv;
  std::vector<double> lv_semi;
  for (std::size_t i = n - std::min(take, n); i < n; ++i) {
    const auto [k, v] = series[i];
    if (!(v > 0.0) || !std::isfinite(v) || !(k > 0.0)) {
      ++fit.excluded;
      continue;
    }
    lk.push_back(std::log(k));
    kv.push_back(k);
    lv.push_back(std::log(v));
  }
  if (fit.excluded > 0) {
    fit.warning = std::to_string(fit.excluded) +
                  " non-positive values excluded from the fit";
  }
  fit.points = lv.size();
  if (fit.points < 5) {
    throw DomainError("rate fit needs at least 5 positive points, got " +
                      std::to_string(fit.points));
  }
  std::tie(fit.exponent, fit.r_squared) = detail::least_squares(lk, lv);
  std::tie(fit.semilog_slope, fit.semilog_r_squared) =
      detail::least_squares(kv, lv);
  return fit;
}

// --- Lemma chain -------------------------------------------------------------

struct LemmaChain {
  // Each pair is (lhs, rhs) of an inequality lhs <= rhs.
  std::pair<double, double> ineq_x;      // sigma/2 ||u - u*||^2 <= f* - d(x)
  std::pair<double, double> ineq_feas2;  // dist_K(Gu + g) <= ||G|| ||u - u*||
  std::pair<double, double> ineq_opt;    // |f(u) - f*| <= ||G||(||x-x*||+||x*||)||u-u*||

  double worst_violation() const {
    return std::max({ineq_x.first - ineq_x.second,
                     ineq_feas2.first - ineq_feas2.second,
                     ineq_opt.first - ineq_opt.second});
  }
};

inline LemmaChain lemma_chain(const DualOracle& oracle,
                              const ReferenceSolution& ref, const Vector& x,
                              double g_norm) {
  const auto& prob = oracle.problem();
  const DualOracleResult r = oracle.evaluate(x);
  const double du = (r.u_of_x - ref.u_star).norm();
  const double sigma = prob.objective().sigma_f();
  LemmaChain c;
  c.ineq_x = {0.5 * sigma * du * du, ref.f_star - r.d_value};
  c.ineq_feas2 = {dist_cone(prob.cone(), -r.d_grad), g_norm * du};
  c.ineq_opt = {
      std::abs(objective_value(prob.objective(), r.u_of_x) - ref.f_star),
      g_norm * ((x - ref.x_star).norm() + ref.x_star.norm()) * du};
  return c;
}

}  // namespace dfo

#endif  // DFO_CERTIFY_HPP
