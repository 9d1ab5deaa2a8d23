#ifndef DFO_INNER_HPP
#define DFO_INNER_HPP

#include <cmath>

#include "dfo/cones.hpp"
#include "dfo/errors.hpp"
#include "dfo/model.hpp"

namespace dfo {

inline constexpr double kDefaultInnerTol = 1e-10;
inline constexpr long kDefaultInnerMaxIter = 100000;
// Multipliers this far outside K* are rejected by the gradient map.
inline constexpr double kDualFeasibilityTol = 1e-9;

// Everything the dual oracle returns at a multiplier x.
struct DualOracleResult {
  Vector u_of_x;          // u(x) = argmin_{u in U} L(u, x)
  double d_value = 0.0;   // d(x) = L(u(x), x)
  Vector d_grad;          // -G u(x) - g
  double inner_residual = 0.0;
  long inner_iterations = 0;
};

struct GradientMapResult {
  Vector map;     // x_plus - x
  Vector x_plus;  // [x + grad d(x) / L_d]_{K*}
};

enum class InnerRoute { kCholesky, kSeparableClamp, kAcceleratedGradient };

// Evaluates d(x), grad d(x) and u(x) for the Lagrangian
// L(u, x) = f(u) + <x, -G u - g>.
//
// Routes:
//   Quadratic, dense Q, U = R^n   -> u = Q^{-1}(G^T x - q), Cholesky cached
//   Quadratic, diagonal Q         -> componentwise clamp of the
//                                    unconstrained minimizer
//   anything else                 -> accelerated projected gradient with
//                                    constant momentum on the sigma_f-strongly
//                                    convex inner problem
//
// The oracle keeps a pointer to the problem, which must outlive it. All
// evaluation methods are const and safe to call concurrently.
class DualOracle {
 public:
  explicit DualOracle(const ConicProblem& problem,
                      double inner_tol = kDefaultInnerTol,
                      long max_inner_iter = kDefaultInnerMaxIter)
      : problem_(&problem), tol_(inner_tol), max_iter_(max_inner_iter) {
    if (!(inner_tol > 0.0)) throw ConfigError("inner tolerance must be > 0");
    const auto& obj = problem.objective();
    if (obj.kind() == ObjectiveKind::kQuadratic ||
        (obj.kind() == ObjectiveKind::kQuadLog && obj.gamma() == 0.0)) {
      if (obj.Q().is_diagonal()) {
        route_ = InnerRoute::kSeparableClamp;
      } else if (problem.set().kind == SetKind::kWhole) {
        route_ = InnerRoute::kCholesky;
        llt_.compute(obj.Q().dense());
        if (llt_.info() != Eigen::Success) {
          throw NumericError("Cholesky factorization of Q failed", 0.0);
        }
      } else {
        route_ = InnerRoute::kAcceleratedGradient;
      }
    } else {
      route_ = InnerRoute::kAcceleratedGradient;
    }
    step_lipschitz_ = obj.lipschitz_f();
    lipschitz_dual_ = lipschitz_dual_constant(problem);
  }

  const ConicProblem& problem() const { return *problem_; }
  InnerRoute route() const { return route_; }
  double tolerance() const { return tol_; }

  // L_d = ||G||^2 / sigma_f, computed once.
  double lipschitz_dual() const { return lipschitz_dual_; }

  // `warm` seeds the iterative route; ignored by the closed-form routes.
  DualOracleResult evaluate(const Vector& x, const Vector* warm = nullptr) const {
    const auto& prob = *problem_;
    if (x.size() != prob.p()) {
      throw ConfigError("multiplier has length " + std::to_string(x.size()) +
                        ", expected " + std::to_string(prob.p()));
    }
    const auto& obj = prob.objective();
    const Vector gtx = prob.G().apply_transpose(x);
    DualOracleResult res;
    switch (route_) {
      case InnerRoute::kCholesky:
        res.u_of_x = llt_.solve(gtx - obj.q());
        break;
      case InnerRoute::kSeparableClamp:
        res.u_of_x = project_simple_set(
            prob.set(), (gtx - obj.q()).cwiseQuotient(obj.Q().diag()));
        break;
      case InnerRoute::kAcceleratedGradient:
        res.u_of_x = accelerated_solve(gtx, warm, &res.inner_iterations);
        break;
    }
    res.inner_residual = stationarity_residual(res.u_of_x, gtx);
    if (route_ != InnerRoute::kAcceleratedGradient &&
        !(res.inner_residual <= residual_ceiling(gtx))) {
      throw NumericError("closed-form inner solve is inaccurate",
                         res.inner_residual);
    }
    res.d_grad = prob.constraint_map(res.u_of_x);
    res.d_value = objective_value(obj, res.u_of_x) + x.dot(res.d_grad);
    return res;
  }

  // Projected-gradient residual of the inner problem at u:
  // L_in * || P_U(u - grad_u L(u, x) / L_in) - u ||.
  double stationarity_residual(const Vector& u, const Vector& gtx) const {
    const Vector grad = objective_grad(problem_->objective(), u) - gtx;
    if (problem_->set().kind == SetKind::kWhole) return grad.norm();
    const Vector step =
        project_simple_set(problem_->set(), u - grad / step_lipschitz_);
    return step_lipschitz_ * (step - u).norm();
  }

 private:
  // Closed-form routes are exact up to roundoff; allow roundoff relative to
  // the data scale but never more than the configured tolerance times 1e3.
  double residual_ceiling(const Vector& gtx) const {
    const double scale =
        1.0 + gtx.norm() + problem_->objective().q().norm();
    return std::max(tol_, 1e-12 * scale) * 1e3;
  }

  Vector accelerated_solve(const Vector& gtx, const Vector* warm,
                           long* iterations) const {
    const auto& prob = *problem_;
    const auto& obj = prob.objective();
    const double lip = step_lipschitz_;
    const double sigma = obj.sigma_f();
    const double beta =
        (std::sqrt(lip) - std::sqrt(sigma)) / (std::sqrt(lip) + std::sqrt(sigma));
    Vector u = (warm != nullptr && warm->size() == prob.n())
                   ? project_simple_set(prob.set(), *warm)
                   : project_simple_set(prob.set(), Vector::Zero(prob.n()));
    Vector z = u;
    double residual = stationarity_residual(u, gtx);
    long it = 0;
    while (residual > tol_) {
      if (it >= max_iter_) {
        *iterations = it;
        throw ConvergenceError("inner solve hit the iteration cap", residual);
      }
      const Vector grad_z = objective_grad(obj, z) - gtx;
      Vector u_next = project_simple_set(prob.set(), z - grad_z / lip);
      z = u_next + beta * (u_next - u);
      u = std::move(u_next);
      residual = stationarity_residual(u, gtx);
      ++it;
    }
    *iterations = it;
    return u;
  }

  const ConicProblem* problem_;
  double tol_;
  long max_iter_;
  InnerRoute route_ = InnerRoute::kAcceleratedGradient;
  Eigen::LLT<DenseMatrix> llt_;
  double step_lipschitz_ = 1.0;
  double lipschitz_dual_ = 0.0;
};

// One-shot oracle evaluation without cached factorizations.
inline DualOracleResult inner_solve(const ConicProblem& problem,
                                    const Vector& x,
                                    double tol = kDefaultInnerTol) {
  return DualOracle(problem, tol).evaluate(x);
}

// Gradient map from an already evaluated dual gradient.
inline GradientMapResult gradient_map_from(const Cone& cone, const Vector& x,
                                           const Vector& d_grad,
                                           double lipschitz) {
  GradientMapResult r;
  r.x_plus = project_dual_cone(cone, x + d_grad / lipschitz);
  r.map = r.x_plus - x;
  return r;
}

inline GradientMapResult gradient_map(const DualOracle& oracle, const Vector& x,
                                      double lipschitz) {
  if (!(lipschitz > 0.0)) throw ConfigError("L_d must be positive");
  const Cone& cone = oracle.problem().cone();
  const double outside = dist_dual_cone(cone, x);
  if (outside > kDualFeasibilityTol) {
    throw DomainError("gradient map: x lies " + std::to_string(outside) +
                      " outside the dual cone");
  }
  return gradient_map_from(cone, x, oracle.evaluate(x).d_grad, lipschitz);
}

inline GradientMapResult gradient_map(const ConicProblem& problem,
                                      const Vector& x, double lipschitz,
                                      double tol = kDefaultInnerTol) {
  return gradient_map(DualOracle(problem, tol), x, lipschitz);
}

}  // namespace dfo

#endif  // DFO_INNER_HPP
