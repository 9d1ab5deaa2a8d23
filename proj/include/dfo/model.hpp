#ifndef DFO_MODEL_HPP
#define DFO_MODEL_HPP

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "dfo/cones.hpp"
#include "dfo/errors.hpp"
#include "dfo/linalg.hpp"

namespace dfo {

enum class ObjectiveKind { kQuadratic, kQuadLog };

// f(u) = 1/2 u^T Q u + q^T u                                  (Quadratic)
// f(u) = 1/2 u^T Q u + q^T u + gamma log(1 + a^T u + e^{b^T u}) (QuadLog)
//
// QuadLog is restricted to the sign patterns where the log term is convex:
// gamma < 0 with a >= 0, b = 0 (used on u >= 0), gamma > 0 with a = 0, or
// gamma = 0. sigma_f is lambda_min(Q), a valid strong-convexity modulus in
// every admissible case.
class ObjectiveOracle {
 public:
  ObjectiveOracle() = default;

  static ObjectiveOracle quadratic(SymmetricForm q_mat, Vector q) {
    ObjectiveOracle o;
    o.kind_ = ObjectiveKind::kQuadratic;
    o.q_mat_ = std::move(q_mat);
    o.q_ = std::move(q);
    o.a_ = Vector::Zero(o.q_.size());
    o.b_ = Vector::Zero(o.q_.size());
    o.finalize();
    return o;
  }

  static ObjectiveOracle quad_log(SymmetricForm q_mat, Vector q, double gamma,
                                  Vector a, Vector b) {
    ObjectiveOracle o;
    o.kind_ = ObjectiveKind::kQuadLog;
    o.q_mat_ = std::move(q_mat);
    o.q_ = std::move(q);
    o.gamma_ = gamma;
    o.a_ = std::move(a);
    o.b_ = std::move(b);
    if (o.a_.size() != o.q_.size() || o.b_.size() != o.q_.size()) {
      throw ConfigError("QuadLog: a and b must have length n");
    }
    if (gamma < 0.0) {
      if ((o.a_.array() < 0.0).any() || !o.b_.isZero(0.0)) {
        throw ConfigError(
            "QuadLog with gamma < 0 requires a >= 0 and b = 0 for convexity");
      }
    } else if (gamma > 0.0) {
      if (!o.a_.isZero(0.0)) {
        throw ConfigError("QuadLog with gamma > 0 requires a = 0 for convexity");
      }
    }
    o.finalize();
    return o;
  }

  ObjectiveKind kind() const { return kind_; }
  Eigen::Index dim() const { return q_.size(); }
  const SymmetricForm& Q() const { return q_mat_; }
  const Vector& q() const { return q_; }
  double gamma() const { return gamma_; }
  const Vector& a() const { return a_; }
  const Vector& b() const { return b_; }
  double sigma_f() const { return sigma_f_; }
  double lambda_max() const { return lambda_max_; }
  bool has_log_term() const {
    return kind_ == ObjectiveKind::kQuadLog && gamma_ != 0.0;
  }

  // Upper bound on the Hessian norm of the log term over the admissible
  // domain: gamma ||b||^2 / 4 (softplus) or |gamma| ||a||^2 / 4 (on u >= 0,
  // where the log argument is at least 2).
  double log_curvature_bound() const {
    if (!has_log_term()) return 0.0;
    if (gamma_ > 0.0) return 0.25 * gamma_ * b_.squaredNorm();
    return 0.25 * -gamma_ * a_.squaredNorm();
  }

  // Smoothness constant of f (used as the inner step size).
  double lipschitz_f() const { return lambda_max_ + log_curvature_bound(); }

 private:
  void finalize() {
    if (q_mat_.size() != q_.size()) {
      throw ConfigError("objective: Q is " + std::to_string(q_mat_.size()) +
                        "x" + std::to_string(q_mat_.size()) +
                        " but q has length " + std::to_string(q_.size()));
    }
    const auto [lo, hi] = q_mat_.eigen_range();
    sigma_f_ = lo;
    lambda_max_ = hi;
    if (!(sigma_f_ > 0.0)) {
      throw ConfigError("objective: Q must be positive definite (lambda_min = " +
                        std::to_string(sigma_f_) + ")");
    }
  }

  ObjectiveKind kind_ = ObjectiveKind::kQuadratic;
  SymmetricForm q_mat_;
  Vector q_;
  double gamma_ = 0.0;
  Vector a_;
  Vector b_;
  double sigma_f_ = 0.0;
  double lambda_max_ = 0.0;
};

namespace detail {

// log(1 + a^T u + e^t) and e^t / (1 + a^T u + e^t), evaluated without
// overflow for large t.
struct LogTerm {
  double log_value;
  double exp_weight;  // e^t / phi
  double inv_phi;     // 1 / phi
};

inline LogTerm eval_log_term(const ObjectiveOracle& obj, const Vector& u) {
  const double s = 1.0 + obj.a().dot(u);
  const double t = obj.b().dot(u);
  if (t > 30.0) {
    const double r = s * std::exp(-t);  // phi = e^t (1 + r)
    if (!(1.0 + r > 0.0)) {
      throw DomainError("log term: argument 1 + a^T u + e^{b^T u} <= 0");
    }
    return {t + std::log1p(r), 1.0 / (1.0 + r), std::exp(-t) / (1.0 + r)};
  }
  const double e = std::exp(t);
  const double phi = s + e;
  if (!(phi > 0.0)) {
    throw DomainError("log term: argument 1 + a^T u + e^{b^T u} = " +
                      std::to_string(phi) + " <= 0");
  }
  return {std::log(phi), e / phi, 1.0 / phi};
}

}  // namespace detail

inline double objective_value(const ObjectiveOracle& obj, const Vector& u) {
  double f = 0.5 * obj.Q().quad(u) + obj.q().dot(u);
  if (obj.has_log_term()) {
    f += obj.gamma() * detail::eval_log_term(obj, u).log_value;
  }
  return f;
}

inline Vector objective_grad(const ObjectiveOracle& obj, const Vector& u) {
  Vector grad = obj.Q().apply(u) + obj.q();
  if (obj.has_log_term()) {
    const auto lt = detail::eval_log_term(obj, u);
    grad += obj.gamma() * (lt.inv_phi * obj.a() + lt.exp_weight * obj.b());
  }
  return grad;
}

enum class SetKind { kWhole, kNonneg, kBox };

// The simple set U. Infinite box bounds are IEEE infinities.
struct SimpleSet {
  SetKind kind = SetKind::kWhole;
  Eigen::Index dim = 0;
  Vector lb;
  Vector ub;

  static SimpleSet whole(Eigen::Index n) { return {SetKind::kWhole, n, {}, {}}; }
  static SimpleSet nonneg(Eigen::Index n) {
    return {SetKind::kNonneg, n, {}, {}};
  }
  static SimpleSet box(Vector lb, Vector ub) {
    if (lb.size() != ub.size()) throw ConfigError("box: lb/ub length mismatch");
    if ((lb.array() > ub.array()).any()) {
      throw ConfigError("box: lb must be <= ub elementwise");
    }
    const Eigen::Index n = lb.size();
    return {SetKind::kBox, n, std::move(lb), std::move(ub)};
  }

  // Lower bound vector (-inf where unbounded).
  Vector lower() const {
    switch (kind) {
      case SetKind::kWhole:
        return Vector::Constant(dim, -std::numeric_limits<double>::infinity());
      case SetKind::kNonneg:
        return Vector::Zero(dim);
      case SetKind::kBox:
        return lb;
    }
    return {};
  }
  Vector upper() const {
    if (kind == SetKind::kBox) return ub;
    return Vector::Constant(dim, std::numeric_limits<double>::infinity());
  }
};

inline std::string_view set_kind_name(SetKind k) {
  switch (k) {
    case SetKind::kWhole:
      return "whole";
    case SetKind::kNonneg:
      return "nonneg";
    case SetKind::kBox:
      return "box";
  }
  return "?";
}

inline Vector project_simple_set(const SimpleSet& set, const Vector& u) {
  if (u.size() != set.dim) {
    throw ConfigError("simple set dimension mismatch");
  }
  switch (set.kind) {
    case SetKind::kWhole:
      return u;
    case SetKind::kNonneg:
      return u.cwiseMax(0.0);
    case SetKind::kBox:
      return u.cwiseMax(set.lb).cwiseMin(set.ub);
  }
  return u;
}

// min f(u) over u in U subject to G u + g in K.
class ConicProblem {
 public:
  ConicProblem() = default;
  ConicProblem(ObjectiveOracle objective, ConstraintMatrix G, Vector g,
               Cone cone, SimpleSet set)
      : objective_(std::move(objective)),
        G_(std::move(G)),
        g_(std::move(g)),
        cone_(cone),
        set_(std::move(set)) {
    const Eigen::Index n = objective_.dim();
    if (G_.cols() != n || set_.dim != n) {
      throw ConfigError("problem: cols(G)=" + std::to_string(G_.cols()) +
                        ", dim(objective)=" + std::to_string(n) +
                        ", dim(U)=" + std::to_string(set_.dim) +
                        " must agree");
    }
    if (G_.rows() != g_.size() || cone_.dim != g_.size()) {
      throw ConfigError("problem: rows(G)=" + std::to_string(G_.rows()) +
                        ", len(g)=" + std::to_string(g_.size()) +
                        ", dim(K)=" + std::to_string(cone_.dim) +
                        " must agree");
    }
    if (objective_.has_log_term() && objective_.gamma() < 0.0) {
      const bool in_orthant =
          set_.kind == SetKind::kNonneg ||
          (set_.kind == SetKind::kBox && (set_.lb.array() >= 0.0).all());
      if (!in_orthant) {
        throw ConfigError(
            "QuadLog with gamma < 0 requires U inside the nonnegative orthant");
      }
    }
  }

  const ObjectiveOracle& objective() const { return objective_; }
  const ConstraintMatrix& G() const { return G_; }
  const Vector& g() const { return g_; }
  const Cone& cone() const { return cone_; }
  const SimpleSet& set() const { return set_; }
  Eigen::Index n() const { return objective_.dim(); }
  Eigen::Index p() const { return g_.size(); }

  // g(u) = -G u - g, the dual gradient at a point whose inner minimizer is u.
  Vector constraint_map(const Vector& u) const { return -(G_.apply(u) + g_); }

 private:
  ObjectiveOracle objective_;
  ConstraintMatrix G_;
  Vector g_;
  Cone cone_;
  SimpleSet set_;
};

inline double lipschitz_dual_constant(const ConicProblem& problem) {
  const double sigma = problem.objective().sigma_f();
  if (!(sigma > 0.0)) throw ConfigError("sigma_f must be positive");
  const double norm_g = spectral_norm(problem.G());
  return norm_g * norm_g / sigma;
}

}  // namespace dfo

#endif  // DFO_MODEL_HPP
