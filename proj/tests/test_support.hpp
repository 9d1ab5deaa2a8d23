#ifndef DFO_TESTS_TEST_SUPPORT_HPP
#define DFO_TESTS_TEST_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "dfo/dfo.hpp"

namespace dfo::testing {

// min 1/2 ||u||^2  s.t.  u1 + u2 - 1 = 0.  d(x) = x - x^2, x* = 0.5.
inline ConicProblem toy_equality_qp() {
  DenseMatrix g(1, 2);
  g << 1.0, 1.0;
  return ConicProblem(
      ObjectiveOracle::quadratic(SymmetricForm(DenseMatrix::Identity(2, 2)),
                                 Vector::Zero(2)),
      ConstraintMatrix(g), Vector::Constant(1, -1.0), Cone::zero(1),
      SimpleSet::whole(2));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double normal() { return normal_(gen_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  Vector vector(Eigen::Index n, double scale = 1.0) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * normal();
    return v;
  }
  DenseMatrix matrix(Eigen::Index r, Eigen::Index c) {
    DenseMatrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j) {
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = normal();
    }
    return m;
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Central finite difference of a scalar function along each coordinate.
template <typename F>
Vector finite_difference_gradient(F&& f, const Vector& x, double h) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x;
    Vector xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// Random equality QP with U = R^n: Q = I + B^T B / n, Gaussian G.
inline ConicProblem random_equality_qp(std::uint64_t seed, Eigen::Index n,
                                       Eigen::Index p) {
  GeneratorSpec s;
  s.n = n;
  s.p = p;
  s.family = ProblemFamily::kQp;
  s.cone = ConeKind::kZero;
  s.seed = seed;
  return generate_random_problem(s);
}

inline ConicProblem random_inequality_qp(std::uint64_t seed, Eigen::Index n,
                                         Eigen::Index p) {
  GeneratorSpec s;
  s.n = n;
  s.p = p;
  s.family = ProblemFamily::kQp;
  s.cone = ConeKind::kNonpos;
  s.seed = seed;
  return generate_random_problem(s);
}

}  // namespace dfo::testing

#endif  // DFO_TESTS_TEST_SUPPORT_HPP
