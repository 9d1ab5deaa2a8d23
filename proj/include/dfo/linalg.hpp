#ifndef DFO_LINALG_HPP
#define DFO_LINALG_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <variant>

#include "dfo/errors.hpp"

namespace dfo {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// The constraint matrix G. Only products with G and G^T are needed by the
// solvers; the dense form is materialized on demand for reference solves.
class ConstraintMatrix {
 public:
  ConstraintMatrix() = default;
  explicit ConstraintMatrix(DenseMatrix m) : data_(std::move(m)) {}
  explicit ConstraintMatrix(SparseMatrix m) : data_(std::move(m)) {
    std::get<SparseMatrix>(data_).makeCompressed();
  }

  Eigen::Index rows() const {
    return std::visit([](const auto& m) { return m.rows(); }, data_);
  }
  Eigen::Index cols() const {
    return std::visit([](const auto& m) { return m.cols(); }, data_);
  }
  bool is_sparse() const { return std::holds_alternative<SparseMatrix>(data_); }

  Vector apply(const Vector& u) const {
    return std::visit([&](const auto& m) -> Vector { return m * u; }, data_);
  }
  Vector apply_transpose(const Vector& x) const {
    return std::visit(
        [&](const auto& m) -> Vector { return m.transpose() * x; }, data_);
  }

  // Number of structural nonzeros in row i (dense: count of exact nonzeros).
  Eigen::Index row_nonzeros(Eigen::Index i) const {
    if (const auto* s = std::get_if<SparseMatrix>(&data_)) {
      return s->outerIndexPtr()[i + 1] - s->outerIndexPtr()[i];
    }
    const auto& d = std::get<DenseMatrix>(data_);
    return (d.row(i).array() != 0.0).count();
  }

  DenseMatrix to_dense() const {
    if (const auto* s = std::get_if<SparseMatrix>(&data_)) {
      return DenseMatrix(*s);
    }
    return std::get<DenseMatrix>(data_);
  }

  const DenseMatrix* dense() const { return std::get_if<DenseMatrix>(&data_); }
  const SparseMatrix* sparse() const {
    return std::get_if<SparseMatrix>(&data_);
  }

 private:
  std::variant<DenseMatrix, SparseMatrix> data_{DenseMatrix(0, 0)};
};

// Spectral norm ||G|| by power iteration on G^T G. The iteration runs until
// the relative change of the Rayleigh quotient drops below 1e-14; it counts
// as converged when the last change is below `tol`. Capped at
// 10 * (rows + cols) iterations.
inline double spectral_norm(const ConstraintMatrix& g, double tol = 1e-10) {
  const Eigen::Index n = g.cols();
  const Eigen::Index p = g.rows();
  if (n == 0 || p == 0) return 0.0;
  // Deterministic start with all components present.
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
  v.normalize();
  double lambda = g.apply(v).squaredNorm();
  if (lambda == 0.0) {
    // v may be orthogonal to the row space by accident; retry with e_0 sweep.
    v = Vector::Unit(n, 0);
    lambda = g.apply(v).squaredNorm();
  }
  const long cap = 10 * static_cast<long>(n + p);
  double rel_change = 1.0;
  for (long it = 0; it < cap; ++it) {
    Vector w = g.apply_transpose(g.apply(v));
    const double w_norm = w.norm();
    if (w_norm == 0.0) return 0.0;
    v = w / w_norm;
    const double next = g.apply(v).squaredNorm();
    rel_change = std::abs(next - lambda) / std::max(next, 1e-300);
    lambda = next;
    if (rel_change <= 1e-14) break;
  }
  if (rel_change > tol) {
    throw NumericError("power iteration for ||G|| did not converge", rel_change);
  }
  return std::sqrt(lambda);
}

// Symmetric positive-definite matrix Q, stored dense or as a diagonal.
class SymmetricForm {
 public:
  SymmetricForm() = default;
  explicit SymmetricForm(DenseMatrix q) : dense_(std::move(q)) {}
  static SymmetricForm diagonal(Vector d) {
    SymmetricForm s;
    s.diag_ = std::move(d);
    s.is_diagonal_ = true;
    return s;
  }

  Eigen::Index size() const {
    return is_diagonal_ ? diag_.size() : dense_.rows();
  }
  bool is_diagonal() const { return is_diagonal_; }
  const Vector& diag() const { return diag_; }
  const DenseMatrix& dense() const { return dense_; }

  Vector apply(const Vector& u) const {
    if (is_diagonal_) return diag_.cwiseProduct(u);
    return dense_ * u;
  }
  double quad(const Vector& u) const { return u.dot(apply(u)); }

  DenseMatrix to_dense() const {
    if (is_diagonal_) return diag_.asDiagonal();
    return dense_;
  }

  // Extreme eigenvalues; dense eigendecomposition (self-adjoint).
  std::pair<double, double> eigen_range() const {
    if (is_diagonal_) {
      if (diag_.size() == 0) return {0.0, 0.0};
      return {diag_.minCoeff(), diag_.maxCoeff()};
    }
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(dense_,
                                                  Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw NumericError("eigendecomposition of Q failed", 0.0);
    }
    return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
  }

 private:
  DenseMatrix dense_;
  Vector diag_;
  bool is_diagonal_ = false;
};

}  // namespace dfo

#endif  // DFO_LINALG_HPP
