#ifndef DFO_CONES_HPP
#define DFO_CONES_HPP

#include <cmath>
#include <string>
#include <string_view>

#include "dfo/errors.hpp"
#include "dfo/linalg.hpp"

namespace dfo {

enum class ConeKind { kZero, kNonneg, kNonpos, kSecondOrder };

// A closed convex cone K in R^p together with its dual
// K* = {x : <x, u> >= 0 for all u in K}.
//
//   Zero         K = {0}           K* = R^p
//   Nonneg       K = R^p_+         K* = R^p_+
//   Nonpos       K = R^p_-         K* = R^p_-
//   SecondOrder  K = {(t, z) : t >= ||z||}, self-dual; t is the first entry.
struct Cone {
  ConeKind kind = ConeKind::kZero;
  Eigen::Index dim = 0;

  static Cone zero(Eigen::Index p) { return {ConeKind::kZero, p}; }
  static Cone nonneg(Eigen::Index p) { return {ConeKind::kNonneg, p}; }
  static Cone nonpos(Eigen::Index p) { return {ConeKind::kNonpos, p}; }
  static Cone second_order(Eigen::Index p) {
    if (p < 1) throw ConfigError("second-order cone needs dim >= 1");
    return {ConeKind::kSecondOrder, p};
  }
};

inline std::string_view cone_kind_name(ConeKind k) {
  switch (k) {
    case ConeKind::kZero:
      return "zero";
    case ConeKind::kNonneg:
      return "nonneg";
    case ConeKind::kNonpos:
      return "nonpos";
    case ConeKind::kSecondOrder:
      return "soc";
  }
  return "?";
}

inline ConeKind parse_cone_kind(std::string_view s) {
  if (s == "zero") return ConeKind::kZero;
  if (s == "nonneg") return ConeKind::kNonneg;
  if (s == "nonpos") return ConeKind::kNonpos;
  if (s == "soc") return ConeKind::kSecondOrder;
  throw ConfigError("unknown cone kind '" + std::string(s) + "'");
}

namespace detail {

inline void check_dim(const Cone& cone, const Vector& v) {
  if (v.size() != cone.dim) {
    throw ConfigError("cone dimension " + std::to_string(cone.dim) +
                      " does not match vector length " +
                      std::to_string(v.size()));
  }
}

// Lorentz cone projection. ||z|| = 0 maps to (max(t, 0), 0).
inline Vector project_lorentz(const Vector& v) {
  const Eigen::Index m = v.size() - 1;
  const double t = v[0];
  const double r = v.tail(m).norm();
  if (r <= t) return v;
  if (r <= -t) return Vector::Zero(v.size());
  Vector out(v.size());
  const double s = 0.5 * (t + r);
  out[0] = s;
  out.tail(m) = (s / r) * v.tail(m);
  return out;
}

}  // namespace detail

inline Vector project_cone(const Cone& cone, const Vector& v) {
  detail::check_dim(cone, v);
  switch (cone.kind) {
    case ConeKind::kZero:
      return Vector::Zero(v.size());
    case ConeKind::kNonneg:
      return v.cwiseMax(0.0);
    case ConeKind::kNonpos:
      return v.cwiseMin(0.0);
    case ConeKind::kSecondOrder:
      return detail::project_lorentz(v);
  }
  return v;
}

inline Vector project_dual_cone(const Cone& cone, const Vector& v) {
  detail::check_dim(cone, v);
  if (cone.kind == ConeKind::kZero) return v;
  // The remaining families are self-dual.
  return project_cone(cone, v);
}

inline double dist_cone(const Cone& cone, const Vector& v) {
  return (v - project_cone(cone, v)).norm();
}

inline double dist_dual_cone(const Cone& cone, const Vector& v) {
  return (v - project_dual_cone(cone, v)).norm();
}

}  // namespace dfo

#endif  // DFO_CONES_HPP
