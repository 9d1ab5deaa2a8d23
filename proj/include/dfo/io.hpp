#ifndef DFO_IO_HPP
#define DFO_IO_HPP

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfo/cones.hpp"
#include "dfo/errors.hpp"
#include "dfo/methods.hpp"
#include "dfo/model.hpp"

namespace dfo {

using Json = nlohmann::json;

// --- Problem files ------------------------------------------------------------
//
// {"objective": {"kind": "quadratic" | "quadlog",
//                "Q": [[...], ...] | {"diag": [...]},
//                "q": [...], "gamma": s, "a": [...], "b": [...]},
//  "G": [[...], ...] | {"rows", "cols", "indptr", "indices", "values"},
//  "g": [...],
//  "cone": {"kind": "zero|nonneg|nonpos|soc", "dim": p},
//  "set": {"kind": "whole|nonneg|box", "lb": [...], "ub": [...]}}
//
// null in lb/ub stands for an infinite bound.

namespace detail {

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline Json bounds_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isinf(v[i])) {
      out.push_back(nullptr);
    } else {
      out.push_back(v[i]);
    }
  }
  return out;
}

inline Vector json_to_vector(const Json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ConfigError(std::string(what) + " must contain numbers");
    }
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Vector json_to_bounds(const Json& j, double inf_value, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] =
        j[i].is_null() ? inf_value : j[i].get<double>();
  }
  return v;
}

inline Json dense_to_json(const DenseMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

inline DenseMatrix json_to_dense(const Json& j, Eigen::Index cols_if_empty,
                                 const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be a 2-D array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols =
      rows == 0 ? cols_if_empty : static_cast<Eigen::Index>(j[0].size());
  DenseMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(std::string(what) + " rows must have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

inline Json matrix_to_json(const ConstraintMatrix& g) {
  if (const SparseMatrix* s = g.sparse()) {
    Json out;
    out["rows"] = s->rows();
    out["cols"] = s->cols();
    Json indptr = Json::array();
    Json indices = Json::array();
    Json values = Json::array();
    for (Eigen::Index i = 0; i <= s->rows(); ++i) {
      indptr.push_back(s->outerIndexPtr()[i]);
    }
    for (Eigen::Index k = 0; k < s->nonZeros(); ++k) {
      indices.push_back(s->innerIndexPtr()[k]);
      values.push_back(s->valuePtr()[k]);
    }
    out["indptr"] = std::move(indptr);
    out["indices"] = std::move(indices);
    out["values"] = std::move(values);
    return out;
  }
  return dense_to_json(*g.dense());
}

inline ConstraintMatrix json_to_matrix(const Json& j, Eigen::Index n) {
  if (j.is_object()) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto indptr = j.at("indptr").get<std::vector<long>>();
    const auto indices = j.at("indices").get<std::vector<long>>();
    const auto values = j.at("values").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(indptr.size()) != rows + 1 ||
        indices.size() != values.size() ||
        (!indptr.empty() && indptr.back() != static_cast<long>(values.size()))) {
      throw ConfigError("sparse G: inconsistent indptr/indices/values");
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(values.size());
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (long k = indptr[r]; k < indptr[r + 1]; ++k) {
        if (indices[k] < 0 || indices[k] >= cols) {
          throw ConfigError("sparse G: column index out of range");
        }
        trip.emplace_back(r, indices[k], values[k]);
      }
    }
    SparseMatrix m(rows, cols);
    m.setFromTriplets(trip.begin(), trip.end());
    return ConstraintMatrix(std::move(m));
  }
  return ConstraintMatrix(json_to_dense(j, n, "G"));
}

}  // namespace detail

inline Json problem_to_json(const ConicProblem& prob) {
  const auto& obj = prob.objective();
  Json o;
  o["kind"] = obj.kind() == ObjectiveKind::kQuadratic ? "quadratic" : "quadlog";
  if (obj.Q().is_diagonal()) {
    o["Q"] = {{"diag", detail::vector_to_json(obj.Q().diag())}};
  } else {
    o["Q"] = detail::dense_to_json(obj.Q().dense());
  }
  o["q"] = detail::vector_to_json(obj.q());
  if (obj.kind() == ObjectiveKind::kQuadLog) {
    o["gamma"] = obj.gamma();
    o["a"] = detail::vector_to_json(obj.a());
    o["b"] = detail::vector_to_json(obj.b());
  }
  Json j;
  j["objective"] = std::move(o);
  j["G"] = detail::matrix_to_json(prob.G());
  j["g"] = detail::vector_to_json(prob.g());
  j["cone"] = {{"kind", std::string(cone_kind_name(prob.cone().kind))},
               {"dim", prob.cone().dim}};
  Json s;
  s["kind"] = std::string(set_kind_name(prob.set().kind));
  if (prob.set().kind == SetKind::kBox) {
    s["lb"] = detail::bounds_to_json(prob.set().lb);
    s["ub"] = detail::bounds_to_json(prob.set().ub);
  }
  j["set"] = std::move(s);
  return j;
}

inline ConicProblem problem_from_json(const Json& j) {
  try {
    const Json& o = j.at("objective");
    const std::string kind = o.value("kind", "quadratic");
    Vector q = detail::json_to_vector(o.at("q"), "objective.q");
    const Eigen::Index n = q.size();
    SymmetricForm qm;
    const Json& qj = o.at("Q");
    if (qj.is_object()) {
      qm = SymmetricForm::diagonal(detail::json_to_vector(qj.at("diag"), "Q.diag"));
    } else {
      qm = SymmetricForm(detail::json_to_dense(qj, n, "Q"));
    }
    ObjectiveOracle obj;
    if (kind == "quadratic") {
      obj = ObjectiveOracle::quadratic(std::move(qm), std::move(q));
    } else if (kind == "quadlog") {
      obj = ObjectiveOracle::quad_log(
          std::move(qm), std::move(q), o.at("gamma").get<double>(),
          o.contains("a") ? detail::json_to_vector(o["a"], "objective.a")
                          : Vector::Zero(n),
          o.contains("b") ? detail::json_to_vector(o["b"], "objective.b")
                          : Vector::Zero(n));
    } else {
      throw ConfigError("unknown objective kind '" + kind + "'");
    }
    ConstraintMatrix g_mat = detail::json_to_matrix(j.at("G"), n);
    Vector g = detail::json_to_vector(j.at("g"), "g");
    const Json& cj = j.at("cone");
    const ConeKind ck = parse_cone_kind(cj.at("kind").get<std::string>());
    const Eigen::Index p = cj.value("dim", g.size());
    Cone cone = ck == ConeKind::kSecondOrder ? Cone::second_order(p)
                                             : Cone{ck, p};
    SimpleSet set = SimpleSet::whole(n);
    if (j.contains("set")) {
      const Json& sj = j["set"];
      const std::string sk = sj.value("kind", "whole");
      if (sk == "whole") {
        set = SimpleSet::whole(n);
      } else if (sk == "nonneg") {
        set = SimpleSet::nonneg(n);
      } else if (sk == "box") {
        const double inf = std::numeric_limits<double>::infinity();
        set = SimpleSet::box(detail::json_to_bounds(sj.at("lb"), -inf, "set.lb"),
                             detail::json_to_bounds(sj.at("ub"), inf, "set.ub"));
      } else {
        throw ConfigError("unknown set kind '" + sk + "'");
      }
    }
    return ConicProblem(std::move(obj), std::move(g_mat), std::move(g), cone,
                        std::move(set));
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed problem file: ") + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline ConicProblem load_problem(const std::string& path) {
  return problem_from_json(read_json_file(path));
}

inline void save_problem(const std::string& path, const ConicProblem& prob) {
  write_text_file(path, problem_to_json(prob).dump() + "\n");
}

// --- Trace CSV -----------------------------------------------------------------

inline constexpr const char* kTraceColumns[] = {
    "k",          "d",          "grad_norm", "gradmap_norm", "infeas_last",
    "subopt_last", "infeas_avg", "subopt_avg", "dist_x0",     "wall_ns"};

inline void write_trace_csv(std::ostream& os, const IterationTrace& trace) {
  for (std::size_t i = 0; i < std::size(kTraceColumns); ++i) {
    os << (i ? "," : "") << kTraceColumns[i];
  }
  os << '\n';
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(17);
  for (const auto& r : trace.rows) {
    os << r.k << ',' << r.d << ',' << r.grad_norm << ',' << r.gradmap_norm
       << ',' << r.infeas_last << ',' << r.subopt_last << ',' << r.infeas_avg
       << ',' << r.subopt_avg << ',' << r.dist_x0 << ',' << r.wall_ns << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

inline void save_trace_csv(const std::string& path, const IterationTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  write_text_file(path, os.str());
}

namespace detail {

inline double parse_csv_double(const std::string& cell) {
  if (cell == "nan" || cell == "-nan" || cell == "NaN") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (cell == "inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(cell, &used);
  if (used != cell.size()) throw ConfigError("bad CSV number '" + cell + "'");
  return v;
}

}  // namespace detail

// Reads a trace written by write_trace_csv. The method tag is not stored in
// the CSV; callers set it.
inline IterationTrace read_trace_csv(std::istream& is, Method method) {
  IterationTrace trace;
  trace.method = method;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("trace CSV is empty");
  {
    std::stringstream hs(line);
    std::string cell;
    std::size_t i = 0;
    while (std::getline(hs, cell, ',')) {
      if (i >= std::size(kTraceColumns) || cell != kTraceColumns[i]) {
        throw ConfigError("trace CSV header mismatch at column " +
                          std::to_string(i) + " ('" + cell + "')");
      }
      ++i;
    }
    if (i != std::size(kTraceColumns)) {
      throw ConfigError("trace CSV header is missing columns");
    }
  }
  long line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != std::size(kTraceColumns)) {
      throw ConfigError("trace CSV line " + std::to_string(line_no) +
                        " has " + std::to_string(cells.size()) + " fields");
    }
    try {
      IterationRow r;
      r.k = std::stol(cells[0]);
      r.d = detail::parse_csv_double(cells[1]);
      r.grad_norm = detail::parse_csv_double(cells[2]);
      r.gradmap_norm = detail::parse_csv_double(cells[3]);
      r.infeas_last = detail::parse_csv_double(cells[4]);
      r.subopt_last = detail::parse_csv_double(cells[5]);
      r.infeas_avg = detail::parse_csv_double(cells[6]);
      r.subopt_avg = detail::parse_csv_double(cells[7]);
      r.dist_x0 = detail::parse_csv_double(cells[8]);
      r.wall_ns = std::stoll(cells[9]);
      trace.rows.push_back(r);
    } catch (const std::logic_error&) {
      throw ConfigError("trace CSV line " + std::to_string(line_no) +
                        " is malformed");
    }
  }
  return trace;
}

inline IterationTrace load_trace_csv(const std::string& path, Method method) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_trace_csv(in, method);
}

// --- Key/value config ------------------------------------------------------------
//
//   # comment
//   key = value
//
// Keys are case-sensitive; whitespace around keys and values is ignored.

using KeyValues = std::map<std::string, std::string>;

inline KeyValues parse_key_values(std::istream& is) {
  KeyValues kv;
  std::string line;
  long line_no = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_key_values(in);
}

namespace detail {

inline double kv_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
}

inline long kv_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long d = std::stol(v, &used);
    if (used == v.size()) return d;
  } catch (const std::logic_error&) {
  }
  throw ConfigError("config key '" + key + "': '" + v + "' is not an integer");
}

inline bool kv_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

}  // namespace detail

// Parses "a,b,c" (or a JSON array) into a vector.
inline Vector parse_vector_text(const std::string& text) {
  std::string s = text;
  if (!s.empty() && s.front() == '[') {
    return detail::json_to_vector(Json::parse(s), "vector");
  }
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    vals.push_back(detail::kv_double("vector", cell));
  }
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

// Applies the solver keys of `kv` to `cfg`. Unknown keys are left to the
// caller; returns the keys consumed.
inline std::vector<std::string> apply_solver_keys(const KeyValues& kv,
                                                  SolverConfig& cfg) {
  std::vector<std::string> used;
  for (const auto& [key, value] : kv) {
    bool hit = true;
    if (key == "method") {
      cfg.method = parse_method(value);
    } else if (key == "epsilon") {
      cfg.epsilon = detail::kv_double(key, value);
    } else if (key == "max_iter") {
      cfg.max_iter = detail::kv_long(key, value);
    } else if (key == "recovery") {
      cfg.recovery = parse_recovery(value);
    } else if (key == "inner_tol") {
      cfg.inner_tol = detail::kv_double(key, value);
    } else if (key == "alpha") {
      cfg.alpha = detail::kv_double(key, value);
    } else if (key == "lipschitz_g") {
      cfg.lipschitz_g = detail::kv_double(key, value);
    } else if (key == "kappa") {
      cfg.kappa = detail::kv_double(key, value);
    } else if (key == "restart_interval") {
      cfg.restart_interval = detail::kv_long(key, value);
    } else if (key == "restart_contraction") {
      cfg.restart_contraction = detail::kv_double(key, value);
    } else if (key == "adaptive_restart") {
      cfg.adaptive_restart = detail::kv_bool(key, value);
    } else if (key == "f_star") {
      cfg.f_star = detail::kv_double(key, value);
    } else if (key == "delta") {
      cfg.delta = detail::kv_double(key, value);
    } else if (key == "dual_radius") {
      cfg.dual_radius = detail::kv_double(key, value);
    } else if (key == "stop_at_budget") {
      cfg.stop_at_budget = detail::kv_bool(key, value);
    } else if (key == "hybrid_k") {
      cfg.hybrid_k = detail::kv_long(key, value);
    } else if (key == "x0") {
      cfg.x0 = parse_vector_text(value);
    } else if (key == "use_stopping_rule") {
      cfg.use_stopping_rule = detail::kv_bool(key, value);
    } else if (key == "stop_rule") {
      if (value == "both") {
        cfg.stop_rule = StopRule::kBoth;
      } else if (value == "either") {
        cfg.stop_rule = StopRule::kEither;
      } else {
        throw ConfigError("stop_rule must be 'both' or 'either'");
      }
    } else {
      hit = false;
    }
    if (hit) used.push_back(key);
  }
  return used;
}

}  // namespace dfo

#endif  // DFO_IO_HPP
