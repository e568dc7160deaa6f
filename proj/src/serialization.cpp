#include "mbasis/serialization.hpp"

#include "mbasis/error.hpp"

#include <algorithm>
#include <cmath>

namespace mbasis::io {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path + ": " + msg);
}

std::vector<Vector> vectors_from_rows(const Mat& m) {
  std::vector<Vector> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).transpose());
  return out;
}

Mat rows_matrix(std::span<const Vector> xs) {
  if (xs.empty()) return Mat(0, 0);
  return columns_of(xs).transpose();
}

}  // namespace

json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double number_from(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  fail(path, "expected a number or \"inf\"");
}

json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(number(v(k)));
  return a;
}

json to_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vec(m.row(i).transpose())));
  return a;
}

Vec vec_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k)
    v(static_cast<Eigen::Index>(k)) = number_from(j[k], path + "[" + std::to_string(k) + "]");
  return v;
}

Mat mat_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of rows");
  if (j.empty()) return Mat(0, 0);
  const Vec first = vec_from_json(j[0], path + "[0]");
  Mat m(static_cast<Eigen::Index>(j.size()), first.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Vec row = vec_from_json(j[i], p);
    if (row.size() != first.size()) fail(p, "row length " + std::to_string(row.size()) + " differs from " +
                                                std::to_string(first.size()));
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

void reject_unknown_fields(const json& j, std::initializer_list<std::string_view> allowed, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(path + "." + key, "unknown field");
}

const json& require_field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

json to_json(const NormSpec& s) {
  json j;
  j["dim"] = s.dim();
  j["kind"] = std::string(to_string(s.kind()));
  switch (s.kind()) {
    case NormKind::PNorm: j["p"] = number(s.p()); break;
    case NormKind::WeightedPNorm:
      j["p"] = number(s.p());
      j["w"] = to_json(s.weights());
      break;
    case NormKind::Polyhedral: j["A"] = to_json(s.rows()); break;
  }
  return j;
}

NormSpec norm_spec_from_json(const json& j, const std::string& path) {
  reject_unknown_fields(j, {"dim", "kind", "p", "w", "A"}, path);
  const json& kind_j = require_field(j, "kind", path);
  if (!kind_j.is_string()) fail(path + ".kind", "expected a string");
  const auto kind = kind_j.get<std::string>();
  const json& dim_j = require_field(j, "dim", path);
  if (!dim_j.is_number_integer() || dim_j.get<long>() < 1) fail(path + ".dim", "expected a positive integer");
  const int dim = dim_j.get<int>();

  try {
    if (kind == "pnorm") {
      if (j.contains("w") || j.contains("A")) fail(path, "pnorm takes only dim and p");
      return NormSpec::pnorm(dim, number_from(require_field(j, "p", path), path + ".p"));
    }
    if (kind == "weighted_pnorm") {
      if (j.contains("A")) fail(path + ".A", "not valid for weighted_pnorm");
      const Vec w = vec_from_json(require_field(j, "w", path), path + ".w");
      if (w.size() != dim) fail(path + ".w", "length " + std::to_string(w.size()) + " != dim " + std::to_string(dim));
      return NormSpec::weighted_pnorm(number_from(require_field(j, "p", path), path + ".p"), w);
    }
    if (kind == "polyhedral") {
      if (j.contains("p") || j.contains("w")) fail(path, "polyhedral takes only dim and A");
      const Mat a = mat_from_json(require_field(j, "A", path), path + ".A");
      if (a.cols() != dim) fail(path + ".A", "column count " + std::to_string(a.cols()) + " != dim " + std::to_string(dim));
      return NormSpec::polyhedral(a);
    }
  } catch (const InvalidArgument& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown norm kind '" + kind + "'");
}

json to_json(const HilbertStructure& hs) {
  json j;
  j["space"] = to_json(hs.space());
  j["t"] = to_json(hs.weights());
  j["U"] = to_json(rows_of(hs.functionals()));
  j["G"] = to_json(hs.gram());
  return j;
}

HilbertStructure hilbert_from_json(const json& j, const std::string& path) {
  reject_unknown_fields(j, {"space", "t", "U", "G"}, path);
  const NormSpec space = norm_spec_from_json(require_field(j, "space", path), path + ".space");
  const Vec t = vec_from_json(require_field(j, "t", path), path + ".t");
  const Mat u = mat_from_json(require_field(j, "U", path), path + ".U");
  const Mat g = mat_from_json(require_field(j, "G", path), path + ".G");
  std::vector<Functional> fs;
  for (Eigen::Index i = 0; i < u.rows(); ++i) fs.emplace_back(u.row(i).transpose());
  try {
    HilbertStructure hs = kuelbs_gram(space, fs, t);
    if (g.rows() != space.dim() || g.cols() != space.dim()) fail(path + ".G", "wrong shape");
    const double diff = (hs.gram() - g).cwiseAbs().maxCoeff();
    if (diff > 1e-9) fail(path + ".G", "stored Gram matrix differs from the recomputed one by " + format_double(diff));
    return hs;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

json to_json(const SystemOfVectors& s) {
  json j;
  j["space"] = to_json(s.space);
  j["X"] = to_json(rows_matrix(s.vectors));
  return j;
}

SystemOfVectors system_from_json(const json& j, const std::string& path) {
  reject_unknown_fields(j, {"space", "X"}, path);
  SystemOfVectors s{norm_spec_from_json(require_field(j, "space", path), path + ".space"), {}};
  const Mat x = mat_from_json(require_field(j, "X", path), path + ".X");
  if (x.rows() > 0 && x.cols() != s.space.dim()) fail(path + ".X", "vector length does not match dim");
  s.vectors = vectors_from_rows(x);
  return s;
}

json to_json(const BiorthogonalSystem& b) {
  json j = to_json(b.system);
  j["F"] = to_json(rows_of(b.functionals));
  return j;
}

BiorthogonalSystem biorthogonal_from_json(const json& j, const std::string& path) {
  reject_unknown_fields(j, {"space", "X", "F"}, path);
  json sys = j;
  sys.erase("F");
  SystemOfVectors s = system_from_json(sys, path);
  const Mat f = mat_from_json(require_field(j, "F", path), path + ".F");
  if (f.rows() > 0 && f.cols() != s.space.dim()) fail(path + ".F", "functional length does not match dim");
  std::vector<Functional> fs;
  for (Eigen::Index i = 0; i < f.rows(); ++i) fs.emplace_back(f.row(i).transpose());
  try {
    return make_biorthogonal_system(std::move(s), std::move(fs));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

json to_json(const AuditReport& r) {
  json j;
  j["name"] = r.name();
  json metrics = json::object();
  for (const auto& [k, v] : r.metrics()) metrics[k] = number(v);
  j["metrics"] = metrics;
  json checks = json::object();
  for (const auto& [k, v] : r.checks()) checks[k] = v;
  j["checks"] = checks;
  j["findings"] = r.findings();
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"i", row.index},
                    {"norm_x", number(row.norm_x)},
                    {"dualnorm_f", number(row.dual_norm_f)},
                    {"product", number(row.product)},
                    {"defect_row_max", number(row.defect_row_max)}});
  j["rows"] = rows;
  if (r.pairing) j["pairing"] = to_json(*r.pairing);
  return j;
}

json to_json(const ExtensionProblem& p) {
  json j;
  j["space"] = to_json(p.space);
  json cons = json::array();
  for (const auto& c : p.constraints) cons.push_back({{"v", to_json(c.v.coords)}, {"value", number(c.value)}});
  j["constraints"] = cons;
  if (p.bound_scale) j["bound_scale"] = number(*p.bound_scale);
  return j;
}

ExtensionProblem extension_problem_from_json(const json& j, const std::string& path) {
  reject_unknown_fields(j, {"space", "constraints", "bound_scale"}, path);
  ExtensionProblem p{norm_spec_from_json(require_field(j, "space", path), path + ".space"), {}, std::nullopt};
  const json& cons = require_field(j, "constraints", path);
  if (!cons.is_array()) fail(path + ".constraints", "expected an array");
  for (std::size_t k = 0; k < cons.size(); ++k) {
    const std::string cp = path + ".constraints[" + std::to_string(k) + "]";
    reject_unknown_fields(cons[k], {"v", "value"}, cp);
    const Vec v = vec_from_json(require_field(cons[k], "v", cp), cp + ".v");
    if (v.size() != p.space.dim()) fail(cp + ".v", "length does not match dim");
    p.constraints.push_back({Vector(v), number_from(require_field(cons[k], "value", cp), cp + ".value")});
  }
  if (j.contains("bound_scale")) p.bound_scale = number_from(j["bound_scale"], path + ".bound_scale");
  return p;
}

json to_json(const ExtensionResult& r) {
  json j;
  j["functional"] = to_json(r.functional.coords);
  j["optimum"] = number(r.optimum);
  j["lower_bound"] = number(r.lower_bound);
  j["upper_bound"] = number(r.upper_bound);
  j["converged"] = r.converged;
  j["certificate"] = to_json(r.certificate.coords);
  j["solver"] = std::string(to_string(r.solver));
  j["independent_constraints"] = r.independent_constraints;
  j["iterations"] = r.iterations;
  if (r.bound_satisfied) j["bound_satisfied"] = *r.bound_satisfied;
  return j;
}

}  // namespace mbasis::io
