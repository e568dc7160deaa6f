#include "mbasis/scenario.hpp"

#include "mbasis/auerbach.hpp"
#include "mbasis/error.hpp"
#include "mbasis/serialization.hpp"

#include <algorithm>
#include <random>

namespace mbasis::cli {

using io::json;

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
    const std::size_t last_nl = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t column = last_nl == std::string::npos || byte == 0 ? byte + 1 : byte - last_nl;
    throw ParseError(std::to_string(line) + ":" + std::to_string(column) + ": malformed JSON");
  }
}

void require_version(const json& j, const std::string& path) {
  const json& v = io::require_field(j, "version", path);
  if (!v.is_number_integer() || v.get<int>() != 1) throw ParseError(path + ".version: expected 1");
}

std::string string_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = io::require_field(j, key, path);
  if (!v.is_string()) throw ParseError(path + "." + key + ": expected a string");
  return v.get<std::string>();
}

int int_field(const json& j, const std::string& key, const std::string& path) {
  const json& v = io::require_field(j, key, path);
  if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
  return v.get<int>();
}

std::optional<std::uint64_t> seed_field(const json& j, const std::string& path) {
  if (!j.contains("seed")) return std::nullopt;
  const json& v = j["seed"];
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ParseError(path + ".seed: expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

Generator generator_from(const std::string& name, const std::string& path) {
  if (name == "explicit") return Generator::Explicit;
  if (name == "random") return Generator::Random;
  if (name == "orthonormal") return Generator::Orthonormal;
  if (name == "auerbach") return Generator::Auerbach;
  if (name == "standard-basis") return Generator::StandardBasis;
  if (name == "example12") return Generator::Example12;
  throw ParseError(path + ": unknown generator '" + name + "'");
}

bool needs_seed(Generator g) {
  return g == Generator::Random || g == Generator::Orthonormal || g == Generator::Auerbach;
}

std::vector<Construction> constructions_from(const json& j, const std::string& path) {
  const std::string p = path + ".constructions";
  if (!j.contains("constructions")) return {Construction::Literal, Construction::Complement};
  const json& arr = j["constructions"];
  if (!arr.is_array() || arr.empty()) throw ParseError(p + ": expected a nonempty array");
  std::vector<Construction> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string name = arr[k].is_string() ? arr[k].get<std::string>() : "";
    Construction c;
    if (name == "literal")
      c = Construction::Literal;
    else if (name == "complement")
      c = Construction::Complement;
    else if (name == "min-norm")
      c = Construction::MinNorm;
    else
      throw ParseError(p + "[" + std::to_string(k) + "]: expected literal, complement or min-norm");
    if (std::find(out.begin(), out.end(), c) != out.end())
      throw ParseError(p + "[" + std::to_string(k) + "]: duplicate construction");
    out.push_back(c);
  }
  return out;
}

Tolerances tolerances_from(const json& j, const std::string& path) {
  Tolerances t;
  if (!j.contains("tolerances")) return t;
  const std::string p = path + ".tolerances";
  const json& tj = j["tolerances"];
  if (!tj.is_object()) throw ParseError(p + ": expected an object");
  io::reject_unknown_fields(tj, {"defect", "product"}, p);
  if (tj.contains("defect")) t.defect = io::number_from(tj["defect"], p + ".defect");
  if (tj.contains("product")) t.product = io::number_from(tj["product"], p + ".product");
  if (!(t.defect > 0.0) || !(t.product > 0.0)) throw ParseError(p + ": tolerances must be positive");
  return t;
}

HilbertSpec hilbert_from(const json& j, const std::string& path, bool allow_explicit) {
  HilbertSpec h;
  if (!j.contains("hilbert")) return h;
  const std::string p = path + ".hilbert";
  const json& hj = j["hilbert"];
  if (!hj.is_object()) throw ParseError(p + ": expected an object");
  io::reject_unknown_fields(hj, {"functionals", "U", "vectors", "with_standard_basis", "weights", "t"}, p);
  if (hj.contains("functionals")) {
    const std::string f = string_field(hj, "functionals", p);
    if (f == "from-biorthogonal")
      h.functionals = FunctionalSource::FromBiorthogonal;
    else if (f == "from-duality-maps")
      h.functionals = FunctionalSource::FromDualityMaps;
    else if (f == "explicit")
      h.functionals = FunctionalSource::Explicit;
    else
      throw ParseError(p + ".functionals: expected from-biorthogonal, from-duality-maps or explicit");
  }
  if (hj.contains("weights")) {
    const std::string w = string_field(hj, "weights", p);
    if (w == "geometric")
      h.weights = WeightRule::Geometric;
    else if (w == "uniform")
      h.weights = WeightRule::Uniform;
    else if (w == "explicit")
      h.weights = WeightRule::Explicit;
    else
      throw ParseError(p + ".weights: expected geometric, uniform or explicit");
  }
  const bool explicit_u = h.functionals == FunctionalSource::Explicit;
  const bool explicit_t = h.weights == WeightRule::Explicit;
  if (!allow_explicit && (explicit_u || explicit_t)) throw ParseError(p + ": explicit data is not allowed in a sweep");
  if (explicit_u != hj.contains("U")) throw ParseError(p + ".U: required exactly when functionals is explicit");
  if (explicit_t != hj.contains("t")) throw ParseError(p + ".t: required exactly when weights is explicit");
  for (const char* key : {"vectors", "with_standard_basis"})
    if (hj.contains(key) && h.functionals != FunctionalSource::FromDualityMaps)
      throw ParseError(p + "." + key + ": only used with from-duality-maps");
  if (hj.contains("with_standard_basis")) {
    const json& v = hj["with_standard_basis"];
    if (v.is_boolean())
      h.with_standard_basis = v.get<bool>();
    else if (v != "auto")
      throw ParseError(p + ".with_standard_basis: expected true, false or \"auto\"");
  }
  if (explicit_u) h.u = io::mat_from_json(hj["U"], p + ".U");
  if (explicit_t) h.t = io::vec_from_json(hj["t"], p + ".t");
  if (hj.contains("vectors")) {
    if (!allow_explicit) throw ParseError(p + ".vectors: explicit data is not allowed in a sweep");
    const Mat v = io::mat_from_json(hj["vectors"], p + ".vectors");
    for (Eigen::Index r = 0; r < v.rows(); ++r) h.duality_vectors.emplace_back(Vec(v.row(r).transpose()));
  }
  return h;
}

Scenario scenario_from(const json& j, const std::string& path, bool top_level) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  io::reject_unknown_fields(j,
                            top_level ? std::initializer_list<std::string_view>{"version", "name", "space", "system",
                                                                                "hilbert", "constructions", "tolerances"}
                                      : std::initializer_list<std::string_view>{"name", "space", "system", "hilbert",
                                                                                "constructions", "tolerances"},
                            path);
  if (top_level) require_version(j, path);
  Scenario s;
  s.name = string_field(j, "name", path);
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
    throw ParseError(path + ".name: must be a nonempty file-name-safe string");

  const std::string sp = path + ".system";
  const json& sys = io::require_field(j, "system", path);
  if (!sys.is_object()) throw ParseError(sp + ": expected an object");
  io::reject_unknown_fields(sys, {"generator", "X", "seed", "sweeps"}, sp);
  s.generator = generator_from(string_field(sys, "generator", sp), sp + ".generator");
  s.seed = seed_field(sys, sp);
  if (s.generator == Generator::Explicit) {
    s.x = io::mat_from_json(io::require_field(sys, "X", sp), sp + ".X");
  } else if (sys.contains("X")) {
    throw ParseError(sp + ".X: only used with the explicit generator");
  }
  if (sys.contains("sweeps")) {
    if (s.generator != Generator::Auerbach) throw ParseError(sp + ".sweeps: only used with the auerbach generator");
    s.auerbach_sweeps = int_field(sys, "sweeps", sp);
    if (s.auerbach_sweeps < 1) throw ParseError(sp + ".sweeps: must be positive");
  }

  if (j.contains("space")) {
    s.space = io::norm_spec_from_json(j["space"], path + ".space");
  } else if (s.generator == Generator::Example12) {
    s.space = NormSpec::pnorm(2, 2.0);
  } else {
    throw ParseError(path + ".space: missing required field");
  }
  if (s.generator == Generator::Example12 && s.space.dim() != 2)
    throw ParseError(path + ".space: example12 needs a two-dimensional space");
  if (s.generator == Generator::Explicit && s.x.cols() != s.space.dim())
    throw ParseError(sp + ".X: vectors must have dimension " + std::to_string(s.space.dim()));

  s.hilbert = hilbert_from(j, path, true);
  s.constructions = constructions_from(j, path);
  s.tolerances = tolerances_from(j, path);
  return s;
}

}  // namespace

std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::Literal:
      return "literal";
    case Construction::Complement:
      return "complement";
    case Construction::MinNorm:
      return "min-norm";
  }
  return "unknown";
}

std::vector<Scenario> parse_scenarios(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) throw ParseError("scenario: expected an object");
  if (!j.contains("scenarios")) return {scenario_from(j, "scenario", true)};
  io::reject_unknown_fields(j, {"version", "scenarios"}, "file");
  require_version(j, "file");
  const json& arr = j["scenarios"];
  if (!arr.is_array() || arr.empty()) throw ParseError("file.scenarios: expected a nonempty array");
  std::vector<Scenario> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    out.push_back(scenario_from(arr[k], "scenarios[" + std::to_string(k) + "]", false));
    for (std::size_t m = 0; m + 1 < out.size(); ++m)
      if (out[m].name == out.back().name)
        throw ParseError("scenarios[" + std::to_string(k) + "].name: duplicate name '" + out.back().name + "'");
  }
  return out;
}

SweepSpec parse_sweep(const std::string& text) {
  const json j = parse_text(text);
  const std::string path = "sweep";
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  io::reject_unknown_fields(j,
                            {"version", "name", "kind", "p", "n_min", "n_max", "generator", "seed", "sweeps", "hilbert",
                             "constructions", "tolerances"},
                            path);
  require_version(j, path);
  SweepSpec s;
  s.name = string_field(j, "name", path);
  if (s.name.empty() || s.name.find_first_of("/\\") != std::string::npos)
    throw ParseError(path + ".name: must be a nonempty file-name-safe string");
  const std::string kind = string_field(j, "kind", path);
  if (kind == "pnorm")
    s.kind = NormKind::PNorm;
  else if (kind == "weighted_pnorm")
    s.kind = NormKind::WeightedPNorm;
  else
    throw ParseError(path + ".kind: expected pnorm or weighted_pnorm");
  s.p = io::number_from(io::require_field(j, "p", path), path + ".p");
  if (!(s.p >= 1.0)) throw ParseError(path + ".p: must be >= 1");
  s.n_min = int_field(j, "n_min", path);
  s.n_max = int_field(j, "n_max", path);
  if (s.n_min < 2 || s.n_max < s.n_min || s.n_max > 200)
    throw ParseError(path + ": dimension range must satisfy 2 <= n_min <= n_max <= 200");
  s.generator = generator_from(string_field(j, "generator", path), path + ".generator");
  if (s.generator == Generator::Explicit || s.generator == Generator::Example12)
    throw ParseError(path + ".generator: must be random, orthonormal, auerbach or standard-basis");
  s.seed = seed_field(j, path);
  if (j.contains("sweeps")) {
    if (s.generator != Generator::Auerbach) throw ParseError(path + ".sweeps: only used with the auerbach generator");
    s.auerbach_sweeps = int_field(j, "sweeps", path);
    if (s.auerbach_sweeps < 1) throw ParseError(path + ".sweeps: must be positive");
  }
  s.hilbert = hilbert_from(j, path, false);
  s.constructions = constructions_from(j, path);
  s.tolerances = tolerances_from(j, path);
  return s;
}

NormSpec sweep_space(const SweepSpec& spec, int n) {
  if (spec.kind == NormKind::PNorm) return NormSpec::pnorm(n, spec.p);
  Vec w(n);
  for (int k = 0; k < n; ++k) w(k) = 1.0 / (k + 1);
  return NormSpec::weighted_pnorm(spec.p, w);
}

SystemOfVectors generate_system(const NormSpec& space, Generator generator, const Mat& x,
                                std::optional<std::uint64_t> seed, int auerbach_sweeps) {
  const int d = space.dim();
  if (needs_seed(generator) && !seed) throw InvalidArgument("random generators need a seed");
  SystemOfVectors s{space, {}};
  switch (generator) {
    case Generator::Explicit:
      for (Eigen::Index r = 0; r < x.rows(); ++r) s.vectors.emplace_back(Vec(x.row(r).transpose()));
      break;
    case Generator::StandardBasis:
      for (int k = 0; k < d; ++k) s.vectors.emplace_back(Vec(Vec::Unit(d, k)));
      break;
    case Generator::Example12:
      s.vectors = {Vector{1.0, 0.0}, Vector{1.0, 1.0}};
      break;
    case Generator::Auerbach:
      s = auerbach_search(space, auerbach_sweeps, *seed).system;
      break;
    case Generator::Random:
    case Generator::Orthonormal: {
      std::mt19937_64 rng(*seed);
      std::normal_distribution<double> normal;
      Mat m(d, d);
      for (int attempt = 0;; ++attempt) {
        for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = normal(rng);
        const Eigen::JacobiSVD<Mat> svd(m);
        const Vec sv = svd.singularValues();
        if (sv(d - 1) > 0.0 && sv(0) / sv(d - 1) <= 1e6) break;
        if (attempt > 100) throw DegenerateSystem("could not draw a well-conditioned random system");
      }
      if (generator == Generator::Orthonormal) m = Eigen::HouseholderQR<Mat>(m).householderQ() * Mat::Identity(d, d);
      for (int k = 0; k < d; ++k) s.vectors.emplace_back(Vec(m.col(k)));
      break;
    }
  }
  return s;
}

HilbertStructure build_hilbert(const HilbertSpec& spec, const SystemOfVectors& s) {
  const NormSpec& space = s.space;
  std::vector<Functional> fs;
  switch (spec.functionals) {
    case FunctionalSource::FromDualityMaps: {
      std::vector<Vector> vs = spec.duality_vectors.empty() ? s.vectors : spec.duality_vectors;
      fs = build_duality_family(space, vs);
      const bool augment =
          spec.with_standard_basis.value_or(numerical_rank(rows_of(fs)) < space.dim());
      if (augment) {
        for (int k = 0; k < space.dim(); ++k) vs.emplace_back(Vec(Vec::Unit(space.dim(), k)));
        fs = build_duality_family(space, vs);
      }
      break;
    }
    case FunctionalSource::FromBiorthogonal: {
      const Mat x = s.matrix();
      if (x.rows() != x.cols() || numerical_rank(x) < x.cols())
        throw DegenerateSystem("from-biorthogonal needs a basis (square, invertible system)");
      const Mat inv = x.inverse();
      // Scaled to unit dual norm so the embedding stays continuous.
      for (Eigen::Index r = 0; r < inv.rows(); ++r) {
        const Functional f(Vec(inv.row(r).transpose()));
        fs.push_back(with_dual_norm(space, Functional(f.coords / dual_norm(space, f))));
      }
      break;
    }
    case FunctionalSource::Explicit:
      for (Eigen::Index r = 0; r < spec.u.rows(); ++r) fs.emplace_back(Vec(spec.u.row(r).transpose()));
      break;
  }
  const int m = static_cast<int>(fs.size());
  const Vec t = spec.weights == WeightRule::Geometric ? geometric_weights(m)
                : spec.weights == WeightRule::Uniform ? uniform_weights(m)
                                                      : spec.t;
  return kuelbs_gram(space, fs, t);
}

}  // namespace mbasis::cli
