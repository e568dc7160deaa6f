#include "mbasis/commands.hpp"

#include "mbasis/auerbach.hpp"
#include "mbasis/error.hpp"
#include "mbasis/extension.hpp"
#include "mbasis/r2.hpp"
#include "mbasis/scenario.hpp"
#include "mbasis/serialization.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

namespace mbasis::cli {

using io::json;

namespace {

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path file = dir / name;
  std::ofstream o(file, std::ios::binary | std::ios::trunc);
  o << content;
  if (!o) throw Error("cannot write " + file.string());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::uint64_t derived_seed(std::uint64_t seed, int n) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

BiorthogonalSystem run_construction(Construction c, const SystemOfVectors& sys,
                                    const std::optional<HilbertStructure>& hs) {
  if (c == Construction::MinNorm) return min_biorthogonal_functionals(sys);
  return construct_system(*hs, sys, c);
}

bool within_tolerance(const AuditReport& rep, const Tolerances& tol) {
  if (!(rep.metric("defect") <= tol.defect) || !rep.check("m_basis")) return false;
  for (const AuditRow& row : rep.rows)
    if (!(std::abs(row.product - 1.0) <= tol.product)) return false;
  return true;
}

struct Outcome {
  int code = kExitOk;
  json audit;
  std::string csv;
  std::string log;
};

json coincidence_json(const CoincidenceReport& c) {
  json rows = json::array();
  for (std::size_t i = 0; i < c.coincide.size(); ++i)
    rows.push_back({{"i", i + 1},
                    {"coincide", static_cast<bool>(c.coincide[i])},
                    {"h_orthogonal", static_cast<bool>(c.h_orthogonal[i])},
                    {"coordinate_gap", io::number(c.coordinate_gap[i])},
                    {"max_cross_inner", io::number(c.max_cross_inner[i])}});
  return {{"flags_agree", c.flags_agree()}, {"rows", rows}};
}

Outcome run_scenario(const Scenario& sc, const GlobalOptions& g) {
  Outcome o;
  Tolerances tol = sc.tolerances;
  if (g.tol) tol = {*g.tol, *g.tol};
  const std::optional<std::uint64_t> seed = g.seed ? g.seed : sc.seed;

  json& j = o.audit;
  j["name"] = sc.name;
  j["tolerances"] = {{"defect", tol.defect}, {"product", tol.product}};
  const SystemOfVectors sys = generate_system(sc.space, sc.generator, sc.x, seed, sc.auerbach_sweeps);
  j["system"] = io::to_json(sys);

  const bool needs_h = std::any_of(sc.constructions.begin(), sc.constructions.end(),
                                   [](Construction c) { return c != Construction::MinNorm; });
  std::optional<HilbertStructure> hs;
  if (needs_h) {
    hs = build_hilbert(sc.hilbert, sys);
    std::mt19937_64 rng(seed.value_or(0) ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal;
    std::vector<Vector> samples;
    for (int k = 0; k < 200; ++k) {
      Vec u(sys.space.dim());
      for (Eigen::Index m = 0; m < u.size(); ++m) u(m) = normal(rng);
      samples.emplace_back(u);
    }
    j["hilbert"] = {{"structure", io::to_json(*hs)}, {"continuity", io::to_json(check_continuity(*hs, samples))}};
    try {
      j["coincidence"] = coincidence_json(compare_literal_complement(*hs, sys, tol.defect));
    } catch (const DegenerateSystem& e) {
      j["coincidence"] = {{"error", e.what()}};
    }
  }

  std::ostringstream csv;
  csv << "construction,i,norm_x,dualnorm_f,product,defect_row_max\n";
  json results = json::array();
  json summary = json::array();
  bool all_within = true;
  for (Construction c : sc.constructions) {
    const std::string name(to_string(c));
    try {
      const BiorthogonalSystem b = run_construction(c, sys, hs);
      const AuditReport rep = audit_products(b, tol.defect);
      const bool ok = within_tolerance(rep, tol);
      all_within = all_within && ok;
      for (const AuditRow& row : rep.rows)
        csv << name << ',' << row.index << ',' << format_double(row.norm_x) << ','
            << format_double(row.dual_norm_f) << ',' << format_double(row.product) << ','
            << format_double(row.defect_row_max) << '\n';
      results.push_back({{"construction", name}, {"F", io::to_json(rows_of(b.functionals))}, {"audit", io::to_json(rep)}});
      summary.push_back({{"construction", name},
                         {"max_product", io::number(rep.metric("max_product"))},
                         {"min_product", io::number(rep.metric("min_product"))},
                         {"defect", io::number(rep.metric("defect"))},
                         {"fundamental", rep.check("fundamental")},
                         {"minimal", rep.check("minimal")},
                         {"total", rep.check("total")},
                         {"biorthogonal", rep.check("biorthogonal")},
                         {"m_basis", rep.check("m_basis")},
                         {"within_tolerance", ok}});
      o.log += sc.name + " " + name + ": max product " + format_double(rep.metric("max_product")) + ", defect " +
               format_double(rep.metric("defect")) + (ok ? "" : " (outside tolerance)") + "\n";
    } catch (const DegenerateSystem& e) {
      all_within = false;
      results.push_back({{"construction", name}, {"error", e.what()}});
      summary.push_back({{"construction", name}, {"error", e.what()}, {"within_tolerance", false}});
      o.log += sc.name + " " + name + ": degenerate system: " + e.what() + "\n";
    }
  }
  j["constructions"] = results;
  j["summary"] = {{"constructions", summary}, {"all_within_tolerance", all_within}};
  o.csv = csv.str();
  o.code = all_within ? kExitOk : kExitOutsideTolerance;
  return o;
}

int combine(int a, int b) {
  if (a == kExitOperational || b == kExitOperational) return kExitOperational;
  return std::max(a, b);
}

}  // namespace

int cmd_audit_example(const GlobalOptions& g, std::ostream& log) {
  const double tol = g.tol.value_or(1e-12);
  const AuditReport rep = euclidean_example_audit();
  json j = io::to_json(rep);
  j["tolerance"] = tol;
  write_file(g.out, "example12.audit.json", dump(j));
  write_file(g.out, "example12.products.csv", rep.products_csv());

  const double rt2 = std::sqrt(2.0);
  int code = kExitOk;
  for (const char* key : {"product_1", "product_2"}) {
    const double v = rep.metric(key);
    if (!(std::abs(v - rt2) <= tol)) {
      log << "mismatch: " << key << " = " << format_double(v) << ", expected " << format_double(rt2) << "\n";
      code = kExitOutsideTolerance;
    }
  }
  if (!(rep.metric("pairing_defect") <= tol)) {
    log << "mismatch: pairing defect " << format_double(rep.metric("pairing_defect")) << " > " << format_double(tol)
        << "\n";
    code = kExitOutsideTolerance;
  }
  for (const std::string& f : rep.findings()) log << "finding: " << f << "\n";
  log << "example12: products " << format_double(rep.metric("product_1")) << ", "
      << format_double(rep.metric("product_2")) << "\n";
  return code;
}

int cmd_construct(const std::filesystem::path& file, const GlobalOptions& g, std::ostream& log) {
  std::vector<Scenario> scenarios;
  try {
    scenarios = parse_scenarios(read_file(file));
  } catch (const ParseError& e) {
    log << file.string() << ":" << e.what() << "\n";
    return kExitOperational;
  }
  std::vector<std::future<Outcome>> jobs;
  for (const Scenario& sc : scenarios)
    jobs.push_back(std::async(scenarios.size() > 1 ? std::launch::async : std::launch::deferred, [&sc, &g] {
      try {
        return run_scenario(sc, g);
      } catch (const Error& e) {
        Outcome o;
        o.code = kExitOperational;
        o.log = sc.name + ": error: " + e.what() + "\n";
        return o;
      }
    }));
  int code = kExitOk;
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const Outcome o = jobs[k].get();
    log << o.log;
    if (o.code != kExitOperational) {
      write_file(g.out, scenarios[k].name + ".audit.json", dump(o.audit));
      write_file(g.out, scenarios[k].name + ".products.csv", o.csv);
    }
    code = combine(code, o.code);
  }
  return code;
}

int cmd_sweep(const std::filesystem::path& file, const GlobalOptions& g, std::ostream& log) {
  SweepSpec spec;
  try {
    spec = parse_sweep(read_file(file));
  } catch (const ParseError& e) {
    log << file.string() << ":" << e.what() << "\n";
    return kExitOperational;
  }
  Tolerances tol = spec.tolerances;
  if (g.tol) tol = {*g.tol, *g.tol};
  const std::optional<std::uint64_t> seed = g.seed ? g.seed : spec.seed;

  std::ostringstream csv;
  csv << "n,construction,max_product,min_product,defect,wall_ms\n";
  bool all_within = true;
  for (int n = spec.n_min; n <= spec.n_max; ++n) {
    const NormSpec space = sweep_space(spec, n);
    const std::optional<std::uint64_t> seed_n = seed ? std::optional(derived_seed(*seed, n)) : std::nullopt;
    const SystemOfVectors sys = generate_system(space, spec.generator, Mat(), seed_n, spec.auerbach_sweeps);
    std::optional<HilbertStructure> hs;
    for (Construction c : spec.constructions) {
      const auto start = std::chrono::steady_clock::now();
      double max_p = std::nan(""), min_p = std::nan(""), defect = std::nan("");
      try {
        if (c != Construction::MinNorm && !hs) hs = build_hilbert(spec.hilbert, sys);
        const AuditReport rep = audit_products(run_construction(c, sys, hs), tol.defect);
        max_p = rep.metric("max_product");
        min_p = rep.metric("min_product");
        defect = rep.metric("defect");
        all_within = all_within && within_tolerance(rep, tol);
      } catch (const DegenerateSystem& e) {
        all_within = false;
        log << "n=" << n << " " << to_string(c) << ": degenerate system: " << e.what() << "\n";
      }
      const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      csv << n << ',' << to_string(c) << ',' << format_double(max_p) << ',' << format_double(min_p) << ','
          << format_double(defect) << ',' << format_double(g.trace ? ms : 0.0) << '\n';
    }
  }
  write_file(g.out, spec.name + ".sweep.csv", csv.str());
  log << spec.name << ": " << (spec.n_max - spec.n_min + 1) << " dimensions"
      << (all_within ? "" : ", some products outside tolerance") << "\n";
  return all_within ? kExitOk : kExitOutsideTolerance;
}

int cmd_auerbach(const AuerbachArgs& a, const GlobalOptions& g, std::ostream& log) {
  const double tol = g.tol.value_or(1e-4);
  const std::uint64_t seed = g.seed.value_or(a.seed);
  const AuerbachResult r = auerbach_search(a.space, a.sweeps, seed);
  AuditReport rep = audit_products(r.biorthogonal);
  rep.set_metric("epsilon_search", r.epsilon_search);
  rep.set_metric("final_abs_det", r.det_trace.back());
  rep.set_metric("sweeps", r.sweeps);
  rep.set_check("converged", r.converged);

  json j;
  j["name"] = a.name;
  j["seed"] = seed;
  j["tolerance"] = tol;
  j["system"] = io::to_json(r.biorthogonal);
  j["audit"] = io::to_json(rep);
  if (g.trace) {
    json trace = json::array();
    for (double d : r.det_trace) trace.push_back(io::number(d));
    j["det_trace"] = trace;
  }
  write_file(g.out, a.name + ".audit.json", dump(j));
  write_file(g.out, a.name + ".products.csv", rep.products_csv());
  const bool ok = r.epsilon_search <= tol;
  log << a.name << ": max product " << format_double(rep.metric("max_product")) << " after " << r.sweeps
      << " sweeps" << (ok ? "" : " (outside tolerance)") << (r.converged ? "" : ", sweep cap reached") << "\n";
  return ok ? kExitOk : kExitOutsideTolerance;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct and audit biorthogonal systems and M-bases on finite-dimensional normed spaces.", "mbasis"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = 0.0;
  std::string out_dir = ".";
  bool trace = false;
  std::uint64_t seed = 0;
  auto* tol_opt = app.add_option("--tol", tol, "Tolerance overriding the command's own")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory (MBASIS_OUT takes precedence)");
  app.add_flag("--trace", trace, "Record traces and wall-clock times");
  auto* seed_opt = app.add_option("--seed", seed, "Seed overriding generator seeds");

  auto* example = app.add_subcommand("audit-example", "Reproduce and audit the two-dimensional Euclidean example");
  std::string file;
  auto* construct = app.add_subcommand("construct", "Run the scenarios in a JSON file");
  construct->add_option("file", file, "Scenario file")->required()->check(CLI::ExistingFile);
  auto* sweep = app.add_subcommand("sweep", "Sweep the dimension of a sequence-space truncation");
  sweep->add_option("file", file, "Sweep file")->required()->check(CLI::ExistingFile);

  auto* auerbach = app.add_subcommand("auerbach", "Search for an Auerbach basis by determinant maximization");
  int dim = 2;
  std::string p_text = "2";
  std::vector<double> weights;
  std::string space_file;
  AuerbachArgs args;
  auto* dim_opt = auerbach->add_option("--dim", dim, "Dimension")->check(CLI::Range(1, 200));
  auto* p_opt = auerbach->add_option("--p", p_text, "Exponent p >= 1, or inf");
  auto* w_opt = auerbach->add_option("--weights", weights, "Comma-separated positive weights")->delimiter(',');
  auto* space_opt = auerbach->add_option("--space", space_file, "JSON norm description")->check(CLI::ExistingFile);
  space_opt->excludes(dim_opt)->excludes(p_opt)->excludes(w_opt);
  auerbach->add_option("--sweeps", args.sweeps, "Sweep cap")->check(CLI::PositiveNumber);
  auerbach->add_option("--name", args.name, "Report name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitOperational;
  }

  GlobalOptions g;
  if (tol_opt->count() > 0) g.tol = tol;
  if (seed_opt->count() > 0) g.seed = seed;
  g.trace = trace;
  g.out = out_dir;
  if (const char* env = std::getenv("MBASIS_OUT"); env != nullptr && *env != '\0') g.out = env;

  try {
    if (*example) return cmd_audit_example(g, out);
    if (*construct) return cmd_construct(file, g, err);
    if (*sweep) return cmd_sweep(file, g, err);

    if (!space_file.empty()) {
      args.space = io::norm_spec_from_json(json::parse(read_file(space_file)), "space");
    } else {
      double p = 0.0;
      if (p_text == "inf" || p_text == "infinity") {
        p = kInf;
      } else {
        std::size_t used = 0;
        try {
          p = std::stod(p_text, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != p_text.size()) {
          err << "usage error: --p must be a number or inf\n";
          return kExitOperational;
        }
      }
      if (!(p >= 1.0)) {
        err << "usage error: --p must be >= 1\n";
        return kExitOperational;
      }
      if (w_opt->count() > 0) {
        if (dim_opt->count() > 0 && static_cast<int>(weights.size()) != dim) {
          err << "usage error: --weights needs --dim entries\n";
          return kExitOperational;
        }
        args.space = NormSpec::weighted_pnorm(p, Eigen::Map<const Vec>(weights.data(), std::ssize(weights)));
      } else {
        args.space = NormSpec::pnorm(dim, p);
      }
    }
    return cmd_auerbach(args, g, out);
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitOperational;
}

}  // namespace mbasis::cli
