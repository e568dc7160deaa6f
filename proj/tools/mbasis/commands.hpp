#pragma once

#include "mbasis/norms.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace mbasis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitOperational = 1;
inline constexpr int kExitOutsideTolerance = 2;

struct GlobalOptions {
  /// Overrides every command's own tolerance when set.
  std::optional<double> tol;
  std::filesystem::path out = ".";
  /// Adds iteration traces and real wall-clock times to the reports.
  bool trace = false;
  /// Overrides generator seeds when set.
  std::optional<std::uint64_t> seed;
};

/// Exit 0 iff the sqrt(2) products and identity pairing reproduce within tol
/// (default 1e-12).
int cmd_audit_example(const GlobalOptions& g, std::ostream& log);

/// Runs every scenario in the file (in parallel) and writes the reports in
/// declaration order.
int cmd_construct(const std::filesystem::path& file, const GlobalOptions& g, std::ostream& log);

/// One CSV row per (n, construction). wall_ms is 0 unless tracing, which
/// keeps the file byte-identical across runs.
int cmd_sweep(const std::filesystem::path& file, const GlobalOptions& g, std::ostream& log);

struct AuerbachArgs {
  NormSpec space;
  int sweeps = 1000;
  std::uint64_t seed = 1;
  std::string name = "auerbach";
};

/// Exit 0 iff max_i ||x_i|| ||x_i*||_* <= 1 + tol (default 1e-4).
int cmd_auerbach(const AuerbachArgs& a, const GlobalOptions& g, std::ostream& log);

/// Full command-line entry point; MBASIS_OUT overrides --out.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mbasis::cli
