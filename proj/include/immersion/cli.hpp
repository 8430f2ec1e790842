#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace immersion {

struct RunConfig {
  std::string command;
  std::string input;  // file path or "catalog:NAME"
  double tolerance = 1e-8;
  std::size_t grid = 8;
  double step = 1e-3;
  std::optional<std::vector<double>> base;
  std::string output;  // empty: standard output
  std::string format = "json";
  double congruence_tolerance = 1e-6;

  /// Throws SchemaError unless tol > 0, grid ≥ 2, step ∈ (0, 0.1] and the format is known.
  void validate() const;
};

// Exit codes: 0 success, 1 inadmissible structure or failed validation,
// 2 unreadable input (parse/schema errors, hypersurface not on the model).
inline constexpr int kExitOk = 0;
inline constexpr int kExitRejected = 1;
inline constexpr int kExitInputError = 2;

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace immersion
