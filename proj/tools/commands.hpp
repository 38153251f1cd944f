#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "roundness/metric_space.hpp"
#include "roundness/roundness.hpp"

namespace roundness::cli {

using json = nlohmann::json;

/// Exit-code contract shared by every subcommand.
enum ExitCode : int { kSuccess = 0, kNegative = 1, kInputError = 2 };

struct Outcome {
  json report;
  int exit_code = kSuccess;
};

/// Where a metric space comes from: exactly one of the three sources.
struct InputSpec {
  std::optional<std::string> matrix_file;
  std::optional<std::string> graph;
  std::optional<std::string> edges_file;
  bool validate = true;
};

/// Matrix files: JSON {"labels": [...]?, "matrix": [[...], ...]} when the
/// first non-blank character is '{', otherwise CSV rows of numbers
/// ('#' starts a comment line).
FiniteMetricSpace parse_matrix_text(std::string_view text, bool validate = true);

FiniteMetricSpace load_space(const InputSpec& in);

/// FNV-1a 64 of the compact JSON dump, as 16 hex digits.
std::string digest(const json& canonical);

Outcome cmd_roundness(const InputSpec& in, const RoundnessOptions& opts);
Outcome cmd_negtype(const InputSpec& in, double p, bool strict, double tol_eig);
Outcome cmd_verify(const InputSpec& in, const RoundnessOptions& opts,
                   double kernel_tol);
Outcome cmd_cube_classify(std::size_t n, const std::string& subset);
Outcome cmd_cube_spectrum(std::size_t n);
Outcome cmd_cube_scan(std::size_t n, std::size_t max_size, int jobs,
                      const RoundnessOptions& opts);
Outcome cmd_cube_lemmas(std::size_t n, bool dump);
Outcome cmd_tree_embed(const std::string& edges_file, std::size_t n);
Outcome cmd_tree_witness(std::size_t k);

/// Parses argv, dispatches, writes the JSON report to `out` and returns the
/// process exit code. Diagnostics go to `err`, gated by ROUNDNESS_LOG.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roundness::cli
