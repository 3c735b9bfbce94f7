#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace torusdiff {

/// Parsed command-line configuration. Every accepted configuration maps to
/// exactly one module operation.
struct RunConfig {
  std::string subcommand;
  long n = 0;
  long k = 0;
  long grid_k = 0;       // lemma33 K
  long grid_l = 0;       // lemma33 L
  long stages = 0;
  long max_generation = 0;
  long max_n = 6;        // suite breadth
  std::optional<std::string> epsilon;
  std::optional<std::string> lambda;
  std::optional<std::string> diameter_cap;
  std::string family;
  std::optional<std::string> f_payload;       // simple function (JSON or @file)
  std::optional<std::string> g_payload;       // point
  std::optional<std::string> h_payload;       // point
  std::optional<std::string> shape_payload;   // product set
  std::optional<std::string> region_payload;  // region (delta-check E)
  std::optional<std::string> alphas;          // comma-separated rationals
  std::optional<std::string> xs;              // comma-separated rationals
  std::vector<std::string> sample_points;     // JSON points
  std::optional<std::string> output_path;
  std::string format;  // "json" or "table"
  bool parallel = false;
};

/// Executes one parsed configuration. Exit status 0 when every requested
/// verdict is true, 2 when some verdict is false, 1 on usage errors.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments and dispatches to run().
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torusdiff
