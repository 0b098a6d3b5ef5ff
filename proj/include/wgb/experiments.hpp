#pragma once

#include "wgb/error_analysis.hpp"
#include "wgb/time_solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wgb {

enum class OutputFormat { csv, jsonl };

/// Malformed configuration; carries the offending line (0 for command line) and key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

struct RunConfig {
  SolverConfig solver;
  std::string problem = "example1";  // example1 | example2 | custom
  double sigma = 2.0;                // example2 only
  std::vector<double> g_poly;        // custom: monomial coefficients of g
  std::vector<double> sample_points; // empty: every mesh node
  std::vector<double> output_times;  // empty: final time only
  bool dump_state = false;           // also write interior coefficients
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  std::uint64_t seed = 0;            // provenance only
  int threads = 1;

  /// Throws ConfigError if a key is unknown or its value malformed.
  void set(const std::string& key, const std::string& value, int line = 0);
  /// Solver invariants plus problem/sample-point consistency.
  void validate() const;
  /// Ordered key/value view used for output headers.
  std::vector<std::pair<std::string, std::string>> describe() const;
};

/// Flat `key = value` text, `#` comments and blank lines ignored.
RunConfig parse_run_config(std::istream& in, RunConfig base = {});
RunConfig load_run_config(const std::string& path, RunConfig base = {});

/// Initial data selected by the config.
ScalarFunction initial_data(const RunConfig& config);
/// Exact solution for the configured problem, if one is known.
std::optional<ExactProblem> exact_problem(const RunConfig& config, double t_min);

/// Shortest decimal form that parses back to the same double (17 significant digits).
std::string format_double(double v);
double parse_double(const std::string& text);

struct TableRow {
  int table = 0;
  int k = 0;
  int n_elements = 0;
  double nu = 0.0;
  double x = 0.0;
  double t = 0.0;
  double numerical = 0.0;
  double exact = 0.0;
  double abs_diff = 0.0;
};

struct TableSetting {
  int k;
  int n_elements;
  double nu;
  double tau;
  std::vector<double> times;
  std::vector<double> points;
};

std::vector<TableSetting> table_settings(int which);

/// Node sampling reads the node value where x_j is a mesh node and falls back
/// to the interior polynomial elsewhere (x = 0.1 is not a node for N = 128).
/// Interior sampling always reads the interior polynomial, left element at nodes.
double sample(const WeakFunction& u, const Mesh& mesh, double x, EvalMode mode);

/// Runs every setting of table 1 or 2. Rows come back in setting order, then
/// time, then x, regardless of the thread count.
std::vector<TableRow> compute_table(int which, int threads = 1, EvalMode sampling = EvalMode::node);

using Header = std::vector<std::pair<std::string, std::string>>;

void write_table(std::ostream& out, const Header& header, const std::vector<TableRow>& rows, OutputFormat format);
/// Parses CSV written by write_table; throws std::runtime_error if a stored
/// difference disagrees with |numerical - exact|.
std::vector<TableRow> read_table_csv(std::istream& in);

void write_convergence(std::ostream& out, const Header& header, const ConvergenceTable& table,
                       OutputFormat format);

struct SolveSummary {
  int steps = 0;
  double final_time = 0.0;
  double final_energy = 0.0;
  int total_picard = 0;
  int max_picard = 0;
  double max_energy_growth = 0.0;
  std::optional<ErrorReport> errors;
  std::string errors_skipped;  // reason the exact solution could not be evaluated
  double wall_seconds = 0.0;
};

/// Runs the configured solve, writing sampled node values (and interior
/// coefficients when dump_state) at the output times to `out`.
SolveSummary run_solve(const RunConfig& config, std::ostream& out);
void print_summary(std::ostream& out, const SolveSummary& summary);

}  // namespace wgb
