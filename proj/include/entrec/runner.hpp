#pragma once

// Sweep runner behind the command line tool: configuration, evaluation of
// grid points and deterministic CSV / JSON-lines output.

#include "entrec/dephasing.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace entrec {

enum class Experiment { open_loop, closed_loop, assist_scan, counts_demo };
enum class OutputFormat { csv, jsonl };

const char* to_string(Experiment e);
Experiment experiment_from_string(const std::string& s);

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  Experiment experiment = Experiment::open_loop;

  // open loop
  NoiseParams noise{};
  /// Empty selects every control of the experiment.
  std::vector<std::string> controls;
  CorrectionVariant correction_variant = CorrectionVariant::ideal;
  int echo_after_step = 2;

  // closed loop, assistance scan and counts demo
  std::string sweep = "p";  ///< "p" or "theta"
  std::vector<double> grid;  ///< explicit grid; empty means a uniform default grid
  std::size_t grid_points = 0;  ///< 0 picks 101 (p), 91 (theta) or 181 (assist-scan)
  double p = 0.5;
  std::optional<double> p_prime;
  double theta = 0.0;

  std::vector<double> fidelities{1.0};
  /// open loop: analytic, monte_carlo. closed loop: analytic, constructive.
  std::vector<std::string> methods{"analytic"};

  // counts demo (illustrative defaults)
  std::uint64_t total_pairs = 4000;
  std::size_t trials = 100;

  std::size_t n_samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  std::string output = "-";  ///< "-" writes to stdout
  OutputFormat format = OutputFormat::csv;

  /// Environment rotation actually used (p' takes precedence when given).
  double effective_p() const;
  void validate() const;
};

/// Overlays keys of a JSON object onto `config`. Unknown keys are rejected.
void apply_config_json(RunConfig& config, std::string_view json_text);

/// Column names of the table emitted for `experiment`.
const std::vector<std::string>& columns(Experiment experiment);

/// Values formatted with 9 significant digits.
std::string format_number(double v);

/// Evaluates the configured sweep and renders it in the configured format.
std::string render(const RunConfig& config);

/// Writes render(config) to config.output. Returns 0 on success; on failure
/// writes a diagnostic to `diag` and returns a nonzero status.
int run(const RunConfig& config, std::ostream& diag);

}  // namespace entrec
