#include "entrec/runner.hpp"

#include "entrec/closedloop.hpp"
#include "entrec/counts.hpp"
#include "entrec/openloop.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <variant>

namespace entrec {

namespace {

using Cell = std::variant<std::monostate, std::string, double>;
using Row = std::vector<Cell>;

const std::vector<std::string> kSweepColumns{
    "experiment", "axis", "axis_value", "control", "method", "fidelity",
    "eta", "concurrence", "eof", "stat_error", "concurrence_path"};

const std::vector<std::string> kAssistColumns{"p", "theta", "ensemble_eof", "best"};

const std::vector<std::string> kCountsColumns{
    "trial", "seed", "C_HHd", "C_VVd", "C_HVu", "C_VHu", "C_HV1", "C_VH1", "C_HV0", "C_VH0",
    "p_prime", "delta_p_prime", "theta", "delta_theta"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::vector<std::string> effective_controls(const RunConfig& c) {
  if (!c.controls.empty()) return c.controls;
  if (c.experiment == Experiment::closed_loop) return {"uncontrolled", "controlled"};
  return {"uncontrolled", "corrected", "echoed"};
}

std::vector<double> sweep_grid(const RunConfig& c, double lo, double hi, std::size_t default_points) {
  if (!c.grid.empty()) return c.grid;
  const std::size_t n = c.grid_points ? c.grid_points : default_points;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i)
    g[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

// ---- open loop ---------------------------------------------------------

std::vector<Row> open_loop_rows(const RunConfig& c) {
  std::vector<Row> rows;
  const MonteCarloOptions mc{c.n_samples, c.seed, c.workers};
  const TrajectoryControl unco = TrajectoryControl::uncontrolled();

  for (double fidelity : c.fidelities) {
    const PreparationModel prep = PreparationModel::from_fidelity(fidelity);
    for (const std::string& name : effective_controls(c)) {
      TrajectoryControl control;
      control.kind = control_kind_from_string(name);
      control.echo_after_step = c.echo_after_step;
      control.variant = c.correction_variant;
      for (const std::string& method_name : c.methods) {
        const Method method = method_from_string(method_name);
        for (int k = 0; k <= c.noise.steps; ++k) {
          // Before the echo pulse or the correction the dynamics is uncontrolled.
          const bool before_control =
              (control.kind == ControlKind::echoed && k <= control.echo_after_step) ||
              (control.kind == ControlKind::corrected && k < control.correction_step(c.noise.steps));
          const OpenLoopResult r =
              run_open_loop(c.noise, before_control ? unco : control, prep, k, method, mc);
          rows.push_back({std::string("open_loop"), std::string("k"), static_cast<double>(k), name,
                          std::string(to_string(method)), fidelity, prep.eta(), r.concurrence, r.eof,
                          opt_cell(r.stat_error), std::string(to_string(r.path))});
        }
      }
    }
  }
  return rows;
}

// ---- closed loop -------------------------------------------------------

std::vector<Row> closed_loop_rows(const RunConfig& c) {
  const bool over_p = c.sweep == "p";
  const std::vector<double> grid =
      over_p ? sweep_grid(c, 0.0, 1.0, 101) : sweep_grid(c, 0.0, std::numbers::pi / 2.0, 91);

  std::vector<Row> rows;
  for (double fidelity : c.fidelities) {
    const PreparationModel prep = PreparationModel::from_fidelity(fidelity);
    for (const std::string& control : effective_controls(c)) {
      for (const std::string& method : c.methods) {
        for (double x : grid) {
          const double p = over_p ? x : c.effective_p();
          const double theta = over_p ? c.theta : x;
          const ClosedLoopOutput out = control == "uncontrolled"
                                           ? uncontrolled_output(p, prep.eta())
                                           : controlled_output(p, theta, prep.eta());
          double conc = out.concurrence;
          ConcurrencePath path = ConcurrencePath::closed_form;
          if (method == "constructive") std::tie(conc, path) = reported_concurrence(out.rho);
          rows.push_back({std::string("closed_loop"), c.sweep, x, control, method, fidelity, prep.eta(),
                          conc, eof_from_concurrence(conc), std::monostate{},
                          std::string(to_string(path))});
        }
      }
    }
  }
  return rows;
}

// ---- assistance scan ---------------------------------------------------

std::vector<Row> assist_rows(const RunConfig& c) {
  const double p = c.effective_p();
  const std::size_t n = c.grid_points ? c.grid_points : 181;
  const AssistanceResult best = entanglement_of_assistance_check(p, n);
  std::vector<Row> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = 0.5 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1);
    const double e = ensemble_average_eof(to_ensemble(measure_environment(p, theta)));
    rows.push_back({p, theta, e, theta == best.best_theta ? 1.0 : 0.0});
  }
  return rows;
}

// ---- counts demo -------------------------------------------------------

std::vector<Row> counts_rows(const RunConfig& c) {
  const CountProbabilities probs = closed_loop_count_probabilities(c.effective_p(), c.theta);
  std::vector<Row> rows;
  for (std::size_t t = 0; t < c.trials; ++t) {
    Rng derive = trajectory_rng(c.seed, t);
    const std::uint64_t trial_seed = derive();
    const CoincidenceCounts counts = simulate_counts(probs, c.total_pairs, trial_seed);
    Row row{static_cast<double>(t), std::to_string(trial_seed)};
    for (std::uint64_t v : counts.values) row.push_back(static_cast<double>(v));
    try {
      const Estimate e = estimate_p_prime(counts);
      row.push_back(e.value);
      row.push_back(e.delta);
    } catch (const EstimationError&) {
      row.push_back(std::monostate{});
      row.push_back(std::monostate{});
    }
    try {
      const Estimate e = estimate_theta(counts);
      row.push_back(e.value);
      row.push_back(e.delta);
    } catch (const EstimationError&) {
      row.push_back(std::monostate{});
      row.push_back(std::monostate{});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---- output ------------------------------------------------------------

std::string cell_text(const Cell& cell, bool json) {
  if (std::holds_alternative<std::monostate>(cell)) return json ? "null" : "";
  if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
  const std::string& s = std::get<std::string>(cell);
  return json ? nlohmann::json(s).dump() : s;
}

std::string render_table(const std::vector<std::string>& cols, const std::vector<Row>& rows,
                         OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::csv) {
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const Row& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i], false);
      os << '\n';
    }
  } else {
    for (const Row& r : rows) {
      os << '{';
      for (std::size_t i = 0; i < r.size(); ++i)
        os << (i ? "," : "") << nlohmann::json(cols[i]).dump() << ':' << cell_text(r[i], true);
      os << "}\n";
    }
  }
  return os.str();
}

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::open_loop: return "open_loop";
    case Experiment::closed_loop: return "closed_loop";
    case Experiment::assist_scan: return "assist_scan";
    case Experiment::counts_demo: return "counts_demo";
  }
  return "?";
}

Experiment experiment_from_string(const std::string& s) {
  if (s == "open_loop" || s == "open-loop") return Experiment::open_loop;
  if (s == "closed_loop" || s == "closed-loop") return Experiment::closed_loop;
  if (s == "assist_scan" || s == "assist-scan") return Experiment::assist_scan;
  if (s == "counts_demo" || s == "counts-demo") return Experiment::counts_demo;
  throw ConfigError("unknown experiment '" + s + "'");
}

double RunConfig::effective_p() const {
  return p_prime ? p_from_p_prime(*p_prime) : p;
}

void RunConfig::validate() const {
  if (fidelities.empty()) throw ConfigError("at least one fidelity is required");
  for (double f : fidelities)
    if (!(f >= 0.25 && f <= 1.0)) throw ConfigError("fidelity must lie in [0.25, 1]");
  if (methods.empty()) throw ConfigError("at least one method is required");
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (p_prime && *p_prime < 0.0) throw ConfigError("p' must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0,1]");
  if (grid_points == 1) throw ConfigError("a grid needs at least two points");

  switch (experiment) {
    case Experiment::open_loop:
      noise.validate();
      for (const auto& m : methods) method_from_string(m);
      for (const auto& ctl : effective_controls(*this)) control_kind_from_string(ctl);
      if (!(echo_after_step >= 1 && echo_after_step < noise.steps))
        throw ConfigError("echo_after_step must satisfy 1 <= step < steps");
      if (contains(methods, "monte_carlo") && n_samples < 1) throw ConfigError("n_samples must be >= 1");
      break;
    case Experiment::closed_loop:
      if (sweep != "p" && sweep != "theta") throw ConfigError("sweep must be 'p' or 'theta'");
      for (const auto& m : methods)
        if (m != "analytic" && m != "constructive")
          throw ConfigError("closed-loop method must be analytic or constructive");
      for (const auto& ctl : effective_controls(*this))
        if (ctl != "uncontrolled" && ctl != "controlled")
          throw ConfigError("closed-loop control must be uncontrolled or controlled");
      for (double x : grid) {
        const double hi = sweep == "p" ? 1.0 : std::numbers::pi / 2.0;
        if (!(x >= 0.0 && x <= hi)) throw ConfigError("grid value outside the sweep range");
      }
      break;
    case Experiment::assist_scan:
      break;
    case Experiment::counts_demo:
      if (total_pairs < 1) throw ConfigError("total_pairs must be at least 1");
      if (trials < 1) throw ConfigError("trials must be at least 1");
      break;
  }
}

void apply_config_json(RunConfig& c, std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  static const std::vector<std::string> known{
      "experiment", "mu", "sigma", "mean_phase", "steps", "clip_to_hardware", "controls",
      "correction_variant", "echo_after_step", "sweep", "grid", "grid_points", "p", "p_prime",
      "theta", "fidelities", "methods", "total_pairs", "trials", "n_samples", "seed", "workers",
      "output", "format"};
  for (const auto& [key, _] : j.items())
    if (!contains(known, key)) throw ConfigError("unknown config key '" + key + "'");

  try {
    if (j.contains("experiment")) c.experiment = experiment_from_string(j.at("experiment").get<std::string>());
    read_key(j, "mu", c.noise.mu);
    read_key(j, "sigma", c.noise.sigma);
    read_key(j, "mean_phase", c.noise.mean_phase);
    read_key(j, "steps", c.noise.steps);
    read_key(j, "clip_to_hardware", c.noise.clip_to_hardware);
    read_key(j, "controls", c.controls);
    if (j.contains("correction_variant")) {
      const auto v = j.at("correction_variant").get<std::string>();
      if (v == "ideal") c.correction_variant = CorrectionVariant::ideal;
      else if (v == "replace_last_step") c.correction_variant = CorrectionVariant::replace_last_step;
      else throw ConfigError("unknown correction_variant '" + v + "'");
    }
    read_key(j, "echo_after_step", c.echo_after_step);
    read_key(j, "sweep", c.sweep);
    read_key(j, "grid", c.grid);
    read_key(j, "grid_points", c.grid_points);
    read_key(j, "p", c.p);
    if (j.contains("p_prime")) c.p_prime = j.at("p_prime").get<double>();
    read_key(j, "theta", c.theta);
    read_key(j, "fidelities", c.fidelities);
    read_key(j, "methods", c.methods);
    read_key(j, "total_pairs", c.total_pairs);
    read_key(j, "trials", c.trials);
    read_key(j, "n_samples", c.n_samples);
    read_key(j, "seed", c.seed);
    read_key(j, "workers", c.workers);
    read_key(j, "output", c.output);
    if (j.contains("format")) {
      const auto f = j.at("format").get<std::string>();
      if (f == "csv") c.format = OutputFormat::csv;
      else if (f == "jsonl") c.format = OutputFormat::jsonl;
      else throw ConfigError("unknown format '" + f + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
}

const std::vector<std::string>& columns(Experiment experiment) {
  switch (experiment) {
    case Experiment::open_loop:
    case Experiment::closed_loop: return kSweepColumns;
    case Experiment::assist_scan: return kAssistColumns;
    case Experiment::counts_demo: return kCountsColumns;
  }
  return kSweepColumns;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string render(const RunConfig& config) {
  config.validate();
  std::vector<Row> rows;
  switch (config.experiment) {
    case Experiment::open_loop: rows = open_loop_rows(config); break;
    case Experiment::closed_loop: rows = closed_loop_rows(config); break;
    case Experiment::assist_scan: rows = assist_rows(config); break;
    case Experiment::counts_demo: rows = counts_rows(config); break;
  }
  return render_table(columns(config.experiment), rows, config.format);
}

int run(const RunConfig& config, std::ostream& diag) {
  std::string text;
  try {
    text = render(config);
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << '\n';
    return 2;
  }
  if (config.output == "-") {
    std::cout << text;
    std::cout.flush();
    return std::cout ? 0 : 1;
  }
  std::ofstream out(config.output, std::ios::binary | std::ios::trunc);
  if (!out) {
    diag << "error: cannot open output path '" << config.output << "'\n";
    return 1;
  }
  out << text;
  out.close();
  if (!out) {
    diag << "error: failed writing '" << config.output << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace entrec
