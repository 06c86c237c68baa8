// entrec: regenerate the entanglement-recovery sweeps as CSV or JSON lines.
//
//   entrec open-loop --mu 0.7 --sigma 0.6 --fidelity 1.0 0.96 --out open_mu07.csv
//   entrec closed-loop --sweep p --theta 0 --fidelity 1.0 0.90 0.95 --out closed_p.csv
//   entrec closed-loop --sweep theta --p 0.5 --out closed_theta.csv
//   entrec assist-scan --p 0.5
//   entrec counts-demo --p 0.5 --theta 0.3 --trials 20
//
// Every option can also come from a JSON file given with --config; flags
// given on the command line override the file.

#include "entrec/runner.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace {

using entrec::RunConfig;

// Registers an option whose value is copied into the config only when the
// flag was actually given, so config-file values survive otherwise.
class Overrides {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& storage, const std::string& help,
                   std::function<void(RunConfig&, const T&)> apply) {
    CLI::Option* opt = app->add_option(name, storage, help);
    setters_.push_back([opt, &storage, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c, storage);
    });
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& storage, const std::string& help,
                    std::function<void(RunConfig&, bool)> apply) {
    CLI::Option* opt = app->add_flag(name, storage, help);
    setters_.push_back([opt, &storage, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c, storage);
    });
    return opt;
  }

  void apply(RunConfig& c) const {
    for (const auto& s : setters_) s(c);
  }

 private:
  std::vector<std::function<void(RunConfig&)>> setters_;
};

struct Values {
  std::string config_path;
  std::string out, format;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t samples = 0;
  std::vector<double> fidelities;
  std::vector<std::string> methods, controls;
  double mu = 0, sigma = 0, mean_phase = 0, p = 0, p_prime = 0, theta = 0;
  int steps = 0, echo_after = 0;
  bool clip = false;
  std::string correction, sweep;
  std::size_t points = 0, trials = 0;
  std::uint64_t total_pairs = 0;
  std::vector<double> grid;
};

void add_common(CLI::App* app, Values& v, Overrides& o) {
  app->add_option("--config", v.config_path, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  o.add<std::string>(app, "-o,--out", v.out, "output path, '-' for stdout",
                     [](RunConfig& c, const std::string& s) { c.output = s; });
  o.add<std::string>(app, "--format", v.format, "csv or jsonl",
                     [](RunConfig& c, const std::string& s) {
                       c.format = s == "jsonl" ? entrec::OutputFormat::jsonl : entrec::OutputFormat::csv;
                     })
      ->check(CLI::IsMember({"csv", "jsonl"}));
  o.add<std::uint64_t>(app, "--seed", v.seed, "master seed",
                       [](RunConfig& c, const std::uint64_t& s) { c.seed = s; });
  o.add<unsigned>(app, "--workers", v.workers, "worker threads",
                  [](RunConfig& c, const unsigned& w) { c.workers = w; })
      ->check(CLI::PositiveNumber);
  o.add<std::vector<double>>(app, "--fidelity", v.fidelities, "preparation fidelities F",
                             [](RunConfig& c, const std::vector<double>& f) { c.fidelities = f; });
}

void add_p(CLI::App* app, Values& v, Overrides& o) {
  o.add<double>(app, "--p", v.p, "environment rotation weight p",
                [](RunConfig& c, const double& p) { c.p = p; });
  o.add<double>(app, "--p-prime", v.p_prime, "attenuation ratio p' = p/(1-p)",
                [](RunConfig& c, const double& pp) { c.p_prime = pp; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement recovery simulator"};
  app.require_subcommand(1);
  Values v;

  Overrides open_o, closed_o, assist_o, counts_o;

  CLI::App* open = app.add_subcommand("open-loop", "dephasing with uncontrolled, corrected and echoed dynamics");
  add_common(open, v, open_o);
  open_o.add<double>(open, "--mu", v.mu, "phase correlation", [](RunConfig& c, const double& x) { c.noise.mu = x; });
  open_o.add<double>(open, "--sigma", v.sigma, "phase standard deviation (rad)",
                     [](RunConfig& c, const double& x) { c.noise.sigma = x; });
  open_o.add<double>(open, "--mean-phase", v.mean_phase, "mean phase (rad)",
                     [](RunConfig& c, const double& x) { c.noise.mean_phase = x; });
  open_o.add<int>(open, "--steps", v.steps, "number of noise steps", [](RunConfig& c, const int& x) { c.noise.steps = x; });
  open_o.add<int>(open, "--echo-after", v.echo_after, "echo pulse after this step",
                  [](RunConfig& c, const int& x) { c.echo_after_step = x; });
  open_o.add<std::vector<std::string>>(open, "--controls", v.controls, "uncontrolled corrected echoed",
                                       [](RunConfig& c, const std::vector<std::string>& x) { c.controls = x; });
  open_o.add<std::vector<std::string>>(open, "--method", v.methods, "analytic and/or monte_carlo",
                                       [](RunConfig& c, const std::vector<std::string>& x) { c.methods = x; });
  open_o.add<std::size_t>(open, "--samples", v.samples, "Monte Carlo trajectories",
                          [](RunConfig& c, const std::size_t& x) { c.n_samples = x; });
  open_o.add<std::string>(open, "--correction", v.correction, "ideal or replace_last_step",
                          [](RunConfig& c, const std::string& x) {
                            c.correction_variant = x == "replace_last_step"
                                                       ? entrec::CorrectionVariant::replace_last_step
                                                       : entrec::CorrectionVariant::ideal;
                          })
      ->check(CLI::IsMember({"ideal", "replace_last_step"}));
  open_o.flag(open, "--clip-to-hardware", v.clip, "redraw phases outside [0, pi]",
              [](RunConfig& c, bool x) { c.noise.clip_to_hardware = x; });

  CLI::App* closed = app.add_subcommand("closed-loop", "environment measurement and conditional correction");
  add_common(closed, v, closed_o);
  add_p(closed, v, closed_o);
  closed_o.add<std::string>(closed, "--sweep", v.sweep, "p or theta", [](RunConfig& c, const std::string& x) { c.sweep = x; })
      ->check(CLI::IsMember({"p", "theta"}));
  closed_o.add<double>(closed, "--theta", v.theta, "measurement angle (rad)",
                       [](RunConfig& c, const double& x) { c.theta = x; });
  closed_o.add<std::size_t>(closed, "--points", v.points, "uniform grid points",
                            [](RunConfig& c, const std::size_t& x) { c.grid_points = x; });
  closed_o.add<std::vector<double>>(closed, "--grid", v.grid, "explicit grid values",
                                    [](RunConfig& c, const std::vector<double>& x) { c.grid = x; });
  closed_o.add<std::vector<std::string>>(closed, "--method", v.methods, "analytic and/or constructive",
                                         [](RunConfig& c, const std::vector<std::string>& x) { c.methods = x; });
  closed_o.add<std::vector<std::string>>(closed, "--controls", v.controls, "uncontrolled controlled",
                                         [](RunConfig& c, const std::vector<std::string>& x) { c.controls = x; });

  CLI::App* assist = app.add_subcommand("assist-scan", "scan the measurement angle for the best ensemble");
  add_common(assist, v, assist_o);
  add_p(assist, v, assist_o);
  assist_o.add<std::size_t>(assist, "--points", v.points, "theta grid points",
                            [](RunConfig& c, const std::size_t& x) { c.grid_points = x; });

  CLI::App* counts = app.add_subcommand("counts-demo", "simulated coincidences and p'/theta error bars");
  add_common(counts, v, counts_o);
  add_p(counts, v, counts_o);
  counts_o.add<double>(counts, "--theta", v.theta, "measurement angle (rad)",
                       [](RunConfig& c, const double& x) { c.theta = x; });
  counts_o.add<std::uint64_t>(counts, "--total-pairs", v.total_pairs, "pairs per setting (illustrative)",
                              [](RunConfig& c, const std::uint64_t& x) { c.total_pairs = x; });
  counts_o.add<std::size_t>(counts, "--trials", v.trials, "number of simulated runs",
                            [](RunConfig& c, const std::size_t& x) { c.trials = x; });

  CLI11_PARSE(app, argc, argv);

  RunConfig config;
  const Overrides* overrides = nullptr;
  if (open->parsed()) {
    config.experiment = entrec::Experiment::open_loop;
    overrides = &open_o;
  } else if (closed->parsed()) {
    config.experiment = entrec::Experiment::closed_loop;
    overrides = &closed_o;
  } else if (assist->parsed()) {
    config.experiment = entrec::Experiment::assist_scan;
    overrides = &assist_o;
  } else {
    config.experiment = entrec::Experiment::counts_demo;
    overrides = &counts_o;
  }

  try {
    if (!v.config_path.empty()) {
      std::ifstream in(v.config_path);
      std::stringstream ss;
      ss << in.rdbuf();
      const entrec::Experiment chosen = config.experiment;
      entrec::apply_config_json(config, ss.str());
      config.experiment = chosen;
    }
    overrides->apply(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return entrec::run(config, std::cerr);
}
