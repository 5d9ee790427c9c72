// Command-line front end: one `run` subcommand that executes an experiment
// configuration and writes the per-run CSV (and optional per-round traces).
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "minmax/harness.hpp"

namespace {

namespace hn = minmax::harness;

struct Flags {
  std::string config_path;
  std::string experiment = "linear";
  std::string algo = "hedge-ogd";
  std::string feedback = "full";
  std::vector<std::size_t> horizons;
  hn::ExperimentConfig values;  // holds the flag-bound scalar options
};

// Explicit flags win over the config file; everything else keeps the file's
// (or the built-in) value.
hn::ExperimentConfig merge(const CLI::App& run, const Flags& flags) {
  hn::ExperimentConfig c;
  if (!flags.config_path.empty()) c = hn::config_from_json_file(flags.config_path);

  if (run.count("--experiment") > 0) c.experiment = hn::experiment_from_string(flags.experiment);
  if (run.count("--algo") > 0) c.algo = hn::algo_from_string(flags.algo);
  if (run.count("--feedback") > 0) c.feedback = hn::feedback_from_string(flags.feedback);
  if (run.count("--T") > 0) c.horizons = flags.horizons;
  if (run.count("--K") > 0) c.num_sequences = flags.values.num_sequences;
  if (run.count("--d") > 0) c.dim = flags.values.dim;
  if (run.count("--seeds") > 0) c.seeds = flags.values.seeds;
  if (run.count("--base-seed") > 0) c.base_seed = flags.values.base_seed;
  if (run.count("--out") > 0) c.out_path = flags.values.out_path;
  if (run.count("--trace") > 0) c.trace_path = flags.values.trace_path;
  if (run.count("--decompose") > 0) c.decompose = flags.values.decompose;
  if (run.count("--threads") > 0) c.threads = flags.values.threads;
  if (run.count("--experts-a") > 0) c.experts_lo = flags.values.experts_lo;
  if (run.count("--experts-b") > 0) c.experts_hi = flags.values.experts_hi;
  if (run.count("--batch") > 0) c.fair_batch = flags.values.fair_batch;
  if (run.count("--kappa") > 0) c.fair_regularizer = flags.values.fair_regularizer;
  if (run.count("--switch-interval") > 0) c.switch_interval = flags.values.switch_interval;
  if (run.count("--shift-magnitude") > 0) c.shift_magnitude = flags.values.shift_magnitude;
  if (run.count("--ftrl-reg") > 0) c.ftrl_regularizer = flags.values.ftrl_regularizer;

  if (c.horizons.empty()) c.horizons = {1000};
  if (c.out_path.empty()) c.out_path = "runs.csv";
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"min-max multi-objective online convex optimization runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run an experiment and emit CSV records");

  Flags flags;
  run->add_option("--config", flags.config_path, "JSON config file; flags override its values");
  run->add_option("--experiment", flags.experiment,
                  "linear | quadratic | experts | fairclf | switching | adversarial");
  run->add_option("--algo", flags.algo, "hedge-ogd | greedy | avg-ogd | ftrl | multi");
  run->add_option("--feedback", flags.feedback, "full | bandit1 | bandit2");
  run->add_option("--T", flags.horizons, "horizon(s); repeatable");
  run->add_option("--K", flags.values.num_sequences, "number of loss sequences (0 = preset)");
  run->add_option("--d", flags.values.dim, "action dimension (0 = preset)");
  run->add_option("--seeds", flags.values.seeds, "number of seeds");
  run->add_option("--base-seed", flags.values.base_seed, "base seed; run s uses base-seed XOR s");
  run->add_option("--out", flags.values.out_path, "output CSV path");
  run->add_option("--trace", flags.values.trace_path, "per-round trace CSV path");
  run->add_flag("--decompose,!--no-decompose", flags.values.decompose,
                "compute the R1/R2/R3 split and per-slot benchmark (default on)");
  run->add_option("--threads", flags.values.threads, "worker threads (0 = hardware)");
  run->add_option("--experts-a", flags.values.experts_lo, "experts loss lower bound");
  run->add_option("--experts-b", flags.values.experts_hi, "experts loss upper bound");
  run->add_option("--batch", flags.values.fair_batch, "fair classification batch size (0 = preset)");
  run->add_option("--kappa", flags.values.fair_regularizer,
                  "fair classification regularizer (0 = preset)");
  run->add_option("--switch-interval", flags.values.switch_interval, "switching period (0 = preset)");
  run->add_option("--shift-magnitude", flags.values.shift_magnitude,
                  "switching mean shift (<0 = preset)");
  run->add_option("--ftrl-reg", flags.values.ftrl_regularizer, "ftrl regularizer scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // bad flags are configuration errors
  }

  try {
    const hn::ExperimentConfig config = merge(*run, flags);
    hn::validate(config);
    const auto records = hn::run_experiment(config);
    hn::emit_csv(records, config.out_path);
    std::cout << "wrote " << records.size() << " record(s) to " << config.out_path << "\n";
    return 0;
  } catch (const hn::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
