#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "minmax/algorithms.hpp"

namespace minmax::harness {

enum class Experiment { linear, quadratic, experts, fairclf, switching, adversarial };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment request: input model, algorithm, feedback, shapes, seeds,
// and output paths. Zero-valued counts fall back to the preset defaults.
struct ExperimentConfig {
  Experiment experiment = Experiment::linear;
  AlgoKind algo = AlgoKind::hedge_ogd;
  FeedbackMode feedback = FeedbackMode::full;
  std::vector<std::size_t> horizons;
  std::size_t num_sequences = 0;  // K
  std::size_t dim = 0;            // d
  std::size_t seeds = 10;
  std::uint64_t base_seed = 1;
  std::string out_path;
  std::string trace_path;  // per-round trace; empty disables
  bool decompose = true;
  std::size_t threads = 0;  // 0 picks the hardware count

  std::optional<double> loss_bound_override;  // B
  std::optional<double> grad_bound_override;  // G
  std::optional<FeasibleSet> set_override;    // replaces the preset decision set

  double experts_lo = 0.2;
  double experts_hi = 0.8;
  std::size_t fair_batch = 0;      // 0 -> preset (50)
  double fair_regularizer = 0.0;   // 0 -> preset (1e-3)
  double fair_noise = 1.0;
  std::size_t switch_interval = 0;  // 0 -> preset (100)
  double shift_magnitude = -1.0;    // negative -> preset (5.0)
  double ftrl_regularizer = 1.0;
};

void validate(const ExperimentConfig& config);  // throws ConfigError

// Concrete pieces of one run: the decision set, the loss generator seeded for
// this run, the effective bounds, and the step schedules.
struct Instance {
  FeasibleSet set;
  std::shared_ptr<LossOracle> oracle;
  ProblemBounds bounds;
  StepSchedule eta_x;
  StepSchedule eta_theta;
};

Instance make_instance(const ExperimentConfig& config, std::uint64_t run_seed);

struct RunRecord {
  std::string experiment;
  std::string algo;
  std::string feedback;
  std::uint64_t seed = 0;
  std::size_t horizon = 0;  // T
  std::size_t num_sequences = 0;
  std::size_t dim = 0;
  double cost_algorithm = 0.0;
  double cost_offline = 0.0;
  double regret = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double per_slot_benchmark = 0.0;
  std::int64_t wall_ms = 0;
};

// Runs every (seed, horizon) pair; seeds execute on a worker pool and the
// records come back in deterministic (seed, horizon) order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

// CSV with the fixed header
// experiment,algo,feedback,seed,T,K,d,C_alg,C_opt,regret,R1,R2,R3,per_slot_benchmark,wall_ms
// and floats rendered with 17 significant digits. Throws before creating the
// file when `records` is empty.
void emit_csv(const std::vector<RunRecord>& records, const std::string& path);

// Per-round trace: t,max_cum_loss,theta_0..theta_{K-1},step_eta_x,step_eta_theta.
void emit_trace(const RunTrace& trace, const std::string& path);

ExperimentConfig config_from_json_file(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

std::string to_string(Experiment e);
std::string to_string(AlgoKind a);
std::string to_string(FeedbackMode f);
Experiment experiment_from_string(const std::string& s);
AlgoKind algo_from_string(const std::string& s);
FeedbackMode feedback_from_string(const std::string& s);

}  // namespace minmax::harness
