#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "minmax/benchmark.hpp"
#include "minmax/feasible_set.hpp"
#include "minmax/losses.hpp"
#include "minmax/schedule.hpp"
#include "minmax/simplex_weights.hpp"

namespace minmax {

enum class FeedbackMode { full, bandit_one_point, bandit_two_point };

// What the environment revealed after the previous action. Before round 1 the
// payload is empty, standing in for the identically-zero round 0.
struct Feedback {
  FeedbackMode mode = FeedbackMode::full;
  LossBundle observed;  // values and gradients at the previous action

  static Feedback initial() { return {}; }
};

// The weight-mixed scalar loss sum_k theta_k f^k and its gradient at one
// query point. The value stays within the per-sequence bound, being a convex
// combination.
struct WeightedLoss {
  double value = 0.0;
  Vec gradient;  // empty when the bundle carries no gradients
};

WeightedLoss mix_losses(const LossBundle& bundle, const Vec& weights);

// State shared by the online algorithms: the last action, the mixing weights,
// the cumulative per-sequence losses of the played trajectory, and the step
// schedules. Steps are pure transitions returning a new state.
struct AlgoState {
  Action x;              // x_{t-1}
  SimplexWeights theta;  // theta_t
  std::size_t t = 1;     // next round to play
  Vec cum_losses;        // S_k = sum_{s < t} f_s^k(x_s)
  StepSchedule eta_x;
  StepSchedule eta_theta;
  ProblemBounds bounds;
};

AlgoState make_initial_state(const FeasibleSet& set, std::size_t num_sequences, StepSchedule eta_x,
                             StepSchedule eta_theta, ProblemBounds bounds,
                             std::optional<Vec> x0 = std::nullopt);

struct StepOutcome {
  AlgoState state;
  Action action;        // the trajectory point of this round
  Vec observed_values;  // losses at that point
};

// One round of the full-information algorithm: gradient step on the
// weight-mixed previous-round losses, projection, play, then multiplicative
// weight update on the observed values.
StepOutcome hedge_ogd_step(const AlgoState& state, const Feedback& prev_feedback,
                           const LossOracle& oracle, const FeasibleSet& set);

// Projected gradient step on the plain average of the previous-round losses.
StepOutcome avg_ogd_step(const AlgoState& state, const Feedback& prev_feedback,
                         const LossOracle& oracle, const FeasibleSet& set);

// One round under bandit feedback: sphere probe(s), value-based gradient
// estimate, projected step, then the weight update at the new iterate.
StepOutcome bandit_step(const AlgoState& state, const LossOracle& oracle, const FeasibleSet& set,
                        FeedbackMode mode, RandomSource& rng);

// Plays the single-round min-max minimizer (the current round's functions are
// visible before acting).
StepOutcome greedy_step(const AlgoState& state, const LossOracle& oracle, const FeasibleSet& set,
                        const SolverOptions& opts = {});

// argmin over the set of max_k of the cumulative losses through round t-1
// plus (scale/2)||x||^2. With an empty history this is the projection of the
// origin. `converged` reports whether the inner solve met its tolerance.
Action ftrl_action(const LossOracle& oracle, std::size_t t, const FeasibleSet& set,
                   double regularizer_scale, const SolverOptions& opts = {},
                   bool* converged = nullptr);

// Value-based gradient estimators.
Vec one_point_gradient_estimate(double value_at_probe, const Vec& direction, double delta);
Vec two_point_gradient_estimate(double value_plus, double value_minus, const Vec& direction,
                                double delta);

// Recursive pairwise experts algorithm over a balanced binary tree. The
// horizon enters through the 1/sqrt(T) update and must be known up front.
struct MultiState {
  struct Node {
    int left = -1;   // child node, or -1 when the slot below is a leaf
    int right = -1;
    int leaf_left = -1;   // expert index when left < 0
    int leaf_right = -1;  // expert index when right < 0
    double p_left = 0.5;  // probability routed to the left subtree
  };
  std::size_t num_experts = 0;
  std::size_t horizon = 0;
  std::vector<Node> nodes;  // nodes[0] is the root; empty for a single expert
};

MultiState make_multi_state(std::size_t num_experts, std::size_t horizon);

// Plays the current distribution, then absorbs this round's losses (each in
// [0,1]). Returns the updated state and the distribution that was played.
std::pair<MultiState, Vec> multi_step(const MultiState& state, const Vec& losses);

Vec multi_distribution(const MultiState& state);

// ---- Run loop ----

enum class AlgoKind { hedge_ogd, avg_ogd, greedy, ftrl, multi };

struct RunSpec {
  AlgoKind algo = AlgoKind::hedge_ogd;
  FeedbackMode feedback = FeedbackMode::full;
  std::size_t horizon = 0;
  ProblemBounds bounds;
  StepSchedule eta_x = StepSchedule::constant(1.0);
  StepSchedule eta_theta = StepSchedule::constant(1.0);
  double ftrl_regularizer = 1.0;
  std::uint64_t algo_seed = 0;  // randomness owned by the algorithm (probes)
  std::optional<Vec> x0;
  SolverOptions solver;  // used by greedy and ftrl
};

struct RunTrace {
  std::vector<Action> actions;  // x_1..x_T
  std::vector<Vec> thetas;      // theta_1..theta_{T+1}
  std::vector<Vec> values;      // losses at the trajectory points
  Vec cum_losses;               // per-sequence totals
  Vec eta_x_used;               // per-round step sizes (zero when not applicable)
  Vec eta_theta_used;
};

RunTrace run_online(const RunSpec& spec, const LossOracle& oracle, const FeasibleSet& set);

}  // namespace minmax
