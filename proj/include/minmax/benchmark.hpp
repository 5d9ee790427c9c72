#pragma once

#include <utility>
#include <vector>

#include "minmax/feasible_set.hpp"
#include "minmax/losses.hpp"
#include "minmax/simplex_weights.hpp"
#include "minmax/solver.hpp"

namespace minmax {

// Replayable view of rounds 1..horizon of an oracle.
struct RoundsView {
  const LossOracle* oracle = nullptr;
  std::size_t horizon = 0;
};

// Solution of the offline static problem min_x max_k sum_t f_t^k(x).
struct SaddlePoint {
  Action x_star;
  SimplexWeights theta_star = SimplexWeights(1);  // indicator of the active sequence, lowest index on ties
  double value = 0.0;         // max_k of the cumulative losses at x_star
  std::size_t iterations = 0;
  double gap = 0.0;
  bool converged = true;
};

// Cost, benchmark, and the exact three-term regret split of a completed run.
//
// r1 is the weight-tracking term (closed form, max coordinate minus realized
// weighted sum), r2 the action regret against the best fixed action for the
// realized weight sequence, and r3 the mismatch between that benchmark and
// the offline optimum. The same computed inner minimum feeds r2 and r3, so
// r1 + r2 + r3 telescopes to cost_algorithm - cost_offline up to roundoff.
struct RegretReport {
  double cost_algorithm = 0.0;  // C_A = max_k of the cumulative losses
  double cost_offline = 0.0;    // C_OPT
  double regret = 0.0;          // C_A - C_OPT
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double per_slot_benchmark = 0.0;  // sum over rounds of the single-round min-max value
  SaddlePoint offline;
  Vec running_max_loss;  // per round, max_k of the cumulative losses so far
};

SaddlePoint solve_offline_minmax(const RoundsView& rounds, const FeasibleSet& set,
                                 const SolverOptions& opts = {});

double per_slot_benchmark(const RoundsView& rounds, const FeasibleSet& set,
                          const SolverOptions& opts = {});

// Indicator of the lowest-index maximal coordinate, with that coordinate's value.
std::pair<SimplexWeights, double> max_over_simplex(const Vec& cumulative);

RegretReport decompose_regret(const std::vector<Action>& actions, const std::vector<Vec>& thetas,
                              const RoundsView& rounds, const FeasibleSet& set,
                              const SolverOptions& opts = {}, bool with_per_slot = true);

// Offline optimum of the expected problem min_x max_k E f^k(x), with the
// per-round value and the Monte Carlo standard error of that value (zero when
// the generator has a closed-form mean).
std::pair<SaddlePoint, double> expected_benchmark(const LossOracle& oracle, const FeasibleSet& set,
                                                  std::size_t samples, RandomSource& rng,
                                                  const SolverOptions& opts = {});

// Stability diagnostics over a weight trajectory.
double deviation_from_average_l1(const std::vector<Vec>& thetas);  // sum_t ||theta_t - mean||_1
double consecutive_variation_l1(const std::vector<Vec>& thetas);   // sum_t ||theta_{t+1} - theta_t||_1

}  // namespace minmax
