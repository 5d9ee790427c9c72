#pragma once

#include <utility>

#include "minmax/feasible_set.hpp"
#include "minmax/losses.hpp"

namespace minmax {

struct SolverOptions {
  double tolerance = 1e-8;                  // target accuracy on the objective value
  std::size_t subgradient_iterations = 300; // projected subgradient warmup
  std::size_t max_iterations = 50000;       // cap for the pure subgradient mode
  std::size_t stall_window = 200;           // subgradient stop: best-value plateau
  double stall_improvement = 1e-8;
  std::size_t smoothing_iterations = 60000;  // accelerated phase cap, all stages
  double golden_tol = 1e-13;                // bracket width for one-dimensional solves
  bool use_smoothing = true;                // accelerated refinement after the warmup
};

struct SolverResult {
  Vec x;
  double value = 0.0;
  std::size_t iterations = 0;
  double gap = 0.0;  // estimated remaining suboptimality
  bool converged = false;
};

// Minimize max_k of the components of `objective` over `set`.
//
// One-dimensional sets use golden-section search (the max of convex functions
// is convex, hence unimodal). Multi-dimensional sets run the projected
// subgradient method, then refine on a log-sum-exp smoothing of the max with
// an accelerated projected gradient scheme and decreasing temperature.
SolverResult minimize_max(const FeasibleSet& set, const CumulativeLosses& objective,
                          const SolverOptions& opts = {});

// Minimize a single convex function over `set`. Affine objectives are solved
// in closed form.
SolverResult minimize_convex(const FeasibleSet& set, const ConvexFn& fn,
                             const SolverOptions& opts = {});

// Exact minimizer of offset + <coeffs, x> over the set.
std::pair<Vec, double> minimize_affine(const FeasibleSet& set, double offset, const Vec& coeffs);

}  // namespace minmax
