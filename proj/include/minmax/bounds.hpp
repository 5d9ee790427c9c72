#pragma once

namespace minmax {

// Scale constants of a problem instance: per-round loss values stay in
// [-loss_bound, loss_bound], per-sequence gradients have Euclidean norm at
// most grad_bound, and the decision set has Euclidean diameter `diameter`.
struct ProblemBounds {
  double loss_bound = 0.0;  // B
  double grad_bound = 0.0;  // G
  double diameter = 0.0;    // D

  void validate() const;  // throws unless all strictly positive and finite
};

}  // namespace minmax
