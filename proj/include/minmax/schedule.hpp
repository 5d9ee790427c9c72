#pragma once

#include <cstddef>

#include "minmax/bounds.hpp"

namespace minmax {

// Per-round step sizes. Every kind emits a strictly positive, nonincreasing
// sequence over t = 1, 2, ...; the bandit kinds additionally carry the probe
// radius delta_t.
class StepSchedule {
 public:
  enum class Kind {
    hedge_sqrt,        // sqrt(2 ln K / (B^2 t))
    ogd_sqrt,          // D / (G sqrt(t))
    bandit_one_point,  // eta = D / (G sqrt(d) t^(3/4)), delta = t^(-1/4)
    bandit_two_point,  // eta = D / (G sqrt(d) sqrt(t)), delta = t^(-1/2)
    inverse_t,         // c / t
    constant,          // c
  };

  // With a single sequence the weight update is inert, so ln K is floored at
  // ln 2 to keep the emitted steps positive.
  static StepSchedule hedge_sqrt(std::size_t num_sequences, double loss_bound);
  static StepSchedule ogd_sqrt(double diameter, double grad_bound);
  static StepSchedule bandit_one_point(double diameter, double grad_bound, std::size_t dim);
  static StepSchedule bandit_two_point(double diameter, double grad_bound, std::size_t dim);
  static StepSchedule inverse_t(double c);
  static StepSchedule constant(double c);

  Kind kind() const { return kind_; }
  double eta(std::size_t t) const;    // step size at round t >= 1
  double delta(std::size_t t) const;  // probe radius; bandit kinds only
  bool has_delta() const;

 private:
  StepSchedule(Kind kind, double coeff) : kind_(kind), coeff_(coeff) {}

  Kind kind_;
  double coeff_;
};

}  // namespace minmax
