#include "minmax/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace minmax {

void ProblemBounds::validate() const {
  const bool ok = loss_bound > 0.0 && grad_bound > 0.0 && diameter > 0.0 &&
                  std::isfinite(loss_bound) && std::isfinite(grad_bound) && std::isfinite(diameter);
  if (!ok) throw std::invalid_argument("ProblemBounds: all bounds must be finite and strictly positive");
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("StepSchedule: ") + what + " must be finite and positive");
  }
}

}  // namespace

StepSchedule StepSchedule::hedge_sqrt(std::size_t num_sequences, double loss_bound) {
  require_positive(loss_bound, "loss bound");
  if (num_sequences == 0) throw std::invalid_argument("StepSchedule: need at least one sequence");
  const double ln_k = std::log(static_cast<double>(num_sequences < 2 ? 2 : num_sequences));
  return StepSchedule(Kind::hedge_sqrt, std::sqrt(2.0 * ln_k) / loss_bound);
}

StepSchedule StepSchedule::ogd_sqrt(double diameter, double grad_bound) {
  require_positive(diameter, "diameter");
  require_positive(grad_bound, "gradient bound");
  return StepSchedule(Kind::ogd_sqrt, diameter / grad_bound);
}

StepSchedule StepSchedule::bandit_one_point(double diameter, double grad_bound, std::size_t dim) {
  require_positive(diameter, "diameter");
  require_positive(grad_bound, "gradient bound");
  if (dim == 0) throw std::invalid_argument("StepSchedule: dimension must be positive");
  return StepSchedule(Kind::bandit_one_point, diameter / (grad_bound * std::sqrt(static_cast<double>(dim))));
}

StepSchedule StepSchedule::bandit_two_point(double diameter, double grad_bound, std::size_t dim) {
  require_positive(diameter, "diameter");
  require_positive(grad_bound, "gradient bound");
  if (dim == 0) throw std::invalid_argument("StepSchedule: dimension must be positive");
  return StepSchedule(Kind::bandit_two_point, diameter / (grad_bound * std::sqrt(static_cast<double>(dim))));
}

StepSchedule StepSchedule::inverse_t(double c) {
  require_positive(c, "coefficient");
  return StepSchedule(Kind::inverse_t, c);
}

StepSchedule StepSchedule::constant(double c) {
  require_positive(c, "coefficient");
  return StepSchedule(Kind::constant, c);
}

double StepSchedule::eta(std::size_t t) const {
  if (t == 0) throw std::invalid_argument("StepSchedule::eta: rounds are 1-based");
  const double td = static_cast<double>(t);
  switch (kind_) {
    case Kind::hedge_sqrt:
    case Kind::ogd_sqrt:
    case Kind::bandit_two_point:
      return coeff_ / std::sqrt(td);
    case Kind::bandit_one_point:
      return coeff_ / std::pow(td, 0.75);
    case Kind::inverse_t:
      return coeff_ / td;
    case Kind::constant:
      return coeff_;
  }
  throw std::logic_error("StepSchedule::eta: unknown kind");
}

double StepSchedule::delta(std::size_t t) const {
  if (t == 0) throw std::invalid_argument("StepSchedule::delta: rounds are 1-based");
  const double td = static_cast<double>(t);
  switch (kind_) {
    case Kind::bandit_one_point:
      return std::pow(td, -0.25);
    case Kind::bandit_two_point:
      return 1.0 / std::sqrt(td);
    default:
      throw std::invalid_argument("StepSchedule::delta: schedule has no probe radius");
  }
}

bool StepSchedule::has_delta() const {
  return kind_ == Kind::bandit_one_point || kind_ == Kind::bandit_two_point;
}

}  // namespace minmax
