#pragma once

#include <cstddef>

#include "minmax/linalg.hpp"

namespace minmax {

// Mixing weights over K loss sequences, stored in the log domain.
//
// Multiplicative updates accumulate in log space and are renormalized through
// logsumexp, so arbitrarily long runs cannot overflow. After renormalization
// the stored log weights are exactly the log probabilities.
class SimplexWeights {
 public:
  explicit SimplexWeights(std::size_t k);  // uniform over k >= 1 coordinates
  static SimplexWeights from_probabilities(const Vec& probs);
  static SimplexWeights point_mass(std::size_t k, std::size_t index);

  std::size_t size() const { return log_weights_.size(); }
  const Vec& probabilities() const { return probs_; }
  const Vec& log_weights() const { return log_weights_; }
  double operator[](std::size_t i) const { return probs_[i]; }

 private:
  SimplexWeights() = default;
  void renormalize();

  Vec log_weights_;
  Vec probs_;

  friend SimplexWeights hedge_update(const SimplexWeights&, const Vec&, double);
};

// Multiplicative gains update: log weight i grows by eta * gains[i], then the
// distribution is renormalized. eta = 0 is the identity. Throws on non-finite
// gains or negative eta.
SimplexWeights hedge_update(const SimplexWeights& weights, const Vec& gains, double eta);

double logsumexp(const Vec& v);
double l1_distance(const SimplexWeights& a, const SimplexWeights& b);
double kl_divergence(const SimplexWeights& p, const SimplexWeights& q);

}  // namespace minmax
