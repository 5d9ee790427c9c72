#include "minmax/simplex_weights.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace minmax {

double logsumexp(const Vec& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;  // all -inf (or contains +inf, rejected upstream)
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

SimplexWeights::SimplexWeights(std::size_t k) {
  if (k == 0) throw std::invalid_argument("SimplexWeights: need at least one coordinate");
  log_weights_.assign(k, 0.0);
  probs_.assign(k, 0.0);
  renormalize();
}

SimplexWeights SimplexWeights::from_probabilities(const Vec& probs) {
  if (probs.empty()) throw std::invalid_argument("SimplexWeights: empty probability vector");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("SimplexWeights: probabilities must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("SimplexWeights: probabilities must sum to 1");
  SimplexWeights w;
  w.log_weights_.resize(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    w.log_weights_[i] = probs[i] > 0.0 ? std::log(probs[i]) : -std::numeric_limits<double>::infinity();
  }
  w.probs_.resize(probs.size());
  w.renormalize();
  return w;
}

SimplexWeights SimplexWeights::point_mass(std::size_t k, std::size_t index) {
  if (k == 0 || index >= k) throw std::invalid_argument("SimplexWeights::point_mass: bad index");
  SimplexWeights w;
  w.log_weights_.assign(k, -std::numeric_limits<double>::infinity());
  w.log_weights_[index] = 0.0;
  w.probs_.assign(k, 0.0);
  w.renormalize();
  return w;
}

void SimplexWeights::renormalize() {
  const double lse = logsumexp(log_weights_);
  if (!std::isfinite(lse)) throw std::logic_error("SimplexWeights: degenerate log weights");
  for (std::size_t i = 0; i < log_weights_.size(); ++i) {
    log_weights_[i] -= lse;
    probs_[i] = std::exp(log_weights_[i]);
  }
}

SimplexWeights hedge_update(const SimplexWeights& weights, const Vec& gains, double eta) {
  if (gains.size() != weights.size()) throw std::invalid_argument("hedge_update: gains length mismatch");
  if (!all_finite(gains)) throw std::invalid_argument("hedge_update: non-finite gains");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw std::invalid_argument("hedge_update: eta must be finite and >= 0");
  SimplexWeights next(weights);
  for (std::size_t i = 0; i < gains.size(); ++i) next.log_weights_[i] += eta * gains[i];
  next.renormalize();
  return next;
}

double l1_distance(const SimplexWeights& a, const SimplexWeights& b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double kl_divergence(const SimplexWeights& p, const SimplexWeights& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += p[i] * (p.log_weights()[i] - q.log_weights()[i]);
  }
  return s;
}

}  // namespace minmax
