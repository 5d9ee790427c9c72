#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minmax/bounds.hpp"
#include "minmax/feasible_set.hpp"
#include "minmax/random.hpp"

namespace minmax {

// Values (and, under full information, gradients) of the K loss functions of
// one round at one query point.
struct LossBundle {
  Vec values;              // length K
  std::vector<Vec> grads;  // K gradients, empty when not revealed
};

// Affine representation offsets[k] + <coeffs[k], x> of a family of functions.
struct AffineFamily {
  Vec offsets;
  std::vector<Vec> coeffs;
};

// Sum of per-round losses over a fixed horizon, one component per sequence.
// Implementations may expose an affine form for solvers to exploit.
class CumulativeLosses {
 public:
  virtual ~CumulativeLosses() = default;
  virtual std::size_t components() const = 0;
  virtual std::size_t dim() const = 0;
  virtual Vec values(const Vec& x) const = 0;
  virtual std::vector<Vec> gradients(const Vec& x) const = 0;
  virtual std::optional<AffineFamily> affine() const { return std::nullopt; }
};

// A single convex function with subgradients.
class ConvexFn {
 public:
  virtual ~ConvexFn() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
  virtual std::optional<AffineFamily> affine() const { return std::nullopt; }
};

// Per-round bundle of K convex loss functions on R^d.
//
// Oracles are pure given (seed, t, x): the randomness of round t, sequence k
// is derived by hashing (seed, t, k), so repeated or concurrent queries return
// identical results. Rounds are 1-based.
class LossOracle {
 public:
  virtual ~LossOracle() = default;

  std::size_t num_sequences() const { return num_sequences_; }
  std::size_t dim() const { return dim_; }
  const ProblemBounds& bounds() const { return bounds_; }

  virtual Vec values(std::size_t t, const Vec& x) const = 0;
  virtual std::vector<Vec> gradients(std::size_t t, const Vec& x) const = 0;
  LossBundle bundle(std::size_t t, const Vec& x, bool with_grads) const;

  // Expected per-round losses, when the generator admits a closed form.
  virtual bool has_mean_closed_form() const { return false; }
  virtual Vec mean_values(const Vec& x) const;
  virtual std::vector<Vec> mean_gradients(const Vec& x) const;

  // Sum over rounds 1..horizon; overridden where a compressed form exists.
  virtual std::unique_ptr<CumulativeLosses> cumulative(std::size_t horizon) const;
  // Sum over rounds of <round_weights[t-1], losses_t(x)>.
  virtual std::unique_ptr<ConvexFn> weighted_cumulative(const std::vector<Vec>& round_weights) const;

  // Raw per-expert losses, for generators that have them.
  virtual std::optional<Vec> per_expert_losses(std::size_t) const { return std::nullopt; }

  virtual std::string descriptor() const = 0;

 protected:
  LossOracle(std::size_t num_sequences, std::size_t dim, ProblemBounds bounds);
  void check_query(std::size_t t, const Vec& x) const;

 private:
  std::size_t num_sequences_;
  std::size_t dim_;
  ProblemBounds bounds_;
};

// Generic view of rounds [first, last] of an oracle, summed per sequence.
class RoundSlice final : public CumulativeLosses {
 public:
  RoundSlice(const LossOracle& oracle, std::size_t first, std::size_t last);
  std::size_t components() const override;
  std::size_t dim() const override;
  Vec values(const Vec& x) const override;
  std::vector<Vec> gradients(const Vec& x) const override;

 private:
  const LossOracle& oracle_;
  std::size_t first_, last_;
};

// ---- Generators ----

// Linear losses <a, x> with coefficients drawn uniformly from [0,1]^d,
// independently per round and sequence. Bounds follow from the set.
std::unique_ptr<LossOracle> make_random_linear(const FeasibleSet& set, std::size_t num_sequences,
                                               RandomSource rng);

// Scalar quadratics (x - a)^2 with a drawn uniformly from the 19 integers in
// [-9, 9]. The set must be one-dimensional.
std::unique_ptr<LossOracle> make_random_quadratic(const FeasibleSet& set, std::size_t num_sequences,
                                                  RandomSource rng);

// Experts losses f^k(x) = x_k * l_{t,k} with l_{t,k} ~ Uniform(lo, hi).
// The set must be the probability simplex over num_experts coordinates.
std::unique_ptr<LossOracle> make_expert_losses(const FeasibleSet& set, std::size_t num_experts,
                                               double lo, double hi, RandomSource rng);

struct FairClassificationParams {
  std::size_t groups = 10;
  std::size_t batch = 50;          // examples per round and group
  double regularizer = 1e-3;       // coefficient of ||x||^2
  double feature_noise = 1.0;      // std dev of the feature distribution
};

// Per-group averaged logistic loss with L2 regularization over synthetic
// gaussian features and labels from a hidden group classifier.
std::unique_ptr<LossOracle> make_fair_classification(const FeasibleSet& set,
                                                     const FairClassificationParams& params,
                                                     RandomSource rng);

// The deterministic alternating pair of linear losses on [0,1], period 2.
std::unique_ptr<LossOracle> make_adversarial_pair();

struct SwitchingParams {
  FairClassificationParams base;
  std::size_t switch_interval = 100;
  double shift_magnitude = 5.0;
};

// Fair-classification losses where one group at a time receives a large mean
// shift of its feature distribution. The hard group rotates round-robin
// starting from group 0.
std::unique_ptr<LossOracle> make_switching_fair(const FeasibleSet& set, const SwitchingParams& params,
                                                RandomSource rng);

// Index of the shifted group at round t under the round-robin rule.
std::size_t switching_hard_group(std::size_t t, std::size_t switch_interval, std::size_t groups);

// Estimate of the expected per-round loss vector at x: closed form when the
// generator provides one, otherwise Monte Carlo over `samples` fresh rounds.
struct MeanLossEstimate {
  Vec mean;
  Vec std_error;        // zero when closed form
  std::size_t samples;  // zero when closed form
  bool closed_form;
};

MeanLossEstimate estimate_mean_losses(const LossOracle& oracle, const Vec& x, std::size_t samples,
                                      RandomSource& rng);

}  // namespace minmax
