#include "minmax/losses.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace minmax {

namespace {

constexpr std::uint64_t kGroupParamSalt = 0x67726f7570ull;  // distinct from round indices

double softplus(double u) {
  // log(1 + e^u) without overflow for large |u|
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

// Cumulative family given explicitly in affine form.
class AffineCumulative final : public CumulativeLosses {
 public:
  AffineCumulative(AffineFamily family, std::size_t dim) : family_(std::move(family)), dim_(dim) {}

  std::size_t components() const override { return family_.offsets.size(); }
  std::size_t dim() const override { return dim_; }

  Vec values(const Vec& x) const override {
    Vec out(family_.offsets);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += dot(family_.coeffs[k], x);
    return out;
  }

  std::vector<Vec> gradients(const Vec&) const override { return family_.coeffs; }

  std::optional<AffineFamily> affine() const override { return family_; }

 private:
  AffineFamily family_;
  std::size_t dim_;
};

class AffineConvexFn final : public ConvexFn {
 public:
  AffineConvexFn(double offset, Vec coeffs) : offset_(offset), coeffs_(std::move(coeffs)) {}

  std::size_t dim() const override { return coeffs_.size(); }
  double value(const Vec& x) const override { return offset_ + dot(coeffs_, x); }
  Vec gradient(const Vec&) const override { return coeffs_; }
  std::optional<AffineFamily> affine() const override {
    return AffineFamily{{offset_}, {coeffs_}};
  }

 private:
  double offset_;
  Vec coeffs_;
};

// Weighted cumulative evaluated by replaying the oracle round by round.
class GenericWeightedCumulative final : public ConvexFn {
 public:
  GenericWeightedCumulative(const LossOracle& oracle, std::vector<Vec> weights)
      : oracle_(oracle), weights_(std::move(weights)) {}

  std::size_t dim() const override { return oracle_.dim(); }

  double value(const Vec& x) const override {
    double s = 0.0;
    for (std::size_t t = 1; t <= weights_.size(); ++t) s += dot(weights_[t - 1], oracle_.values(t, x));
    return s;
  }

  Vec gradient(const Vec& x) const override {
    Vec g(oracle_.dim(), 0.0);
    for (std::size_t t = 1; t <= weights_.size(); ++t) {
      const auto grads = oracle_.gradients(t, x);
      for (std::size_t k = 0; k < grads.size(); ++k) axpy(weights_[t - 1][k], grads[k], g);
    }
    return g;
  }

 private:
  const LossOracle& oracle_;
  std::vector<Vec> weights_;
};

void check_round_weights(const std::vector<Vec>& weights, std::size_t k) {
  if (weights.empty()) throw std::invalid_argument("weighted_cumulative: empty weight sequence");
  for (const Vec& w : weights) {
    if (w.size() != k) throw std::invalid_argument("weighted_cumulative: weight length mismatch");
    if (!all_finite(w)) throw std::invalid_argument("weighted_cumulative: non-finite weights");
  }
}

}  // namespace

LossOracle::LossOracle(std::size_t num_sequences, std::size_t dim, ProblemBounds bounds)
    : num_sequences_(num_sequences), dim_(dim), bounds_(bounds) {
  if (num_sequences_ == 0) throw std::invalid_argument("LossOracle: need at least one sequence");
  if (dim_ == 0) throw std::invalid_argument("LossOracle: dimension must be positive");
  bounds_.validate();
}

void LossOracle::check_query(std::size_t t, const Vec& x) const {
  if (t == 0) throw std::invalid_argument("LossOracle: rounds are 1-based");
  if (x.size() != dim_) throw std::invalid_argument("LossOracle: query dimension mismatch");
  if (!all_finite(x)) throw std::invalid_argument("LossOracle: non-finite query point");
}

LossBundle LossOracle::bundle(std::size_t t, const Vec& x, bool with_grads) const {
  LossBundle b;
  b.values = values(t, x);
  if (with_grads) b.grads = gradients(t, x);
  return b;
}

Vec LossOracle::mean_values(const Vec&) const {
  throw std::logic_error("LossOracle: no closed-form mean for this generator");
}

std::vector<Vec> LossOracle::mean_gradients(const Vec&) const {
  throw std::logic_error("LossOracle: no closed-form mean gradient for this generator");
}

std::unique_ptr<CumulativeLosses> LossOracle::cumulative(std::size_t horizon) const {
  if (horizon == 0) throw std::invalid_argument("LossOracle::cumulative: empty horizon");
  return std::make_unique<RoundSlice>(*this, 1, horizon);
}

std::unique_ptr<ConvexFn> LossOracle::weighted_cumulative(const std::vector<Vec>& round_weights) const {
  check_round_weights(round_weights, num_sequences_);
  return std::make_unique<GenericWeightedCumulative>(*this, round_weights);
}

RoundSlice::RoundSlice(const LossOracle& oracle, std::size_t first, std::size_t last)
    : oracle_(oracle), first_(first), last_(last) {
  if (first == 0 || last < first) throw std::invalid_argument("RoundSlice: bad round range");
}

std::size_t RoundSlice::components() const { return oracle_.num_sequences(); }
std::size_t RoundSlice::dim() const { return oracle_.dim(); }

Vec RoundSlice::values(const Vec& x) const {
  Vec out(oracle_.num_sequences(), 0.0);
  for (std::size_t t = first_; t <= last_; ++t) {
    const Vec v = oracle_.values(t, x);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += v[k];
  }
  return out;
}

std::vector<Vec> RoundSlice::gradients(const Vec& x) const {
  std::vector<Vec> out(oracle_.num_sequences(), Vec(oracle_.dim(), 0.0));
  for (std::size_t t = first_; t <= last_; ++t) {
    const auto g = oracle_.gradients(t, x);
    for (std::size_t k = 0; k < out.size(); ++k) axpy(1.0, g[k], out[k]);
  }
  return out;
}

// ---- Random linear losses ----

namespace {

class RandomLinearOracle final : public LossOracle {
 public:
  RandomLinearOracle(const FeasibleSet& set, std::size_t num_sequences, std::uint64_t seed)
      : LossOracle(num_sequences, set.dim(),
                   ProblemBounds{set.sup_norm1(), std::sqrt(static_cast<double>(set.dim())),
                                 set.diameter()}),
        seed_(seed) {}

  Vec values(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    Vec out(num_sequences());
    for (std::size_t k = 0; k < num_sequences(); ++k) {
      RandomSource rs(RandomSource::combine(seed_, t, k));
      double s = 0.0;
      for (std::size_t j = 0; j < dim(); ++j) s += rs.next_double() * x[j];
      out[k] = s;
    }
    return out;
  }

  std::vector<Vec> gradients(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    std::vector<Vec> out(num_sequences(), Vec(dim()));
    for (std::size_t k = 0; k < num_sequences(); ++k) {
      RandomSource rs(RandomSource::combine(seed_, t, k));
      for (std::size_t j = 0; j < dim(); ++j) out[k][j] = rs.next_double();
    }
    return out;
  }

  bool has_mean_closed_form() const override { return true; }

  Vec mean_values(const Vec& x) const override {
    double s = 0.0;
    for (double v : x) s += v;
    return Vec(num_sequences(), 0.5 * s);
  }

  std::vector<Vec> mean_gradients(const Vec&) const override {
    return std::vector<Vec>(num_sequences(), Vec(dim(), 0.5));
  }

  std::unique_ptr<CumulativeLosses> cumulative(std::size_t horizon) const override {
    if (horizon == 0) throw std::invalid_argument("cumulative: empty horizon");
    AffineFamily fam;
    fam.offsets.assign(num_sequences(), 0.0);
    fam.coeffs.assign(num_sequences(), Vec(dim(), 0.0));
    for (std::size_t t = 1; t <= horizon; ++t) {
      for (std::size_t k = 0; k < num_sequences(); ++k) {
        RandomSource rs(RandomSource::combine(seed_, t, k));
        for (std::size_t j = 0; j < dim(); ++j) fam.coeffs[k][j] += rs.next_double();
      }
    }
    return std::make_unique<AffineCumulative>(std::move(fam), dim());
  }

  std::unique_ptr<ConvexFn> weighted_cumulative(const std::vector<Vec>& weights) const override {
    check_round_weights(weights, num_sequences());
    Vec coeffs(dim(), 0.0);
    for (std::size_t t = 1; t <= weights.size(); ++t) {
      for (std::size_t k = 0; k < num_sequences(); ++k) {
        RandomSource rs(RandomSource::combine(seed_, t, k));
        const double w = weights[t - 1][k];
        for (std::size_t j = 0; j < dim(); ++j) coeffs[j] += w * rs.next_double();
      }
    }
    return std::make_unique<AffineConvexFn>(0.0, std::move(coeffs));
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "random-linear(d=" << dim() << ",K=" << num_sequences() << ",coeff=U[0,1])";
    return os.str();
  }

 private:
  std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<LossOracle> make_random_linear(const FeasibleSet& set, std::size_t num_sequences,
                                               RandomSource rng) {
  return std::make_unique<RandomLinearOracle>(set, num_sequences, rng.seed());
}

// ---- Random scalar quadratics ----

namespace {

class RandomQuadraticOracle final : public LossOracle {
 public:
  RandomQuadraticOracle(const FeasibleSet& set, std::size_t num_sequences, std::uint64_t seed)
      : LossOracle(num_sequences, 1, bounds_for(set)), seed_(seed) {
    if (set.dim() != 1) throw std::invalid_argument("make_random_quadratic: set must be one-dimensional");
  }

  Vec values(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    Vec out(num_sequences());
    for (std::size_t k = 0; k < num_sequences(); ++k) {
      const double a = center(t, k);
      out[k] = (x[0] - a) * (x[0] - a);
    }
    return out;
  }

  std::vector<Vec> gradients(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    std::vector<Vec> out(num_sequences(), Vec(1));
    for (std::size_t k = 0; k < num_sequences(); ++k) out[k][0] = 2.0 * (x[0] - center(t, k));
    return out;
  }

  bool has_mean_closed_form() const override { return true; }

  Vec mean_values(const Vec& x) const override {
    // E a = 0 and E a^2 = 30 over the 19 integers in [-9, 9]
    return Vec(num_sequences(), x[0] * x[0] + 30.0);
  }

  std::vector<Vec> mean_gradients(const Vec& x) const override {
    return std::vector<Vec>(num_sequences(), Vec{2.0 * x[0]});
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "random-quadratic(K=" << num_sequences() << ",a=U{-9..9})";
    return os.str();
  }

 private:
  static ProblemBounds bounds_for(const FeasibleSet& set) {
    const auto [lo, hi] = set.scalar_bounds();
    double m = 0.0;
    for (double corner : {lo, hi}) {
      m = std::max(m, std::abs(corner - 9.0));
      m = std::max(m, std::abs(corner + 9.0));
    }
    return ProblemBounds{m * m, 2.0 * m, set.diameter()};
  }

  double center(std::size_t t, std::size_t k) const {
    RandomSource rs(RandomSource::combine(seed_, t, k));
    return static_cast<double>(rs.next_below(19)) - 9.0;
  }

  std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<LossOracle> make_random_quadratic(const FeasibleSet& set, std::size_t num_sequences,
                                                  RandomSource rng) {
  return std::make_unique<RandomQuadraticOracle>(set, num_sequences, rng.seed());
}

// ---- Experts losses ----

namespace {

class ExpertLossOracle final : public LossOracle {
 public:
  ExpertLossOracle(const FeasibleSet& set, std::size_t num_experts, double lo, double hi,
                   std::uint64_t seed)
      : LossOracle(num_experts, num_experts, ProblemBounds{hi, hi, set.diameter()}),
        lo_(lo),
        hi_(hi),
        seed_(seed) {
    if (set.kind() != FeasibleSet::Kind::simplex || set.dim() != num_experts) {
      throw std::invalid_argument("make_expert_losses: feasible set must be the simplex over the experts");
    }
    if (!(0.0 <= lo && lo < hi && hi <= 1.0)) {
      throw std::invalid_argument("make_expert_losses: need 0 <= lo < hi <= 1");
    }
  }

  Vec values(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    Vec out(num_sequences());
    for (std::size_t k = 0; k < num_sequences(); ++k) out[k] = x[k] * loss(t, k);
    return out;
  }

  std::vector<Vec> gradients(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    std::vector<Vec> out(num_sequences(), Vec(dim(), 0.0));
    for (std::size_t k = 0; k < num_sequences(); ++k) out[k][k] = loss(t, k);
    return out;
  }

  bool has_mean_closed_form() const override { return true; }

  Vec mean_values(const Vec& x) const override {
    const double mid = 0.5 * (lo_ + hi_);
    Vec out(num_sequences());
    for (std::size_t k = 0; k < num_sequences(); ++k) out[k] = mid * x[k];
    return out;
  }

  std::vector<Vec> mean_gradients(const Vec&) const override {
    const double mid = 0.5 * (lo_ + hi_);
    std::vector<Vec> out(num_sequences(), Vec(dim(), 0.0));
    for (std::size_t k = 0; k < num_sequences(); ++k) out[k][k] = mid;
    return out;
  }

  std::optional<Vec> per_expert_losses(std::size_t t) const override {
    Vec out(num_sequences());
    for (std::size_t k = 0; k < num_sequences(); ++k) out[k] = loss(t, k);
    return out;
  }

  std::unique_ptr<CumulativeLosses> cumulative(std::size_t horizon) const override {
    if (horizon == 0) throw std::invalid_argument("cumulative: empty horizon");
    AffineFamily fam;
    fam.offsets.assign(num_sequences(), 0.0);
    fam.coeffs.assign(num_sequences(), Vec(dim(), 0.0));
    for (std::size_t t = 1; t <= horizon; ++t) {
      for (std::size_t k = 0; k < num_sequences(); ++k) fam.coeffs[k][k] += loss(t, k);
    }
    return std::make_unique<AffineCumulative>(std::move(fam), dim());
  }

  std::unique_ptr<ConvexFn> weighted_cumulative(const std::vector<Vec>& weights) const override {
    check_round_weights(weights, num_sequences());
    Vec coeffs(dim(), 0.0);
    for (std::size_t t = 1; t <= weights.size(); ++t) {
      for (std::size_t k = 0; k < num_sequences(); ++k) coeffs[k] += weights[t - 1][k] * loss(t, k);
    }
    return std::make_unique<AffineConvexFn>(0.0, std::move(coeffs));
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "experts(K=" << num_sequences() << ",loss=U[" << lo_ << "," << hi_ << "])";
    return os.str();
  }

 private:
  double loss(std::size_t t, std::size_t k) const {
    RandomSource rs(RandomSource::combine(seed_, t, k));
    return rs.next_uniform(lo_, hi_);
  }

  double lo_, hi_;
  std::uint64_t seed_;
};

}  // namespace

std::unique_ptr<LossOracle> make_expert_losses(const FeasibleSet& set, std::size_t num_experts,
                                               double lo, double hi, RandomSource rng) {
  return std::make_unique<ExpertLossOracle>(set, num_experts, lo, hi, rng.seed());
}

// ---- Fair classification (plain and switching) ----

std::size_t switching_hard_group(std::size_t t, std::size_t switch_interval, std::size_t groups) {
  if (t == 0 || switch_interval == 0 || groups == 0) {
    throw std::invalid_argument("switching_hard_group: bad arguments");
  }
  return ((t - 1) / switch_interval) % groups;
}

namespace {

class FairClassificationOracle final : public LossOracle {
 public:
  FairClassificationOracle(const FeasibleSet& set, const FairClassificationParams& p,
                           std::size_t switch_interval, double shift_magnitude, std::uint64_t seed)
      : FairClassificationOracle(set, p, switch_interval, shift_magnitude, seed,
                                 init(set, p, switch_interval, shift_magnitude, seed)) {}

  Vec values(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    Vec out(num_sequences());
    const double reg = params_.regularizer * dot(x, x);
    for (std::size_t k = 0; k < num_sequences(); ++k) {
      const auto rd = round_data(t, k);
      double s = 0.0;
      for (std::size_t i = 0; i < params_.batch; ++i) {
        const double margin = margin_at(*rd, i, x);
        s += softplus(-static_cast<double>(rd->labels[i]) * margin);
      }
      out[k] = s / static_cast<double>(params_.batch) + reg;
    }
    return out;
  }

  std::vector<Vec> gradients(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    std::vector<Vec> out(num_sequences(), Vec(dim(), 0.0));
    for (std::size_t k = 0; k < num_sequences(); ++k) {
      const auto rd = round_data(t, k);
      Vec& g = out[k];
      for (std::size_t i = 0; i < params_.batch; ++i) {
        const double y = static_cast<double>(rd->labels[i]);
        const double w = -y * sigmoid(-y * margin_at(*rd, i, x)) / static_cast<double>(params_.batch);
        const double* z = rd->features.data() + i * dim();
        for (std::size_t j = 0; j < dim(); ++j) g[j] += w * z[j];
      }
      axpy(2.0 * params_.regularizer, x, g);
    }
    return out;
  }

  std::string descriptor() const override {
    std::ostringstream os;
    if (switch_interval_ > 0) {
      os << "switching-fairclf(d=" << dim() << ",K=" << num_sequences() << ",m=" << params_.batch
         << ",kappa=" << params_.regularizer << ",interval=" << switch_interval_
         << ",shift=" << shift_ << ")";
    } else {
      os << "fairclf(d=" << dim() << ",K=" << num_sequences() << ",m=" << params_.batch
         << ",kappa=" << params_.regularizer << ")";
    }
    return os.str();
  }

 private:
  struct RoundData {
    Vec features;                     // batch x dim, row major
    std::vector<signed char> labels;  // +1 / -1
  };

  struct Init {
    ProblemBounds bounds;
    std::vector<Vec> hidden;
    std::vector<Vec> means;
  };

  FairClassificationOracle(const FeasibleSet& set, const FairClassificationParams& p,
                           std::size_t switch_interval, double shift_magnitude, std::uint64_t seed,
                           Init init)
      : LossOracle(p.groups, set.dim(), init.bounds),
        params_(p),
        switch_interval_(switch_interval),
        shift_(shift_magnitude),
        seed_(seed),
        hidden_(std::move(init.hidden)),
        means_(std::move(init.means)) {}

  static Init init(const FeasibleSet& set, const FairClassificationParams& p,
                   std::size_t switch_interval, double shift_magnitude, std::uint64_t seed) {
    if (p.groups == 0) throw std::invalid_argument("fair classification: need at least one group");
    if (p.batch == 0) throw std::invalid_argument("fair classification: batch must be positive");
    if (!(p.regularizer > 0.0)) throw std::invalid_argument("fair classification: regularizer must be positive");
    if (!(p.feature_noise > 0.0)) throw std::invalid_argument("fair classification: feature noise must be positive");

    Init out;
    const std::size_t d = set.dim();
    out.hidden.resize(p.groups);
    out.means.resize(p.groups);
    for (std::size_t k = 0; k < p.groups; ++k) {
      RandomSource rs(RandomSource::combine(seed, kGroupParamSalt, k));
      out.hidden[k].resize(d);
      out.means[k].resize(d);
      for (std::size_t j = 0; j < d; ++j) out.hidden[k][j] = rs.next_gaussian();
      for (std::size_t j = 0; j < d; ++j) out.means[k][j] = rs.next_gaussian();
    }

    // Declared bounds: a high-probability envelope of the gaussian features.
    // ||z|| <= max_k ||mu_k(+shift)|| + sigma (sqrt(d) + 7) holds for every
    // draw at test scale; the loss and gradient bounds follow from it.
    double mean_norm = 0.0;
    for (std::size_t k = 0; k < p.groups; ++k) {
      mean_norm = std::max(mean_norm, norm2(out.means[k]));
      if (switch_interval > 0) {
        Vec shifted = out.means[k];
        for (double& v : shifted) v += shift_magnitude;
        mean_norm = std::max(mean_norm, norm2(shifted));
      }
    }
    const double z_bound = mean_norm + p.feature_noise * (std::sqrt(static_cast<double>(d)) + 7.0);
    const double radius = set.sup_norm2();
    out.bounds.loss_bound = radius * z_bound + std::log(2.0) + p.regularizer * radius * radius;
    out.bounds.grad_bound = z_bound + 2.0 * p.regularizer * radius;
    out.bounds.diameter = set.diameter();
    return out;
  }

  double margin_at(const RoundData& rd, std::size_t i, const Vec& x) const {
    const double* z = rd.features.data() + i * dim();
    double s = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) s += x[j] * z[j];
    return s;
  }

  RoundData generate_round(std::size_t t, std::size_t k) const {
    RoundData rd;
    const std::size_t d = dim();
    rd.features.resize(params_.batch * d);
    rd.labels.resize(params_.batch);
    Vec mean = means_[k];
    if (switch_interval_ > 0 && k == switching_hard_group(t, switch_interval_, num_sequences())) {
      for (double& v : mean) v += shift_;
    }
    RandomSource rs(RandomSource::combine(seed_, t, k));
    for (std::size_t i = 0; i < params_.batch; ++i) {
      double* z = rd.features.data() + i * d;
      double margin = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        z[j] = mean[j] + params_.feature_noise * rs.next_gaussian();
        margin += hidden_[k][j] * z[j];
      }
      rd.labels[i] = rs.next_double() < sigmoid(margin) ? 1 : -1;
    }
    return rd;
  }

  // Shared ownership keeps the data alive for callers even if the cache is
  // evicted underneath them.
  std::shared_ptr<const RoundData> round_data(std::size_t t, std::size_t k) const {
    const std::uint64_t key = static_cast<std::uint64_t>(t) * num_sequences() + k;
    {
      std::lock_guard<std::mutex> lock(cache_mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto rd = std::make_shared<const RoundData>(generate_round(t, k));
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto [it, inserted] = cache_.try_emplace(key, rd);
    if (inserted) {
      cached_doubles_ += rd->features.size();
      if (cached_doubles_ > kCacheDoubleCap) {
        // Replay windows at desk scale fit comfortably; beyond that, start over.
        cache_.clear();
        cached_doubles_ = 0;
      }
    }
    return inserted ? rd : it->second;
  }

  static constexpr std::size_t kCacheDoubleCap = 40'000'000;  // ~320 MB

  FairClassificationParams params_;
  std::size_t switch_interval_;  // 0 disables switching
  double shift_;
  std::uint64_t seed_;
  std::vector<Vec> hidden_;  // w*_k
  std::vector<Vec> means_;   // mu_k

  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<std::uint64_t, std::shared_ptr<const RoundData>> cache_;
  mutable std::size_t cached_doubles_ = 0;
};

}  // namespace

std::unique_ptr<LossOracle> make_fair_classification(const FeasibleSet& set,
                                                     const FairClassificationParams& params,
                                                     RandomSource rng) {
  return std::make_unique<FairClassificationOracle>(set, params, 0, 0.0, rng.seed());
}

std::unique_ptr<LossOracle> make_switching_fair(const FeasibleSet& set, const SwitchingParams& params,
                                                RandomSource rng) {
  if (params.switch_interval == 0) {
    throw std::invalid_argument("make_switching_fair: switch interval must be positive");
  }
  return std::make_unique<FairClassificationOracle>(set, params.base, params.switch_interval,
                                                    params.shift_magnitude, rng.seed());
}

// ---- Deterministic alternating pair ----

namespace {

class AdversarialPairOracle final : public LossOracle {
 public:
  AdversarialPairOracle() : LossOracle(2, 1, ProblemBounds{1.2, 1.0, 1.0}) {}

  Vec values(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    if (t % 2 == 1) return {1.2 - 0.2 * x[0], x[0]};
    return {x[0], 0.8 + 0.2 * x[0]};
  }

  std::vector<Vec> gradients(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    if (t % 2 == 1) return {{-0.2}, {1.0}};
    return {{1.0}, {0.2}};
  }

  // Mean over the period (the inputs are deterministic with period 2).
  bool has_mean_closed_form() const override { return true; }

  Vec mean_values(const Vec& x) const override {
    return {0.6 + 0.4 * x[0], 0.4 + 0.6 * x[0]};
  }

  std::vector<Vec> mean_gradients(const Vec&) const override { return {{0.4}, {0.6}}; }

  std::string descriptor() const override { return "adversarial-pair"; }
};

}  // namespace

std::unique_ptr<LossOracle> make_adversarial_pair() { return std::make_unique<AdversarialPairOracle>(); }

// ---- Mean loss estimation ----

MeanLossEstimate estimate_mean_losses(const LossOracle& oracle, const Vec& x, std::size_t samples,
                                      RandomSource& rng) {
  if (oracle.has_mean_closed_form()) {
    MeanLossEstimate est;
    est.mean = oracle.mean_values(x);
    est.std_error.assign(oracle.num_sequences(), 0.0);
    est.samples = 0;
    est.closed_form = true;
    return est;
  }
  if (samples == 0) throw std::invalid_argument("estimate_mean_losses: need at least one sample");

  const std::size_t k = oracle.num_sequences();
  Vec mean(k, 0.0);
  Vec m2(k, 0.0);
  for (std::size_t n = 1; n <= samples; ++n) {
    const std::size_t t = 1 + static_cast<std::size_t>(rng.next_below(1ull << 62));
    const Vec v = oracle.values(t, x);
    for (std::size_t i = 0; i < k; ++i) {
      const double delta = v[i] - mean[i];
      mean[i] += delta / static_cast<double>(n);
      m2[i] += delta * (v[i] - mean[i]);
    }
  }
  MeanLossEstimate est;
  est.mean = std::move(mean);
  est.std_error.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double var = samples > 1 ? m2[i] / static_cast<double>(samples - 1) : 0.0;
    est.std_error[i] = std::sqrt(var / static_cast<double>(samples));
  }
  est.samples = samples;
  est.closed_form = false;
  return est;
}

}  // namespace minmax
