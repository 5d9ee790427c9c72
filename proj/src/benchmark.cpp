#include "minmax/benchmark.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace minmax {

namespace {

void check_rounds(const RoundsView& rounds) {
  if (rounds.oracle == nullptr || rounds.horizon == 0) {
    throw std::invalid_argument("RoundsView: need an oracle and a positive horizon");
  }
}

// Fixed sample of rounds averaged into one objective (common random numbers,
// so the solver sees a deterministic function).
class SampledMeanObjective final : public CumulativeLosses {
 public:
  SampledMeanObjective(const LossOracle& oracle, std::vector<std::size_t> rounds)
      : oracle_(oracle), rounds_(std::move(rounds)) {}

  std::size_t components() const override { return oracle_.num_sequences(); }
  std::size_t dim() const override { return oracle_.dim(); }

  Vec values(const Vec& x) const override {
    Vec out(oracle_.num_sequences(), 0.0);
    for (std::size_t t : rounds_) {
      const Vec v = oracle_.values(t, x);
      for (std::size_t k = 0; k < out.size(); ++k) out[k] += v[k];
    }
    const double inv = 1.0 / static_cast<double>(rounds_.size());
    for (double& v : out) v *= inv;
    return out;
  }

  std::vector<Vec> gradients(const Vec& x) const override {
    std::vector<Vec> out(oracle_.num_sequences(), Vec(oracle_.dim(), 0.0));
    for (std::size_t t : rounds_) {
      const auto g = oracle_.gradients(t, x);
      for (std::size_t k = 0; k < out.size(); ++k) axpy(1.0, g[k], out[k]);
    }
    const double inv = 1.0 / static_cast<double>(rounds_.size());
    for (Vec& g : out) {
      for (double& v : g) v *= inv;
    }
    return out;
  }

 private:
  const LossOracle& oracle_;
  std::vector<std::size_t> rounds_;
};

class MeanObjective final : public CumulativeLosses {
 public:
  explicit MeanObjective(const LossOracle& oracle) : oracle_(oracle) {}
  std::size_t components() const override { return oracle_.num_sequences(); }
  std::size_t dim() const override { return oracle_.dim(); }
  Vec values(const Vec& x) const override { return oracle_.mean_values(x); }
  std::vector<Vec> gradients(const Vec& x) const override { return oracle_.mean_gradients(x); }

 private:
  const LossOracle& oracle_;
};

SaddlePoint saddle_from(const CumulativeLosses& objective, const SolverResult& res) {
  SaddlePoint sp;
  sp.x_star = Action{res.x};
  const auto [theta, value] = max_over_simplex(objective.values(res.x));
  sp.theta_star = theta;
  sp.value = value;
  sp.iterations = res.iterations;
  sp.gap = res.gap;
  sp.converged = res.converged;
  return sp;
}

}  // namespace

std::pair<SimplexWeights, double> max_over_simplex(const Vec& cumulative) {
  if (cumulative.empty()) throw std::invalid_argument("max_over_simplex: empty vector");
  if (!all_finite(cumulative)) throw std::invalid_argument("max_over_simplex: non-finite entries");
  std::size_t arg = 0;
  double best = cumulative[0];
  for (std::size_t i = 1; i < cumulative.size(); ++i) {
    if (cumulative[i] > best) {
      best = cumulative[i];
      arg = i;
    }
  }
  if (cumulative.size() == 1) return {SimplexWeights(1), best};
  return {SimplexWeights::point_mass(cumulative.size(), arg), best};
}

SaddlePoint solve_offline_minmax(const RoundsView& rounds, const FeasibleSet& set,
                                 const SolverOptions& opts) {
  check_rounds(rounds);
  const auto cumulative = rounds.oracle->cumulative(rounds.horizon);
  const SolverResult res = minimize_max(set, *cumulative, opts);
  return saddle_from(*cumulative, res);
}

double per_slot_benchmark(const RoundsView& rounds, const FeasibleSet& set, const SolverOptions& opts) {
  check_rounds(rounds);
  double total = 0.0;
  for (std::size_t t = 1; t <= rounds.horizon; ++t) {
    const RoundSlice slice(*rounds.oracle, t, t);
    total += minimize_max(set, slice, opts).value;
  }
  return total;
}

RegretReport decompose_regret(const std::vector<Action>& actions, const std::vector<Vec>& thetas,
                              const RoundsView& rounds, const FeasibleSet& set,
                              const SolverOptions& opts, bool with_per_slot) {
  check_rounds(rounds);
  const std::size_t horizon = rounds.horizon;
  const std::size_t k = rounds.oracle->num_sequences();
  if (actions.size() != horizon) throw std::invalid_argument("decompose_regret: trajectory length mismatch");
  if (thetas.size() < horizon) throw std::invalid_argument("decompose_regret: weight sequence too short");

  RegretReport report;
  Vec cumulative(k, 0.0);
  double realized_weighted = 0.0;
  report.running_max_loss.resize(horizon);
  std::vector<Vec> weights(thetas.begin(), thetas.begin() + static_cast<std::ptrdiff_t>(horizon));
  for (std::size_t t = 1; t <= horizon; ++t) {
    const Vec& theta = weights[t - 1];
    if (theta.size() != k) throw std::invalid_argument("decompose_regret: weight length mismatch");
    const Vec vals = rounds.oracle->values(t, actions[t - 1].coords);
    for (std::size_t i = 0; i < k; ++i) cumulative[i] += vals[i];
    realized_weighted += dot(theta, vals);
    report.running_max_loss[t - 1] = max_over_simplex(cumulative).second;
  }

  report.cost_algorithm = max_over_simplex(cumulative).second;
  report.r1 = report.cost_algorithm - realized_weighted;

  const auto surrogate = rounds.oracle->weighted_cumulative(weights);
  const double inner_min = minimize_convex(set, *surrogate, opts).value;
  report.r2 = realized_weighted - inner_min;

  report.offline = solve_offline_minmax(rounds, set, opts);
  report.cost_offline = report.offline.value;
  report.r3 = inner_min - report.cost_offline;
  report.regret = report.cost_algorithm - report.cost_offline;

  if (with_per_slot) {
    // Single-round solves carry a smaller budget; the per-slot benchmark is
    // exact in one dimension and informational otherwise.
    SolverOptions slot = opts;
    slot.tolerance = std::max(opts.tolerance, 1e-6);
    slot.subgradient_iterations = 100;
    slot.smoothing_iterations = 4000;
    report.per_slot_benchmark = per_slot_benchmark(rounds, set, slot);
  } else {
    report.per_slot_benchmark = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::pair<SaddlePoint, double> expected_benchmark(const LossOracle& oracle, const FeasibleSet& set,
                                                  std::size_t samples, RandomSource& rng,
                                                  const SolverOptions& opts) {
  if (oracle.has_mean_closed_form()) {
    const MeanObjective objective(oracle);
    const SolverResult res = minimize_max(set, objective, opts);
    return {saddle_from(objective, res), 0.0};
  }
  if (samples == 0) throw std::invalid_argument("expected_benchmark: need at least one sample");

  std::vector<std::size_t> sampled(samples);
  for (std::size_t& t : sampled) t = 1 + static_cast<std::size_t>(rng.next_below(1ull << 62));
  const SampledMeanObjective objective(oracle, sampled);
  const SolverResult res = minimize_max(set, objective, opts);
  SaddlePoint sp = saddle_from(objective, res);

  // Standard error of the active coordinate's per-round value at the solution.
  std::size_t active = 0;
  const Vec means = objective.values(sp.x_star.coords);
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] > means[active]) active = i;
  }
  double m2 = 0.0;
  for (std::size_t t : sampled) {
    const double v = oracle.values(t, sp.x_star.coords)[active];
    const double d = v - means[active];
    m2 += d * d;
  }
  const double var = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
  return {sp, std::sqrt(var / static_cast<double>(samples))};
}

double deviation_from_average_l1(const std::vector<Vec>& thetas) {
  if (thetas.empty()) return 0.0;
  const std::size_t k = thetas.front().size();
  Vec mean(k, 0.0);
  for (const Vec& th : thetas) axpy(1.0, th, mean);
  for (double& v : mean) v /= static_cast<double>(thetas.size());
  double total = 0.0;
  for (const Vec& th : thetas) {
    for (std::size_t i = 0; i < k; ++i) total += std::abs(th[i] - mean[i]);
  }
  return total;
}

double consecutive_variation_l1(const std::vector<Vec>& thetas) {
  double total = 0.0;
  for (std::size_t t = 1; t < thetas.size(); ++t) {
    for (std::size_t i = 0; i < thetas[t].size(); ++i) total += std::abs(thetas[t][i] - thetas[t - 1][i]);
  }
  return total;
}

}  // namespace minmax
