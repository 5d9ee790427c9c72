#include "minmax/algorithms.hpp"

#include <cmath>
#include <stdexcept>

namespace minmax {

WeightedLoss mix_losses(const LossBundle& bundle, const Vec& weights) {
  if (bundle.values.size() != weights.size()) {
    throw std::invalid_argument("mix_losses: weight length mismatch");
  }
  WeightedLoss mixed;
  mixed.value = dot(weights, bundle.values);
  if (!bundle.grads.empty()) {
    if (bundle.grads.size() != weights.size()) {
      throw std::invalid_argument("mix_losses: gradient arity mismatch");
    }
    mixed.gradient.assign(bundle.grads.front().size(), 0.0);
    for (std::size_t k = 0; k < weights.size(); ++k) axpy(weights[k], bundle.grads[k], mixed.gradient);
  }
  return mixed;
}

namespace {

StepOutcome finish_round(const AlgoState& state, Action action, const LossOracle& oracle,
                         bool hedge) {
  const std::size_t t = state.t;
  Vec values = oracle.values(t, action.coords);
  if (!all_finite(values)) throw std::runtime_error("online step: non-finite loss values");

  AlgoState next = state;
  next.x = action;
  next.t = t + 1;
  for (std::size_t k = 0; k < values.size(); ++k) next.cum_losses[k] += values[k];
  if (hedge) next.theta = hedge_update(state.theta, values, state.eta_theta.eta(t));
  return StepOutcome{std::move(next), std::move(action), std::move(values)};
}

StepOutcome ogd_family_step(const AlgoState& state, const Feedback& prev_feedback,
                            const LossOracle& oracle, const FeasibleSet& set, const Vec& mix,
                            bool hedge) {
  if (prev_feedback.mode != FeedbackMode::full) {
    throw std::invalid_argument("online step: full-information feedback required");
  }
  Vec y = state.x.coords;
  if (!prev_feedback.observed.grads.empty()) {
    const WeightedLoss mixed = mix_losses(prev_feedback.observed, mix);
    if (!all_finite(mixed.gradient)) throw std::runtime_error("online step: non-finite gradient");
    axpy(-state.eta_x.eta(state.t), mixed.gradient, y);
  }
  return finish_round(state, set.project(y), oracle, hedge);
}

}  // namespace

AlgoState make_initial_state(const FeasibleSet& set, std::size_t num_sequences, StepSchedule eta_x,
                             StepSchedule eta_theta, ProblemBounds bounds, std::optional<Vec> x0) {
  bounds.validate();
  Vec start = x0 ? *x0 : set.center();
  if (!set.contains(start, 1e-9)) throw std::invalid_argument("make_initial_state: x0 outside the set");
  return AlgoState{set.project(start), SimplexWeights(num_sequences), 1, Vec(num_sequences, 0.0),
                   eta_x, eta_theta, bounds};
}

StepOutcome hedge_ogd_step(const AlgoState& state, const Feedback& prev_feedback,
                           const LossOracle& oracle, const FeasibleSet& set) {
  return ogd_family_step(state, prev_feedback, oracle, set, state.theta.probabilities(), true);
}

StepOutcome avg_ogd_step(const AlgoState& state, const Feedback& prev_feedback,
                         const LossOracle& oracle, const FeasibleSet& set) {
  const Vec uniform(state.theta.size(), 1.0 / static_cast<double>(state.theta.size()));
  return ogd_family_step(state, prev_feedback, oracle, set, uniform, false);
}

Vec one_point_gradient_estimate(double value_at_probe, const Vec& direction, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("gradient estimate: delta must be positive");
  const double scale = static_cast<double>(direction.size()) / delta * value_at_probe;
  return scaled(direction, scale);
}

Vec two_point_gradient_estimate(double value_plus, double value_minus, const Vec& direction,
                                double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("gradient estimate: delta must be positive");
  const double scale =
      static_cast<double>(direction.size()) / (2.0 * delta) * (value_plus - value_minus);
  return scaled(direction, scale);
}

StepOutcome bandit_step(const AlgoState& state, const LossOracle& oracle, const FeasibleSet& set,
                        FeedbackMode mode, RandomSource& rng) {
  const auto kind = state.eta_x.kind();
  if (mode == FeedbackMode::bandit_one_point) {
    if (kind != StepSchedule::Kind::bandit_one_point) {
      throw std::invalid_argument("bandit_step: schedule does not match one-point feedback");
    }
  } else if (mode == FeedbackMode::bandit_two_point) {
    if (kind != StepSchedule::Kind::bandit_two_point) {
      throw std::invalid_argument("bandit_step: schedule does not match two-point feedback");
    }
  } else {
    throw std::invalid_argument("bandit_step: bandit feedback mode required");
  }

  const std::size_t t = state.t;
  const std::size_t d = set.dim();
  const double delta = state.eta_x.delta(t);
  const Vec u = sample_unit_sphere(rng, d);
  const Vec& theta = state.theta.probabilities();

  Vec estimate;
  if (mode == FeedbackMode::bandit_one_point) {
    Vec probe = state.x.coords;
    axpy(delta, u, probe);
    const Action played_probe = set.project(probe);
    const WeightedLoss mixed = mix_losses(oracle.bundle(t, played_probe.coords, false), theta);
    estimate = one_point_gradient_estimate(mixed.value, u, delta);
  } else {
    Vec plus = state.x.coords, minus = state.x.coords;
    axpy(delta, u, plus);
    axpy(-delta, u, minus);
    const WeightedLoss mixed_plus = mix_losses(oracle.bundle(t, plus, false), theta);
    const WeightedLoss mixed_minus = mix_losses(oracle.bundle(t, minus, false), theta);
    estimate = two_point_gradient_estimate(mixed_plus.value, mixed_minus.value, u, delta);
  }
  if (!all_finite(estimate)) throw std::runtime_error("bandit_step: non-finite gradient estimate");

  Vec y = state.x.coords;
  axpy(-state.eta_x.eta(t), estimate, y);
  return finish_round(state, set.project(y), oracle, true);
}

StepOutcome greedy_step(const AlgoState& state, const LossOracle& oracle, const FeasibleSet& set,
                        const SolverOptions& opts) {
  const RoundSlice round(oracle, state.t, state.t);
  const SolverResult res = minimize_max(set, round, opts);
  return finish_round(state, Action{res.x}, oracle, false);
}

Action ftrl_action(const LossOracle& oracle, std::size_t t, const FeasibleSet& set,
                   double regularizer_scale, const SolverOptions& opts, bool* converged) {
  if (t == 0) throw std::invalid_argument("ftrl_action: rounds are 1-based");
  if (!(regularizer_scale >= 0.0)) throw std::invalid_argument("ftrl_action: negative regularizer");
  if (converged) *converged = true;
  if (t == 1) return set.project(Vec(set.dim(), 0.0));

  const auto history = oracle.cumulative(t - 1);

  // max_k (history_k(x)) + (scale/2)||x||^2 == max_k (history_k(x) + reg(x))
  class Regularized final : public CumulativeLosses {
   public:
    Regularized(const CumulativeLosses& base, double scale) : base_(base), scale_(scale) {}
    std::size_t components() const override { return base_.components(); }
    std::size_t dim() const override { return base_.dim(); }
    Vec values(const Vec& x) const override {
      Vec v = base_.values(x);
      const double reg = 0.5 * scale_ * dot(x, x);
      for (double& vi : v) vi += reg;
      return v;
    }
    std::vector<Vec> gradients(const Vec& x) const override {
      auto g = base_.gradients(x);
      for (Vec& gk : g) axpy(scale_, x, gk);
      return g;
    }

   private:
    const CumulativeLosses& base_;
    double scale_;
  };

  const Regularized objective(*history, regularizer_scale);
  const SolverResult res = minimize_max(set, objective, opts);
  if (converged) *converged = res.converged;
  return Action{res.x};
}

// ---- MULTI ----

namespace {

// Balanced split: the left subtree gets the larger half.
int build_tree(MultiState& state, std::size_t first, std::size_t last) {
  // [first, last) with at least two experts
  MultiState::Node node;
  const std::size_t mid = first + (last - first + 1) / 2;
  if (mid - first == 1) {
    node.leaf_left = static_cast<int>(first);
  } else {
    node.left = build_tree(state, first, mid);
  }
  if (last - mid == 1) {
    node.leaf_right = static_cast<int>(mid);
  } else {
    node.right = build_tree(state, mid, last);
  }
  state.nodes.push_back(node);
  return static_cast<int>(state.nodes.size() - 1);
}

void collect_distribution(const MultiState& state, int node_index, double mass, Vec& out) {
  const auto& node = state.nodes[static_cast<std::size_t>(node_index)];
  if (node.left >= 0) {
    collect_distribution(state, node.left, mass * node.p_left, out);
  } else {
    out[static_cast<std::size_t>(node.leaf_left)] += mass * node.p_left;
  }
  if (node.right >= 0) {
    collect_distribution(state, node.right, mass * (1.0 - node.p_left), out);
  } else {
    out[static_cast<std::size_t>(node.leaf_right)] += mass * (1.0 - node.p_left);
  }
}

// Probability-weighted mean loss of the subtree rooted at node_index.
double aggregate_loss(const MultiState& state, int node_index, const Vec& losses) {
  const auto& node = state.nodes[static_cast<std::size_t>(node_index)];
  const double left = node.left >= 0 ? aggregate_loss(state, node.left, losses)
                                     : losses[static_cast<std::size_t>(node.leaf_left)];
  const double right = node.right >= 0 ? aggregate_loss(state, node.right, losses)
                                       : losses[static_cast<std::size_t>(node.leaf_right)];
  return node.p_left * left + (1.0 - node.p_left) * right;
}

void update_nodes(MultiState& state, int node_index, const Vec& losses, double scale) {
  auto& node = state.nodes[static_cast<std::size_t>(node_index)];
  const double left = node.left >= 0 ? aggregate_loss(state, node.left, losses)
                                     : losses[static_cast<std::size_t>(node.leaf_left)];
  const double right = node.right >= 0 ? aggregate_loss(state, node.right, losses)
                                       : losses[static_cast<std::size_t>(node.leaf_right)];
  const double p = node.p_left;
  const double updated = p + ((1.0 - p) * right - p * left) * scale;
  node.p_left = std::min(1.0, std::max(0.0, updated));
  if (node.left >= 0) update_nodes(state, node.left, losses, scale);
  if (node.right >= 0) update_nodes(state, node.right, losses, scale);
}

}  // namespace

MultiState make_multi_state(std::size_t num_experts, std::size_t horizon) {
  if (num_experts == 0) throw std::invalid_argument("make_multi_state: need at least one expert");
  if (horizon == 0) throw std::invalid_argument("make_multi_state: the horizon must be known");
  MultiState state;
  state.num_experts = num_experts;
  state.horizon = horizon;
  if (num_experts >= 2) build_tree(state, 0, num_experts);
  return state;
}

Vec multi_distribution(const MultiState& state) {
  Vec out(state.num_experts, 0.0);
  if (state.num_experts == 1) {
    out[0] = 1.0;
  } else {
    collect_distribution(state, static_cast<int>(state.nodes.size() - 1), 1.0, out);
  }
  return out;
}

std::pair<MultiState, Vec> multi_step(const MultiState& state, const Vec& losses) {
  if (losses.size() != state.num_experts) throw std::invalid_argument("multi_step: loss length mismatch");
  for (double l : losses) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("multi_step: losses must lie in [0,1]");
  }
  Vec played = multi_distribution(state);
  MultiState next = state;
  if (state.num_experts >= 2) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(state.horizon));
    update_nodes(next, static_cast<int>(next.nodes.size() - 1), losses, scale);
  }
  return {std::move(next), std::move(played)};
}

// ---- Run loop ----

RunTrace run_online(const RunSpec& spec, const LossOracle& oracle, const FeasibleSet& set) {
  if (spec.horizon == 0) throw std::invalid_argument("run_online: empty horizon");
  const std::size_t horizon = spec.horizon;
  const std::size_t k = oracle.num_sequences();

  RunTrace trace;
  trace.actions.reserve(horizon);
  trace.thetas.reserve(horizon + 1);
  trace.values.reserve(horizon);
  trace.eta_x_used.assign(horizon, 0.0);
  trace.eta_theta_used.assign(horizon, 0.0);

  const Vec uniform(k, 1.0 / static_cast<double>(k));

  if (spec.algo == AlgoKind::multi) {
    MultiState state = make_multi_state(k, horizon);
    trace.cum_losses.assign(k, 0.0);
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto raw = oracle.per_expert_losses(t);
      if (!raw) throw std::invalid_argument("run_online: multi requires per-expert losses");
      auto [next, played] = multi_step(state, *raw);
      state = std::move(next);
      const Vec vals = oracle.values(t, played);
      for (std::size_t i = 0; i < k; ++i) trace.cum_losses[i] += vals[i];
      trace.actions.push_back(Action{std::move(played)});
      trace.values.push_back(vals);
      trace.thetas.push_back(uniform);
    }
    trace.thetas.push_back(uniform);
    return trace;
  }

  if (spec.algo == AlgoKind::ftrl) {
    trace.cum_losses.assign(k, 0.0);
    for (std::size_t t = 1; t <= horizon; ++t) {
      Action x = ftrl_action(oracle, t, set, spec.ftrl_regularizer, spec.solver);
      const Vec vals = oracle.values(t, x.coords);
      for (std::size_t i = 0; i < k; ++i) trace.cum_losses[i] += vals[i];
      trace.values.push_back(vals);
      trace.actions.push_back(std::move(x));
      trace.thetas.push_back(uniform);
    }
    trace.thetas.push_back(uniform);
    return trace;
  }

  AlgoState state =
      make_initial_state(set, k, spec.eta_x, spec.eta_theta, spec.bounds, spec.x0);
  RandomSource rng(spec.algo_seed);
  Feedback feedback = Feedback::initial();

  for (std::size_t t = 1; t <= horizon; ++t) {
    trace.thetas.push_back(state.theta.probabilities());
    StepOutcome out = [&] {
      switch (spec.algo) {
        case AlgoKind::hedge_ogd:
          if (spec.feedback == FeedbackMode::full) {
            return hedge_ogd_step(state, feedback, oracle, set);
          }
          return bandit_step(state, oracle, set, spec.feedback, rng);
        case AlgoKind::avg_ogd:
          return avg_ogd_step(state, feedback, oracle, set);
        case AlgoKind::greedy:
          return greedy_step(state, oracle, set, spec.solver);
        default:
          throw std::logic_error("run_online: unhandled algorithm");
      }
    }();

    if (spec.feedback == FeedbackMode::full &&
        (spec.algo == AlgoKind::hedge_ogd || spec.algo == AlgoKind::avg_ogd)) {
      feedback.mode = FeedbackMode::full;
      feedback.observed.values = out.observed_values;
      feedback.observed.grads = oracle.gradients(t, out.action.coords);
      trace.eta_x_used[t - 1] = state.eta_x.eta(t);
    }
    if (spec.algo == AlgoKind::hedge_ogd) {
      trace.eta_theta_used[t - 1] = state.eta_theta.eta(t);
      if (spec.feedback != FeedbackMode::full) trace.eta_x_used[t - 1] = state.eta_x.eta(t);
    }

    trace.actions.push_back(out.action);
    trace.values.push_back(out.observed_values);
    state = std::move(out.state);
  }
  trace.thetas.push_back(state.theta.probabilities());
  trace.cum_losses = state.cum_losses;
  return trace;
}

}  // namespace minmax
