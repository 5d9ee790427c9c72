#include "minmax/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace minmax {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;  // (sqrt(5) - 1) / 2

double max_component(const Vec& v, std::size_t* argmax = nullptr) {
  double m = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > m) {
      m = v[i];
      arg = i;
    }
  }
  if (argmax) *argmax = arg;
  return m;
}

// Golden-section search over [lo, hi]; assumes a unimodal objective. The
// returned point snaps to a boundary when the boundary value is no worse,
// so boundary optima come out exact.
template <typename F>
std::pair<double, double> golden_section(double lo, double hi, double tol, F&& f) {
  double a = lo, b = hi;
  double x1 = b - kGoldenRatio * (b - a);
  double x2 = a + kGoldenRatio * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatio * (b - a);
      f2 = f(x2);
    }
  }
  double best_x = 0.5 * (a + b);
  double best_f = f(best_x);
  for (double cand : {lo, hi}) {
    const double fc = f(cand);
    if (fc <= best_f) {
      best_f = fc;
      best_x = cand;
    }
  }
  return {best_x, best_f};
}

struct Tracker {
  Vec x;
  double value = std::numeric_limits<double>::infinity();

  bool offer(const Vec& cand, double val) {
    if (val < value) {
      value = val;
      x = cand;
      return true;
    }
    return false;
  }
};

// Projected subgradient with steps (D / Gbar) / sqrt(s), Gbar the running
// max subgradient norm, tracking the best iterate.
void subgradient_phase(const FeasibleSet& set, const CumulativeLosses& obj, const SolverOptions& opts,
                       std::size_t iterations, Tracker& best, std::size_t& used) {
  const double diameter = set.diameter();
  Vec x = best.x;
  double grad_scale = 1e-12;
  double window_best = best.value;
  std::size_t window_start = 0;
  for (std::size_t s = 1; s <= iterations; ++s) {
    ++used;
    std::size_t active = 0;
    const Vec vals = obj.values(x);
    best.offer(x, max_component(vals, &active));
    const Vec g = obj.gradients(x)[active];
    grad_scale = std::max(grad_scale, norm2(g));
    const double step = (diameter / grad_scale) / std::sqrt(static_cast<double>(s));
    Vec y = x;
    axpy(-step, g, y);
    x = set.project(y).coords;

    if (best.value < window_best - opts.stall_improvement) {
      window_best = best.value;
      window_start = s;
    } else if (s - window_start >= opts.stall_window) {
      break;
    }
  }
  const Vec vals = obj.values(x);
  best.offer(x, max_component(vals));
}

// Accelerated projected gradient on the tau-smoothed max with backtracking
// line search and adaptive restart. Tracks the best unsmoothed value seen.
void smoothed_stage(const FeasibleSet& set, const CumulativeLosses& obj, double tau,
                    std::size_t max_iters, double plateau_eps, Tracker& best, std::size_t& used,
                    double& lipschitz) {
  const std::size_t k = obj.components();

  const auto smoothed = [&](const Vec& x, double* true_max) {
    const Vec v = obj.values(x);
    const double m = max_component(v);
    if (true_max) *true_max = m;
    if (k == 1) return m;
    double s = 0.0;
    for (double vi : v) s += std::exp((vi - m) / tau);
    return m + tau * std::log(s);
  };

  const auto smoothed_grad = [&](const Vec& x, double* fval, double* true_max) {
    const Vec v = obj.values(x);
    const auto grads = obj.gradients(x);
    const double m = max_component(v);
    if (true_max) *true_max = m;
    if (k == 1) {
      if (fval) *fval = m;
      return grads[0];
    }
    double z = 0.0;
    Vec p(k);
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = std::exp((v[i] - m) / tau);
      z += p[i];
    }
    Vec g(obj.dim(), 0.0);
    for (std::size_t i = 0; i < k; ++i) axpy(p[i] / z, grads[i], g);
    if (fval) *fval = m + tau * std::log(z);
    return g;
  };

  Vec x = best.x;
  Vec x_prev = x;
  Vec y = x;
  double momentum = 1.0;
  double window_best = best.value;
  std::size_t window_start = 0;
  double fx_prev = std::numeric_limits<double>::infinity();

  for (std::size_t s = 1; s <= max_iters; ++s) {
    ++used;
    // The extrapolated point y may sit outside the set; it only feeds the
    // gradient step and never the tracker.
    double fy = 0.0, true_y = 0.0;
    const Vec gy = smoothed_grad(y, &fy, &true_y);

    Vec x_new;
    double fx_new = 0.0;
    while (true) {
      Vec cand = y;
      axpy(-1.0 / lipschitz, gy, cand);
      x_new = set.project(cand).coords;
      double true_new = 0.0;
      fx_new = smoothed(x_new, &true_new);
      best.offer(x_new, true_new);
      double quad = fy;
      double sq = 0.0;
      for (std::size_t j = 0; j < x_new.size(); ++j) {
        const double dxj = x_new[j] - y[j];
        quad += gy[j] * dxj;
        sq += dxj * dxj;
      }
      quad += 0.5 * lipschitz * sq;
      if (fx_new <= quad + 1e-14 * (std::abs(quad) + 1.0) || lipschitz > 1e18) break;
      lipschitz *= 2.0;
    }

    const double momentum_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    Vec y_new = x_new;
    const double beta = (momentum - 1.0) / momentum_new;
    for (std::size_t j = 0; j < y_new.size(); ++j) y_new[j] += beta * (x_new[j] - x_prev[j]);
    if (fx_new > fx_prev) {  // restart the momentum when the objective rises
      y_new = x_new;
      momentum = 1.0;
    } else {
      momentum = momentum_new;
    }
    y = std::move(y_new);
    x_prev = std::move(x);
    x = x_new;
    fx_prev = fx_new;
    lipschitz = std::max(lipschitz * 0.97, 1e-12);

    if (best.value < window_best - plateau_eps) {
      window_best = best.value;
      window_start = s;
    } else if (s - window_start >= 50) {
      break;
    }
  }
}

SolverResult solve_one_dimensional(const FeasibleSet& set, const CumulativeLosses& obj,
                                   const SolverOptions& opts) {
  const auto [lo, hi] = set.scalar_bounds();
  std::size_t evals = 0;
  const auto f = [&](double x) {
    ++evals;
    const Vec v = obj.values({x});
    return max_component(v);
  };
  const auto [x, val] = golden_section(lo, hi, opts.golden_tol, f);
  SolverResult res;
  res.x = {x};
  res.value = val;
  res.iterations = evals;
  res.gap = 0.0;
  res.converged = true;
  return res;
}

}  // namespace

std::pair<Vec, double> minimize_affine(const FeasibleSet& set, double offset, const Vec& coeffs) {
  if (coeffs.size() != set.dim()) throw std::invalid_argument("minimize_affine: dimension mismatch");
  switch (set.kind()) {
    case FeasibleSet::Kind::interval:
    case FeasibleSet::Kind::box: {
      const auto [lo, hi] = set.rectangle_bounds();
      Vec x(set.dim());
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = coeffs[j] > 0.0 ? lo[j] : (coeffs[j] < 0.0 ? hi[j] : lo[j]);
      return {x, offset + dot(coeffs, x)};
    }
    case FeasibleSet::Kind::ball: {
      const Vec c = set.center();
      const double r = 0.5 * set.diameter();
      const double n = norm2(coeffs);
      Vec x = c;
      if (n > 0.0) axpy(-r / n, coeffs, x);
      return {x, offset + dot(coeffs, x)};
    }
    case FeasibleSet::Kind::simplex: {
      std::size_t arg = 0;
      double m = coeffs[0];
      for (std::size_t i = 1; i < coeffs.size(); ++i) {
        if (coeffs[i] < m) {
          m = coeffs[i];
          arg = i;
        }
      }
      Vec x(set.dim(), 0.0);
      x[arg] = 1.0;
      return {x, offset + m};
    }
  }
  throw std::logic_error("minimize_affine: unknown set kind");
}

SolverResult minimize_max(const FeasibleSet& set, const CumulativeLosses& objective,
                          const SolverOptions& opts) {
  if (objective.dim() != set.dim()) throw std::invalid_argument("minimize_max: dimension mismatch");
  if (objective.components() == 0) throw std::invalid_argument("minimize_max: empty objective");

  if (set.dim() == 1) return solve_one_dimensional(set, objective, opts);

  if (objective.components() == 1) {
    if (const auto fam = objective.affine()) {
      auto [x, val] = minimize_affine(set, fam->offsets[0], fam->coeffs[0]);
      return SolverResult{std::move(x), val, 1, 0.0, true};
    }
  }

  Tracker best;
  best.x = set.center();
  best.value = max_component(objective.values(best.x));
  std::size_t used = 0;

  if (!opts.use_smoothing) {
    subgradient_phase(set, objective, opts, opts.max_iterations, best, used);
    SolverResult res;
    res.x = best.x;
    res.value = best.value;
    res.iterations = used;
    res.gap = std::numeric_limits<double>::quiet_NaN();
    res.converged = false;  // no certificate from the subgradient method alone
    return res;
  }

  subgradient_phase(set, objective, opts, opts.subgradient_iterations, best, used);

  const std::size_t k = objective.components();
  const double log_k = std::log(static_cast<double>(std::max<std::size_t>(k, 2)));
  const double tau_final = std::max(opts.tolerance / (2.0 * log_k), 1e-14);
  const Vec v0 = objective.values(best.x);
  double spread = max_component(v0) - *std::min_element(v0.begin(), v0.end());
  spread = std::max({spread, opts.tolerance, 1e-9});
  double tau = k == 1 ? 1.0 : std::max(tau_final, 0.5 * spread);

  double lipschitz = 1.0;
  std::size_t stages = 1;
  if (k > 1) {
    double tt = tau;
    while (tt > tau_final * 1.0001) {
      tt /= 8.0;
      ++stages;
    }
  }
  const std::size_t per_stage = std::max<std::size_t>(200, opts.smoothing_iterations / stages);

  double before_final_stage = best.value;
  int quiet_stages = 0;
  while (true) {
    before_final_stage = best.value;
    const double plateau = std::max(opts.tolerance * 0.05, (k == 1 ? 0.0 : tau) * 1e-3);
    smoothed_stage(set, objective, tau, per_stage, plateau, best, used, lipschitz);
    if (k == 1 || tau <= tau_final * 1.0001) break;
    // once the value stops moving, skip the remaining temperature ladder and
    // finish with a single stage at the target temperature
    quiet_stages = before_final_stage - best.value < 0.02 * opts.tolerance ? quiet_stages + 1 : 0;
    tau = quiet_stages >= 2 ? tau_final : std::max(tau / 8.0, tau_final);
  }

  SolverResult res;
  res.x = best.x;
  res.value = best.value;
  res.iterations = used;
  const double stage_progress = std::max(before_final_stage - best.value, 0.0);
  res.gap = (k == 1 ? 0.0 : tau * log_k) + std::min(stage_progress, opts.tolerance);
  res.converged = res.gap <= opts.tolerance * 1.001 + 1e-300;
  return res;
}

namespace {

// Single convex function viewed as a one-component family.
class SingleComponent final : public CumulativeLosses {
 public:
  explicit SingleComponent(const ConvexFn& fn) : fn_(fn) {}
  std::size_t components() const override { return 1; }
  std::size_t dim() const override { return fn_.dim(); }
  Vec values(const Vec& x) const override { return {fn_.value(x)}; }
  std::vector<Vec> gradients(const Vec& x) const override { return {fn_.gradient(x)}; }
  std::optional<AffineFamily> affine() const override { return fn_.affine(); }

 private:
  const ConvexFn& fn_;
};

}  // namespace

SolverResult minimize_convex(const FeasibleSet& set, const ConvexFn& fn, const SolverOptions& opts) {
  SingleComponent wrapped(fn);
  return minimize_max(set, wrapped, opts);
}

}  // namespace minmax
