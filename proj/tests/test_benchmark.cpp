#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "minmax/algorithms.hpp"
#include "minmax/benchmark.hpp"

using namespace minmax;

namespace {

// Single deterministic sequence f_t(x) = x on [0,1].
class IdentityOracle final : public LossOracle {
 public:
  IdentityOracle() : LossOracle(1, 1, ProblemBounds{1.0, 1.0, 1.0}) {}
  Vec values(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    return {x[0]};
  }
  std::vector<Vec> gradients(std::size_t t, const Vec& x) const override {
    check_query(t, x);
    return {{1.0}};
  }
  std::string descriptor() const override { return "identity"; }
};

RunTrace hedge_run(const LossOracle& oracle, const FeasibleSet& set, std::size_t horizon,
                   std::uint64_t algo_seed = 7, FeedbackMode mode = FeedbackMode::full) {
  RunSpec spec;
  spec.algo = AlgoKind::hedge_ogd;
  spec.feedback = mode;
  spec.horizon = horizon;
  spec.bounds = oracle.bounds();
  spec.eta_theta = StepSchedule::hedge_sqrt(oracle.num_sequences(), oracle.bounds().loss_bound);
  spec.eta_x = mode == FeedbackMode::full
                   ? StepSchedule::ogd_sqrt(oracle.bounds().diameter, oracle.bounds().grad_bound)
                   : (mode == FeedbackMode::bandit_one_point
                          ? StepSchedule::bandit_one_point(oracle.bounds().diameter,
                                                           oracle.bounds().grad_bound, set.dim())
                          : StepSchedule::bandit_two_point(oracle.bounds().diameter,
                                                           oracle.bounds().grad_bound, set.dim()));
  spec.algo_seed = algo_seed;
  return run_online(spec, oracle, set);
}

}  // namespace

TEST_CASE("offline optimum of the alternating pair") {
  const auto oracle = make_adversarial_pair();
  const FeasibleSet unit = FeasibleSet::interval(0.0, 1.0);
  const std::size_t N = 50;
  const RoundsView rounds{oracle.get(), 2 * N};

  const SaddlePoint sp = solve_offline_minmax(rounds, unit);
  CHECK(sp.x_star.coords[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sp.value == doctest::Approx(1.2 * N).epsilon(1e-9));
  CHECK(sp.theta_star[0] == 1.0);  // the first sequence dominates at x* = 0

  CHECK(per_slot_benchmark(rounds, unit) == doctest::Approx(1.8 * N).epsilon(1e-9));
  CHECK(per_slot_benchmark(rounds, unit) / sp.value == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("single-sequence monotone objective") {
  const IdentityOracle oracle;
  const FeasibleSet unit = FeasibleSet::interval(0.0, 1.0);
  const RoundsView rounds{&oracle, 25};
  const SaddlePoint sp = solve_offline_minmax(rounds, unit);
  CHECK(sp.x_star.coords[0] == 0.0);
  CHECK(sp.value == 0.0);
  // per-slot minimum never beats the fixed-action benchmark here
  CHECK(per_slot_benchmark(rounds, unit) <= sp.value + 1e-12);
}

TEST_CASE("quadratic pair saddle point") {
  // cumulative x^2 vs (x-2)^2 on [0,2]: optimum x*=1 with value 1
  class PairOracle final : public LossOracle {
   public:
    PairOracle() : LossOracle(2, 1, ProblemBounds{4.0, 4.0, 2.0}) {}
    Vec values(std::size_t t, const Vec& x) const override {
      check_query(t, x);
      return {x[0] * x[0], (x[0] - 2.0) * (x[0] - 2.0)};
    }
    std::vector<Vec> gradients(std::size_t t, const Vec& x) const override {
      check_query(t, x);
      return {{2.0 * x[0]}, {2.0 * (x[0] - 2.0)}};
    }
    std::string descriptor() const override { return "pair"; }
  };
  const PairOracle oracle;
  const FeasibleSet set = FeasibleSet::interval(0.0, 2.0);
  const SaddlePoint sp = solve_offline_minmax({&oracle, 1}, set);
  CHECK(sp.x_star.coords[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sp.value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("max over the simplex") {
  const auto [w1, v1] = max_over_simplex({3.0, 5.0});
  CHECK(v1 == 5.0);
  CHECK(w1[1] == 1.0);

  const auto [w2, v2] = max_over_simplex({4.0, 4.0});
  CHECK(v2 == 4.0);
  CHECK(w2[0] == 1.0);  // ties break to the lowest index

  RandomSource rng(3);
  for (int rep = 0; rep < 1000; ++rep) {
    Vec s(4);
    for (auto& v : s) v = rng.next_uniform(-5.0, 5.0);
    const auto [w, v] = max_over_simplex(s);
    Vec theta(4);
    double sum = 0.0;
    for (auto& p : theta) {
      p = rng.next_double();
      sum += p;
    }
    for (auto& p : theta) p /= sum;
    CHECK(v >= dot(theta, s) - 1e-12);
    CHECK(v == dot(w.probabilities(), s));
  }

  CHECK_THROWS_AS(max_over_simplex({}), std::invalid_argument);
}

TEST_CASE("decomposition identity on live runs") {
  const FeasibleSet ball = FeasibleSet::ball(Vec(4, 0.0), 1.0);
  const auto oracle = make_random_linear(ball, 3, RandomSource(91));
  const std::size_t T = 200;
  const RunTrace trace = hedge_run(*oracle, ball, T);

  const RoundsView rounds{oracle.get(), T};
  const RegretReport report = decompose_regret(trace.actions, trace.thetas, rounds, ball);

  const double recomposed = report.r1 + report.r2 + report.r3;
  const double direct = report.cost_algorithm - report.cost_offline;
  const double scale = std::max({1.0, std::abs(report.cost_algorithm), std::abs(report.cost_offline)});
  CHECK(std::abs(recomposed - direct) <= 1e-9 * scale);
  CHECK(report.regret == doctest::Approx(direct).epsilon(1e-15));
  CHECK(report.r1 >= -1e-12);
  CHECK(report.r2 >= -1e-6);
  CHECK(report.running_max_loss.size() == T);
  CHECK(report.running_max_loss.back() == doctest::Approx(report.cost_algorithm));

  // stability diagnostics chain on the same run
  const double B = oracle->bounds().loss_bound;
  std::vector<Vec> thetas(trace.thetas.begin(), trace.thetas.begin() + T);
  const double dev = deviation_from_average_l1(thetas);
  const double consec = consecutive_variation_l1(trace.thetas);
  CHECK(report.r3 <= B * dev + 1e-9);
  CHECK(dev <= 2.0 * static_cast<double>(T) * consec + 1e-9);

  // the time-step bound sums into the worst-case estimate
  double eta_sum = 0.0;
  const StepSchedule eta_theta = StepSchedule::hedge_sqrt(3, B);
  for (std::size_t t = 1; t <= T; ++t) eta_sum += eta_theta.eta(t);
  CHECK(report.r3 <= 2.0 * B * B * static_cast<double>(T) * eta_sum);
}

TEST_CASE("stability diagnostics on an adversarial-input run") {
  const auto oracle = make_adversarial_pair();
  const FeasibleSet unit = FeasibleSet::interval(0.0, 1.0);
  const std::size_t T = 300;
  const RunTrace trace = hedge_run(*oracle, unit, T);
  const RegretReport report =
      decompose_regret(trace.actions, trace.thetas, {oracle.get(), T}, unit, SolverOptions{}, false);

  const double B = oracle->bounds().loss_bound;
  const StepSchedule eta_theta = StepSchedule::hedge_sqrt(2, B);
  double eta_sum = 0.0;
  for (std::size_t t = 1; t <= T; ++t) eta_sum += eta_theta.eta(t);
  CHECK(report.r3 <= 2.0 * B * B * static_cast<double>(T) * eta_sum);

  std::vector<Vec> thetas(trace.thetas.begin(), trace.thetas.begin() + T);
  const double dev = deviation_from_average_l1(thetas);
  CHECK(report.r3 <= B * dev + 1e-9);
  CHECK(dev <= 2.0 * static_cast<double>(T) * consecutive_variation_l1(trace.thetas) + 1e-9);
}

TEST_CASE("deviation-from-average telescopes through consecutive steps") {
  RandomSource rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.next_below(30);
    std::vector<Vec> seq(n, Vec(3));
    for (auto& v : seq) {
      for (auto& x : v) x = rng.next_uniform(-2.0, 2.0);
    }
    CHECK(deviation_from_average_l1(seq) <=
          2.0 * static_cast<double>(n) * consecutive_variation_l1(seq) + 1e-12);
  }
}

TEST_CASE("decomposition with one sequence has no weight term") {
  const IdentityOracle oracle;
  const FeasibleSet unit = FeasibleSet::interval(0.0, 1.0);
  const std::size_t T = 30;
  const RunTrace trace = hedge_run(oracle, unit, T);
  const RegretReport report = decompose_regret(trace.actions, trace.thetas, {&oracle, T}, unit);
  CHECK(report.r1 == 0.0);
}

TEST_CASE("stationary optimal trajectory decomposes to zero") {
  const auto oracle = make_adversarial_pair();
  const FeasibleSet unit = FeasibleSet::interval(0.0, 1.0);
  const std::size_t N = 20, T = 2 * N;

  // x_t = x* = 0 and theta_t = theta* = e_1 throughout
  std::vector<Action> actions(T, Action{{0.0}});
  std::vector<Vec> thetas(T + 1, Vec{1.0, 0.0});
  const RegretReport report = decompose_regret(actions, thetas, {oracle.get(), T}, unit);
  CHECK(report.cost_algorithm == doctest::Approx(1.2 * N).epsilon(1e-12));
  CHECK(report.r1 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.r2 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(std::abs(report.r3) <= 1e-9 * N);
  CHECK(report.r1 >= -1e-12);
  CHECK(report.r2 >= -1e-9);
}

TEST_CASE("decomposition validates trajectory lengths") {
  const IdentityOracle oracle;
  const FeasibleSet unit = FeasibleSet::interval(0.0, 1.0);
  std::vector<Action> actions(5, Action{{0.5}});
  std::vector<Vec> thetas(6, Vec{1.0});
  CHECK_THROWS_AS(decompose_regret(actions, thetas, {&oracle, 6}, unit), std::invalid_argument);
  CHECK_THROWS_AS(decompose_regret(actions, {}, {&oracle, 5}, unit), std::invalid_argument);
}

TEST_CASE("expected benchmark") {
  RandomSource rng(41);

  // experts: mean losses 0.5 x_k, equalized at the uniform point
  for (std::size_t K : {2u, 5u}) {
    const FeasibleSet simplex = FeasibleSet::simplex(K);
    const auto oracle = make_expert_losses(simplex, K, 0.2, 0.8, RandomSource(77));
    const auto [sp, se] = expected_benchmark(*oracle, simplex, 0, rng);
    CHECK(se == 0.0);
    CHECK(sp.value == doctest::Approx(0.5 / static_cast<double>(K)).epsilon(1e-5));
    for (std::size_t i = 0; i < K; ++i) {
      CHECK(sp.x_star.coords[i] == doctest::Approx(1.0 / static_cast<double>(K)).epsilon(1e-3));
    }
  }
  {
    // grid verification over the 2-simplex at 1e-4 resolution
    double best = 1e300;
    for (int i = 0; i <= 10000; ++i) {
      const double p = i * 1e-4;
      best = std::min(best, std::max(0.5 * p, 0.5 * (1.0 - p)));
    }
    CHECK(best == doctest::Approx(0.25).epsilon(1e-3));
  }

  // deterministic oracle: zero standard error and the period-average value
  const auto pair = make_adversarial_pair();
  const FeasibleSet unit = FeasibleSet::interval(0.0, 1.0);
  const auto [sp_pair, se_pair] = expected_benchmark(*pair, unit, 0, rng);
  CHECK(se_pair == 0.0);
  CHECK(sp_pair.value == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(sp_pair.x_star.coords[0] == doctest::Approx(0.0).epsilon(1e-9));

  // K=1 linear mean over a box: support point found by vertex enumeration
  const FeasibleSet box = FeasibleSet::box({-1.0, -1.0, -1.0}, {1.0, 2.0, 0.5});
  const auto linear = make_random_linear(box, 1, RandomSource(5));
  const auto [sp_lin, se_lin] = expected_benchmark(*linear, box, 0, rng);
  double best = 1e300;
  for (int mask = 0; mask < 8; ++mask) {
    const Vec v{mask & 1 ? 1.0 : -1.0, mask & 2 ? 2.0 : -1.0, mask & 4 ? 0.5 : -1.0};
    best = std::min(best, linear->mean_values(v)[0]);
  }
  CHECK(sp_lin.value == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("expected benchmark via Monte Carlo sampling") {
  // fair classification has no closed form; the sampled objective still
  // certifies against random feasible probes
  const FeasibleSet ball = FeasibleSet::ball(Vec(3, 0.0), 1.0);
  FairClassificationParams params;
  params.groups = 2;
  params.batch = 5;
  const auto oracle = make_fair_classification(ball, params, RandomSource(13));
  RandomSource rng(14);
  const auto [sp, se] = expected_benchmark(*oracle, ball, 400, rng);
  CHECK(se > 0.0);
  CHECK(sp.value > 0.0);
  CHECK(ball.contains(sp.x_star.coords, 1e-9));
}

TEST_CASE("offline solve certificate on random instances") {
  RandomSource rng(55);
  const FeasibleSet ball = FeasibleSet::ball(Vec(5, 0.0), 1.0);
  const auto oracle = make_random_linear(ball, 4, RandomSource(123));
  const std::size_t T = 100;
  const SaddlePoint sp = solve_offline_minmax({oracle.get(), T}, ball);
  const auto cumulative = oracle->cumulative(T);
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec x = ball.sample(rng);
    const Vec v = cumulative->values(x);
    double m = v[0];
    for (double vi : v) m = std::max(m, vi);
    CHECK(sp.value <= m + 1e-6);
  }
}
