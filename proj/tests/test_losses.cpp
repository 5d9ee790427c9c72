#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "minmax/losses.hpp"

using namespace minmax;

namespace {

Vec random_point(const FeasibleSet& set, RandomSource& rng) { return set.sample(rng); }

// Central finite differences against the analytic gradients.
void check_gradients(const LossOracle& oracle, const FeasibleSet& set, RandomSource& rng,
                     int points, double h, double rel_tol) {
  for (int rep = 0; rep < points; ++rep) {
    const std::size_t t = 1 + rng.next_below(50);
    Vec x = random_point(set, rng);
    // pull toward the interior so the probe stays meaningful
    const Vec c = set.center();
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = c[j] + 0.9 * (x[j] - c[j]);

    const auto grads = oracle.gradients(t, x);
    for (std::size_t k = 0; k < oracle.num_sequences(); ++k) {
      Vec fd(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        fd[j] = (oracle.values(t, xp)[k] - oracle.values(t, xm)[k]) / (2.0 * h);
      }
      Vec diff(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) diff[j] = fd[j] - grads[k][j];
      CHECK(norm2(diff) <= rel_tol * std::max(1.0, norm2(grads[k])));
    }
  }
}

void check_convexity(const LossOracle& oracle, const FeasibleSet& set, RandomSource& rng, int pairs) {
  for (int rep = 0; rep < pairs; ++rep) {
    const std::size_t t = 1 + rng.next_below(100);
    const Vec p = random_point(set, rng);
    const Vec q = random_point(set, rng);
    Vec mid(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) mid[j] = 0.5 * (p[j] + q[j]);
    const Vec fm = oracle.values(t, mid);
    const Vec fp = oracle.values(t, p);
    const Vec fq = oracle.values(t, q);
    for (std::size_t k = 0; k < oracle.num_sequences(); ++k) {
      CHECK(fm[k] <= 0.5 * (fp[k] + fq[k]) + 1e-9);
    }
  }
}

void check_bound_honesty(const LossOracle& oracle, const FeasibleSet& set, RandomSource& rng,
                         int queries) {
  const double B = oracle.bounds().loss_bound;
  const double G = oracle.bounds().grad_bound;
  for (int rep = 0; rep < queries; ++rep) {
    const std::size_t t = 1 + rng.next_below(200);
    const Vec x = random_point(set, rng);
    const Vec v = oracle.values(t, x);
    for (double vi : v) REQUIRE(std::abs(vi) <= B);
    if (rep % 10 == 0) {
      for (const Vec& g : oracle.gradients(t, x)) REQUIRE(norm2(g) <= G);
    }
  }
}

void check_determinism(const LossOracle& a, const LossOracle& b, const FeasibleSet& set,
                       RandomSource& rng) {
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t t = 1 + rng.next_below(1000);
    const Vec x = random_point(set, rng);
    const Vec va = a.values(t, x);
    const Vec vb = b.values(t, x);
    for (std::size_t k = 0; k < va.size(); ++k) REQUIRE(va[k] == vb[k]);
  }
}

}  // namespace

TEST_CASE("random linear losses") {
  const FeasibleSet box = FeasibleSet::box(Vec(10, 0.0), Vec(10, 1.0));
  const auto oracle = make_random_linear(box, 3, RandomSource(42));
  RandomSource rng(1);

  CHECK(oracle->bounds().loss_bound == doctest::Approx(10.0));       // sup ||x||_1 over the box
  CHECK(oracle->bounds().grad_bound == doctest::Approx(std::sqrt(10.0)));

  // linear through the origin, gradient equal to the coefficient vector
  const Vec zero(10, 0.0);
  for (double v : oracle->values(7, zero)) CHECK(v == 0.0);
  const Vec x = box.sample(rng);
  const auto grads = oracle->gradients(7, x);
  const Vec vals = oracle->values(7, x);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(vals[k] == doctest::Approx(dot(grads[k], x)).epsilon(1e-12));
    for (double c : grads[k]) {
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
  }

  // Monte Carlo mean at the all-ones point: E <a, 1> = d/2 = 5
  Vec mean(3, 0.0);
  const Vec ones(10, 1.0);
  const std::size_t n = 100000;
  for (std::size_t t = 1; t <= n; ++t) {
    const Vec v = oracle->values(t, ones);
    for (std::size_t k = 0; k < 3; ++k) mean[k] += v[k];
  }
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(mean[k] / n - 5.0) <= 0.03);
  CHECK(oracle->mean_values(ones)[0] == doctest::Approx(5.0));

  check_convexity(*oracle, box, rng, 1000);
  check_gradients(*oracle, box, rng, 5, 1e-6, 1e-5);
  check_bound_honesty(*oracle, box, rng, 10000);
  const auto twin = make_random_linear(box, 3, RandomSource(42));
  check_determinism(*oracle, *twin, box, rng);

  // fast cumulative paths agree with the generic replay
  const std::size_t T = 50;
  const auto fast = oracle->cumulative(T);
  const RoundSlice slow(*oracle, 1, T);
  std::vector<Vec> weights(T);
  RandomSource wrng(9);
  for (auto& w : weights) {
    w.assign(3, 0.0);
    for (auto& wi : w) wi = wrng.next_double();
  }
  const auto fast_weighted = oracle->weighted_cumulative(weights);
  for (int rep = 0; rep < 10; ++rep) {
    const Vec p = box.sample(rng);
    const Vec a = fast->values(p);
    const Vec b = slow.values(p);
    for (std::size_t k = 0; k < 3; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-12));
    double slow_weighted = 0.0;
    for (std::size_t t = 1; t <= T; ++t) slow_weighted += dot(weights[t - 1], oracle->values(t, p));
    CHECK(fast_weighted->value(p) == doctest::Approx(slow_weighted).epsilon(1e-12));
  }
}

TEST_CASE("random quadratic losses") {
  const FeasibleSet interval = FeasibleSet::interval(-1.0, 1.0);
  const auto oracle = make_random_quadratic(interval, 2, RandomSource(7));
  RandomSource rng(2);

  CHECK(oracle->bounds().loss_bound == doctest::Approx(100.0));
  CHECK(oracle->bounds().grad_bound == doctest::Approx(20.0));

  // recover the center from the gradient: a = x - g/2, check value identity
  int count[19] = {0};
  const std::size_t n = 100000;
  for (std::size_t t = 1; t <= n / 2; ++t) {
    for (std::size_t k = 0; k < 2; ++k) {
      const double g = oracle->gradients(t, {0.0})[k][0];
      const double a = -g / 2.0;
      const double rounded = std::round(a);
      REQUIRE(std::abs(a - rounded) <= 1e-12);
      REQUIRE(rounded >= -9.0);
      REQUIRE(rounded <= 9.0);
      count[static_cast<int>(rounded) + 9] += 1;
      CHECK(oracle->values(t, {0.0})[k] == doctest::Approx(a * a).epsilon(1e-12));
      CHECK(oracle->values(t, {rounded})[k] == 0.0);  // minimum of the parabola
    }
  }
  for (int c : count) {
    CHECK(std::abs(static_cast<double>(c) / n - 1.0 / 19.0) <= 0.005);
  }

  // a = -9 at x = 1 evaluates to 100 with slope 20
  bool found = false;
  for (std::size_t t = 1; t <= 200 && !found; ++t) {
    if (oracle->gradients(t, {0.0})[0][0] == 18.0) {  // 2(0 - (-9))
      CHECK(oracle->values(t, {1.0})[0] == doctest::Approx(100.0));
      CHECK(oracle->gradients(t, {1.0})[0][0] == doctest::Approx(20.0));
      found = true;
    }
  }
  CHECK(found);

  CHECK(oracle->mean_values({0.5})[0] == doctest::Approx(0.25 + 30.0));
  check_convexity(*oracle, interval, rng, 1000);
  check_gradients(*oracle, interval, rng, 10, 1e-6, 1e-5);
  check_bound_honesty(*oracle, interval, rng, 10000);

  CHECK_THROWS_AS(make_random_quadratic(FeasibleSet::simplex(3), 2, RandomSource(7)),
                  std::invalid_argument);
}

TEST_CASE("expert losses") {
  const std::size_t K = 4;
  const FeasibleSet simplex = FeasibleSet::simplex(K);
  const auto oracle = make_expert_losses(simplex, K, 0.2, 0.8, RandomSource(11));
  RandomSource rng(3);

  // coordinate selection at a vertex
  Vec e1(K, 0.0);
  e1[1] = 1.0;
  const Vec at_vertex = oracle->values(5, e1);
  for (std::size_t k = 0; k < K; ++k) {
    if (k != 1) CHECK(at_vertex[k] == 0.0);
  }

  // uniform point scales the raw losses by 1/K
  const Vec uniform(K, 1.0 / K);
  const Vec raw = *oracle->per_expert_losses(5);
  const Vec at_uniform = oracle->values(5, uniform);
  for (std::size_t k = 0; k < K; ++k) {
    CHECK(at_uniform[k] == doctest::Approx(raw[k] / K).epsilon(1e-12));
    CHECK(raw[k] >= 0.2);
    CHECK(raw[k] <= 0.8);
  }

  // closed-form mean vs Monte Carlo within 3 standard errors
  RandomSource mc(19);
  const MeanLossEstimate est = estimate_mean_losses(*oracle, e1, 0, mc);
  CHECK(est.closed_form);
  CHECK(est.mean[1] == doctest::Approx(0.5));

  // force the Monte Carlo path through a raw average
  const std::size_t n = 20000;
  double mc_mean = 0.0, mc_m2 = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double v = oracle->values(i, e1)[1];
    const double d = v - mc_mean;
    mc_mean += d / i;
    mc_m2 += d * (v - mc_mean);
  }
  const double se = std::sqrt(mc_m2 / (n - 1) / n);
  CHECK(std::abs(mc_mean - 0.5) <= 3.0 * se);

  check_convexity(*oracle, simplex, rng, 500);
  check_gradients(*oracle, simplex, rng, 5, 1e-6, 1e-5);
  check_bound_honesty(*oracle, simplex, rng, 5000);

  CHECK_THROWS_AS(make_expert_losses(FeasibleSet::box({0.0}, {1.0}), 1, 0.2, 0.8, RandomSource(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_expert_losses(simplex, K, 0.8, 0.2, RandomSource(1)), std::invalid_argument);
}

TEST_CASE("fair classification losses") {
  const FeasibleSet ball = FeasibleSet::ball(Vec(5, 0.0), 2.5);
  FairClassificationParams params;
  params.groups = 3;
  params.batch = 10;
  params.regularizer = 1e-3;
  const auto oracle = make_fair_classification(ball, params, RandomSource(23));
  RandomSource rng(4);

  // log 2 at the origin regardless of the batch
  const Vec zero(5, 0.0);
  for (double v : oracle->values(3, zero)) CHECK(v == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  check_gradients(*oracle, ball, rng, 20, 1e-6, 1e-5);
  check_convexity(*oracle, ball, rng, 300);
  check_bound_honesty(*oracle, ball, rng, 3000);
  const auto twin = make_fair_classification(ball, params, RandomSource(23));
  check_determinism(*oracle, *twin, ball, rng);
  CHECK(!oracle->has_mean_closed_form());
}

TEST_CASE("switching fair classification") {
  CHECK(switching_hard_group(1, 100, 3) == 0);
  CHECK(switching_hard_group(100, 100, 3) == 0);
  CHECK(switching_hard_group(101, 100, 3) == 1);
  CHECK(switching_hard_group(200, 100, 3) == 1);
  CHECK(switching_hard_group(201, 100, 3) == 2);
  CHECK(switching_hard_group(301, 100, 3) == 0);  // round robin wraps

  const FeasibleSet ball = FeasibleSet::ball(Vec(4, 0.0), 2.0);
  SwitchingParams params;
  params.base.groups = 3;
  params.base.batch = 8;
  params.base.regularizer = 1e-3;
  params.switch_interval = 50;
  params.shift_magnitude = 5.0;

  // zero shift is the plain generator, stream for stream
  SwitchingParams degenerate = params;
  degenerate.shift_magnitude = 0.0;
  const auto shifted0 = make_switching_fair(ball, degenerate, RandomSource(5));
  const auto plain = make_fair_classification(ball, degenerate.base, RandomSource(5));
  RandomSource rng(6);
  check_determinism(*shifted0, *plain, ball, rng);

  // the shifted group's loss exceeds the unshifted mean at some fixed probe
  const auto oracle = make_switching_fair(ball, params, RandomSource(5));
  const Vec probe_plus(4, 0.2), probe_minus(4, -0.2);
  double shifted_loss_p = 0.0, unshifted_loss_p = 0.0;
  double shifted_loss_m = 0.0, unshifted_loss_m = 0.0;
  const std::size_t rounds = 1000;
  for (std::size_t t = 1; t <= rounds; ++t) {
    const std::size_t hard = switching_hard_group(t, params.switch_interval, 3);
    const Vec vp = oracle->values(t, probe_plus);
    const Vec vm = oracle->values(t, probe_minus);
    for (std::size_t k = 0; k < 3; ++k) {
      if (k == hard) {
        shifted_loss_p += vp[k];
        shifted_loss_m += vm[k];
      } else {
        unshifted_loss_p += vp[k] / 2.0;
        unshifted_loss_m += vm[k] / 2.0;
      }
    }
  }
  const double gap_p = shifted_loss_p - unshifted_loss_p;
  const double gap_m = shifted_loss_m - unshifted_loss_m;
  CHECK(std::max(gap_p, gap_m) > 0.0);

  check_gradients(*oracle, ball, rng, 10, 1e-6, 1e-5);
  check_bound_honesty(*oracle, ball, rng, 2000);
}

TEST_CASE("adversarial alternating pair") {
  const auto oracle = make_adversarial_pair();
  const FeasibleSet unit = FeasibleSet::interval(0.0, 1.0);

  // odd rounds: (1.2 - 0.2x, x); even rounds: (x, 0.8 + 0.2x)
  CHECK(oracle->values(1, {0.5})[0] == doctest::Approx(1.1));
  CHECK(oracle->values(1, {0.5})[1] == doctest::Approx(0.5));
  CHECK(oracle->values(2, {0.5})[0] == doctest::Approx(0.5));
  CHECK(oracle->values(2, {0.5})[1] == doctest::Approx(0.9));

  // pair sums at a fixed x
  for (double x : {0.0, 0.3, 1.0}) {
    const double f_sum = oracle->values(1, {x})[0] + oracle->values(2, {x})[0];
    const double g_sum = oracle->values(1, {x})[1] + oracle->values(2, {x})[1];
    CHECK(f_sum == doctest::Approx(1.2 + 0.8 * x).epsilon(1e-12));
    CHECK(g_sum == doctest::Approx(0.8 + 1.2 * x).epsilon(1e-12));
  }

  RandomSource rng(10);
  check_convexity(*oracle, unit, rng, 200);
  check_gradients(*oracle, unit, rng, 5, 1e-6, 1e-6);
  check_bound_honesty(*oracle, unit, rng, 1000);

  // deterministic oracle: closed-form mean with zero standard error
  RandomSource mc(3);
  const MeanLossEstimate est = estimate_mean_losses(*oracle, {0.25}, 100, mc);
  CHECK(est.closed_form);
  CHECK(est.std_error[0] == 0.0);
  CHECK(est.mean[0] == doctest::Approx(0.6 + 0.4 * 0.25));
}

TEST_CASE("mean estimates, closed form vs Monte Carlo") {
  RandomSource rng(12);
  const FeasibleSet ball = FeasibleSet::ball(Vec(3, 0.0), 1.0);
  const auto linear = make_random_linear(ball, 2, RandomSource(100));
  const Vec x = ball.sample(rng);
  const Vec closed = linear->mean_values(x);

  const std::size_t n = 40000;
  Vec mean(2, 0.0), m2(2, 0.0);
  RandomSource pick(55);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t t = 1 + pick.next_below(1ull << 32);
    const Vec v = linear->values(t, x);
    for (std::size_t k = 0; k < 2; ++k) {
      const double d = v[k] - mean[k];
      mean[k] += d / i;
      m2[k] += d * (v[k] - mean[k]);
    }
  }
  for (std::size_t k = 0; k < 2; ++k) {
    const double se = std::sqrt(m2[k] / (n - 1) / n);
    CHECK(std::abs(mean[k] - closed[k]) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("oracle query validation") {
  const FeasibleSet ball = FeasibleSet::ball(Vec(3, 0.0), 1.0);
  const auto oracle = make_random_linear(ball, 2, RandomSource(1));
  CHECK_THROWS_AS(oracle->values(0, Vec(3, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(oracle->values(1, Vec(2, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(oracle->values(1, Vec{0.0, std::nan(""), 0.0}), std::invalid_argument);
}
