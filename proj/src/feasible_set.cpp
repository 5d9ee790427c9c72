#include "minmax/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace minmax {

namespace {

void require_finite(const Vec& p, const char* what) {
  if (!all_finite(p)) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
}

void require_dim(const Vec& p, std::size_t d, const char* what) {
  if (p.size() != d) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

FeasibleSet FeasibleSet::interval(double lo, double hi) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || lo > hi) {
    throw std::invalid_argument("FeasibleSet::interval: need finite lo <= hi");
  }
  return FeasibleSet(Kind::interval, IntervalBody{lo, hi});
}

FeasibleSet FeasibleSet::box(Vec lo, Vec hi) {
  if (lo.empty() || lo.size() != hi.size()) {
    throw std::invalid_argument("FeasibleSet::box: bounds must be nonempty and equal length");
  }
  require_finite(lo, "FeasibleSet::box");
  require_finite(hi, "FeasibleSet::box");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw std::invalid_argument("FeasibleSet::box: need lo <= hi coordinatewise");
  }
  return FeasibleSet(Kind::box, BoxBody{std::move(lo), std::move(hi)});
}

FeasibleSet FeasibleSet::ball(Vec center, double radius) {
  if (center.empty()) throw std::invalid_argument("FeasibleSet::ball: empty center");
  require_finite(center, "FeasibleSet::ball");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("FeasibleSet::ball: radius must be positive");
  }
  return FeasibleSet(Kind::ball, BallBody{std::move(center), radius});
}

FeasibleSet FeasibleSet::simplex(std::size_t k) {
  if (k < 2) throw std::invalid_argument("FeasibleSet::simplex: need k >= 2");
  return FeasibleSet(Kind::simplex, SimplexBody{k});
}

std::size_t FeasibleSet::dim() const {
  switch (kind_) {
    case Kind::interval:
      return 1;
    case Kind::box:
      return std::get<BoxBody>(body_).lo.size();
    case Kind::ball:
      return std::get<BallBody>(body_).center.size();
    case Kind::simplex:
      return std::get<SimplexBody>(body_).k;
  }
  return 0;
}

double FeasibleSet::diameter() const {
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return b.hi - b.lo;
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      double s = 0.0;
      for (std::size_t i = 0; i < b.lo.size(); ++i) {
        const double w = b.hi[i] - b.lo[i];
        s += w * w;
      }
      return std::sqrt(s);
    }
    case Kind::ball:
      return 2.0 * std::get<BallBody>(body_).radius;
    case Kind::simplex:
      return std::sqrt(2.0);  // distance between any two vertices
  }
  return 0.0;
}

Vec project_onto_simplex(const Vec& y) {
  const std::size_t k = y.size();
  Vec u(y);
  std::sort(u.begin(), u.end(), std::greater<>());
  double run = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    run += u[j];
    const double candidate = (run - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  Vec x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = std::max(y[i] - tau, 0.0);
  return x;
}

Action FeasibleSet::project(const Vec& point) const {
  require_dim(point, dim(), "FeasibleSet::project");
  require_finite(point, "FeasibleSet::project");
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return Action{{std::clamp(point[0], b.lo, b.hi)}};
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      Vec x(point.size());
      for (std::size_t i = 0; i < point.size(); ++i) x[i] = std::clamp(point[i], b.lo[i], b.hi[i]);
      return Action{std::move(x)};
    }
    case Kind::ball: {
      const auto& b = std::get<BallBody>(body_);
      Vec delta(point.size());
      for (std::size_t i = 0; i < point.size(); ++i) delta[i] = point[i] - b.center[i];
      const double dist = norm2(delta);
      if (dist <= b.radius) return Action{point};
      const double scale = b.radius / dist;
      Vec x(point.size());
      for (std::size_t i = 0; i < point.size(); ++i) x[i] = b.center[i] + scale * delta[i];
      return Action{std::move(x)};
    }
    case Kind::simplex:
      return Action{project_onto_simplex(point)};
  }
  throw std::logic_error("FeasibleSet::project: unknown kind");
}

bool FeasibleSet::contains(const Vec& point, double tol) const {
  if (point.size() != dim() || !all_finite(point)) return false;
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return point[0] >= b.lo - tol && point[0] <= b.hi + tol;
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      for (std::size_t i = 0; i < point.size(); ++i) {
        if (point[i] < b.lo[i] - tol || point[i] > b.hi[i] + tol) return false;
      }
      return true;
    }
    case Kind::ball: {
      const auto& b = std::get<BallBody>(body_);
      Vec delta(point.size());
      for (std::size_t i = 0; i < point.size(); ++i) delta[i] = point[i] - b.center[i];
      return norm2(delta) <= b.radius + tol;
    }
    case Kind::simplex: {
      double sum = 0.0;
      for (double v : point) {
        if (v < -tol) return false;
        sum += v;
      }
      return std::abs(sum - 1.0) <= tol * static_cast<double>(point.size());
    }
  }
  return false;
}

Vec FeasibleSet::center() const {
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return {0.5 * (b.lo + b.hi)};
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      Vec x(b.lo.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.5 * (b.lo[i] + b.hi[i]);
      return x;
    }
    case Kind::ball:
      return std::get<BallBody>(body_).center;
    case Kind::simplex: {
      const std::size_t k = std::get<SimplexBody>(body_).k;
      return Vec(k, 1.0 / static_cast<double>(k));
    }
  }
  return {};
}

Vec FeasibleSet::sample(RandomSource& rng) const {
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return {rng.next_uniform(b.lo, b.hi)};
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      Vec x(b.lo.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.next_uniform(b.lo[i], b.hi[i]);
      return x;
    }
    case Kind::ball: {
      const auto& b = std::get<BallBody>(body_);
      const std::size_t d = b.center.size();
      Vec dir = sample_unit_sphere(rng, d);
      const double r = b.radius * std::pow(rng.next_double(), 1.0 / static_cast<double>(d));
      Vec x(d);
      for (std::size_t i = 0; i < d; ++i) x[i] = b.center[i] + r * dir[i];
      return x;
    }
    case Kind::simplex: {
      // Normalized exponentials give the uniform (flat Dirichlet) law.
      const std::size_t k = std::get<SimplexBody>(body_).k;
      Vec x(k);
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        x[i] = -std::log(1.0 - rng.next_double());
        sum += x[i];
      }
      for (double& v : x) v /= sum;
      return x;
    }
  }
  return {};
}

double FeasibleSet::sup_norm1() const {
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return std::max(std::abs(b.lo), std::abs(b.hi));
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      double s = 0.0;
      for (std::size_t i = 0; i < b.lo.size(); ++i) s += std::max(std::abs(b.lo[i]), std::abs(b.hi[i]));
      return s;
    }
    case Kind::ball: {
      const auto& b = std::get<BallBody>(body_);
      return norm1(b.center) + b.radius * std::sqrt(static_cast<double>(b.center.size()));
    }
    case Kind::simplex:
      return 1.0;
  }
  return 0.0;
}

double FeasibleSet::sup_norm2() const {
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return std::max(std::abs(b.lo), std::abs(b.hi));
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      double s = 0.0;
      for (std::size_t i = 0; i < b.lo.size(); ++i) {
        const double m = std::max(std::abs(b.lo[i]), std::abs(b.hi[i]));
        s += m * m;
      }
      return std::sqrt(s);
    }
    case Kind::ball: {
      const auto& b = std::get<BallBody>(body_);
      return norm2(b.center) + b.radius;
    }
    case Kind::simplex:
      return 1.0;  // attained at the vertices
  }
  return 0.0;
}

std::pair<Vec, Vec> FeasibleSet::rectangle_bounds() const {
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return {Vec{b.lo}, Vec{b.hi}};
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      return {b.lo, b.hi};
    }
    default:
      throw std::invalid_argument("FeasibleSet::rectangle_bounds: set is not a box");
  }
}

std::pair<double, double> FeasibleSet::scalar_bounds() const {
  if (dim() != 1) throw std::invalid_argument("FeasibleSet::scalar_bounds: set is not one-dimensional");
  switch (kind_) {
    case Kind::interval: {
      const auto& b = std::get<IntervalBody>(body_);
      return {b.lo, b.hi};
    }
    case Kind::box: {
      const auto& b = std::get<BoxBody>(body_);
      return {b.lo[0], b.hi[0]};
    }
    case Kind::ball: {
      const auto& b = std::get<BallBody>(body_);
      return {b.center[0] - b.radius, b.center[0] + b.radius};
    }
    default:
      throw std::invalid_argument("FeasibleSet::scalar_bounds: set is not one-dimensional");
  }
}

}  // namespace minmax
