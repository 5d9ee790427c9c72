#pragma once

#include <cstddef>
#include <variant>

#include "minmax/linalg.hpp"
#include "minmax/random.hpp"

namespace minmax {

// A point in the decision set.
struct Action {
  Vec coords;

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
};

// Closed convex decision sets with exact Euclidean projections.
//
// Four kinds are supported: a scalar interval, an axis-aligned box, a
// Euclidean ball, and the probability simplex. Projections are closed form
// for the first three; the simplex uses the exact sort-and-threshold method.
class FeasibleSet {
 public:
  enum class Kind { interval, box, ball, simplex };

  static FeasibleSet interval(double lo, double hi);
  static FeasibleSet box(Vec lo, Vec hi);
  static FeasibleSet ball(Vec center, double radius);
  static FeasibleSet simplex(std::size_t k);  // k >= 2

  Kind kind() const { return kind_; }
  std::size_t dim() const;
  double diameter() const;

  Action project(const Vec& point) const;
  bool contains(const Vec& point, double tol = 1e-12) const;

  Vec center() const;                    // canonical interior point
  Vec sample(RandomSource& rng) const;   // uniform draw from the set
  double sup_norm1() const;              // sup of ||x||_1 over the set
  double sup_norm2() const;              // sup of ||x||_2 over the set

  // Bracket [lo, hi] for one-dimensional sets; throws otherwise.
  std::pair<double, double> scalar_bounds() const;

  // Coordinatewise bounds for interval and box kinds; throws otherwise.
  std::pair<Vec, Vec> rectangle_bounds() const;

 private:
  struct IntervalBody {
    double lo, hi;
  };
  struct BoxBody {
    Vec lo, hi;
  };
  struct BallBody {
    Vec center;
    double radius;
  };
  struct SimplexBody {
    std::size_t k;
  };

  FeasibleSet(Kind kind, std::variant<IntervalBody, BoxBody, BallBody, SimplexBody> body)
      : kind_(kind), body_(std::move(body)) {}

  Kind kind_;
  std::variant<IntervalBody, BoxBody, BallBody, SimplexBody> body_;
};

// Projection of y onto the probability simplex, by sorting and thresholding.
Vec project_onto_simplex(const Vec& y);

}  // namespace minmax
