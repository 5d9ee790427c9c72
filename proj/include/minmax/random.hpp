#pragma once

#include <cstdint>

#include "minmax/linalg.hpp"

namespace minmax {

// Seeded pseudorandom source built on the splitmix64 generator.
//
// All state transitions are exact 64-bit integer arithmetic, so a given seed
// reproduces the same draw sequence on every platform and run. The constants
// are the published splitmix64 ones: the golden-ratio increment
// 0x9E3779B97F4A7C15 and the finalizer multipliers 0xBF58476D1CE4E5B9 and
// 0x94D049BB133111EB.
//
// Substreams derived via child(i) (or combine) hash the original seed with
// the stream index, so they are decorrelated from each other and from the
// parent's position in its own stream.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double next_double();  // uniform on [0, 1), 53 bits
  double next_uniform(double lo, double hi);
  double next_gaussian();  // standard normal, Marsaglia polar method
  std::uint64_t next_below(std::uint64_t n);  // uniform on {0, ..., n-1}, unbiased

  // Independent substream keyed by (seed, stream_index).
  RandomSource child(std::uint64_t stream_index) const;

  static std::uint64_t mix(std::uint64_t z);  // splitmix64 finalizer
  static std::uint64_t combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// Uniform draw from the unit sphere in R^d (normalized gaussian vector).
// The returned vector has Euclidean norm 1 up to roundoff. Throws for d = 0.
Vec sample_unit_sphere(RandomSource& rng, std::size_t d);

}  // namespace minmax
