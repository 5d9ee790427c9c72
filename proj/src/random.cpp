#include "minmax/random.hpp"

#include <cmath>
#include <stdexcept>

namespace minmax {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;
}

std::uint64_t RandomSource::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t RandomSource::combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = mix(seed + kGoldenGamma);
  h = mix(h ^ (a + kGoldenGamma));
  h = mix(h ^ (b + 0xD1B54A32D192ED03ull));
  return h;
}

std::uint64_t RandomSource::next_u64() {
  state_ += kGoldenGamma;
  return mix(state_);
}

double RandomSource::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

double RandomSource::next_gaussian() {
  // The spare value of the polar method is discarded so that every call
  // consumes a self-contained block of the stream.
  while (true) {
    const double u = 2.0 * next_double() - 1.0;
    const double v = 2.0 * next_double() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

std::uint64_t RandomSource::next_below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RandomSource::next_below: n must be positive");
  // Rejection sampling above the largest multiple of n keeps the draw unbiased.
  const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  while (true) {
    const std::uint64_t u = next_u64();
    if (u >= threshold) return u % n;
  }
}

RandomSource RandomSource::child(std::uint64_t stream_index) const {
  return RandomSource(combine(seed_, stream_index));
}

Vec sample_unit_sphere(RandomSource& rng, std::size_t d) {
  if (d == 0) throw std::invalid_argument("sample_unit_sphere: dimension must be positive");
  Vec u(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) u[i] = rng.next_gaussian();
    const double n = norm2(u);
    if (n > 1e-12) {
      for (double& v : u) v /= n;
      return u;
    }
  }
}

}  // namespace minmax
