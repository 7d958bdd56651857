#ifndef RCEPC_RNG_HPP
#define RCEPC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "rcepc/types.hpp"

namespace rcepc {

// All randomness in the library flows through this wrapper around
// std::mt19937_64. The Gaussian transform is a hand-rolled Box-Muller so the
// generated streams depend only on the (standard-specified) mt19937_64 output
// sequence, not on the implementation of std::normal_distribution.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform index in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }

  // Standard normal, Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  Complex complex_normal(double variance = 1.0) {
    const double s = std::sqrt(variance * 0.5);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}
}  // namespace detail

// Derives an independent stream seed from a master seed and up to three tags
// (splitmix64-style finalizer). Used so parallel trials get disjoint
// deterministic streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master + 0x9e3779b97f4a7c15ull;
  s = detail::mix64(s ^ a);
  s = detail::mix64(s + 0x9e3779b97f4a7c15ull + b);
  s = detail::mix64(s + 0x9e3779b97f4a7c15ull + c);
  return s;
}

}  // namespace rcepc

#endif
