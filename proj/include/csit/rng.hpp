#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace csit {

namespace detail {

// splitmix64 finalizer: bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based generator (splitmix64): the state is a counter advanced by a
// fixed odd constant and the output is a bijective hash of it, so independent
// streams can be derived cheaply from (seed, stream index) without any
// warm-up or jump-ahead machinery.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(detail::mix64(seed ^ 0x8e02fc1c3e8aull)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  // Uniform on (0, 1]: 53 random bits, never exactly zero so it is safe
  // under log().
  double uniform() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the second variate of the pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double r = std::sqrt(-std::log(uniform()));
    const double t = 2.0 * std::numbers::pi * uniform();
    return {r * std::cos(t), r * std::sin(t)};
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Deterministic substream derivation: the pair (seed, index) is hashed into
// the origin of an independent counter stream. Used by sweeps so that grid
// points can be evaluated in any order (or concurrently) with identical
// results.
inline Rng derive_stream(std::uint64_t base_seed, std::uint64_t index) {
  return Rng(detail::mix64(base_seed + 0x9e3779b97f4a7c15ULL) ^
             detail::mix64(index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

}  // namespace csit
