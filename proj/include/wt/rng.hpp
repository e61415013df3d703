#pragma once

#include <cstdint>
#include <complex>

#include "wt/types.hpp"

namespace wt {

// Counter-based random number generation.  Every draw is a pure function of
// (seed, realization, mode, stream, counter), so ensembles are reproducible
// and can be generated in parallel without shared state.
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t realization,
                         std::uint64_t mode, std::uint64_t stream) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (realization * 0xd1342543de82ef95ull));
  h = mix64(h ^ (mode * 0xda942042e4dd58b5ull));
  h = mix64(h ^ (stream * 0x2545f4914f6cdd1dull));
  return h;
}

// Uniform in [0, 1), 53-bit resolution.
inline double uniform(std::uint64_t seed, std::uint64_t realization,
                      std::uint64_t mode, std::uint64_t stream) {
  return static_cast<double>(key(seed, realization, mode, stream) >> 11) *
         0x1.0p-53;
}

// Uniform in (0, 1], safe for logarithms.
inline double uniform_open(std::uint64_t seed, std::uint64_t realization,
                           std::uint64_t mode, std::uint64_t stream) {
  return 1.0 - uniform(seed, realization, mode, stream);
}

// Point on the unit circle.
inline Complex unit_phase(std::uint64_t seed, std::uint64_t realization,
                          std::uint64_t mode, std::uint64_t stream) {
  const double theta = 2.0 * pi * uniform(seed, realization, mode, stream);
  return Complex(std::cos(theta), std::sin(theta));
}

} // namespace rng
} // namespace wt
