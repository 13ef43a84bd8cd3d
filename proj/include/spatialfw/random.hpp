// Portable random variates.
//
// The std:: distributions are implementation-defined, so everything that
// feeds a reproducibility contract draws through these helpers instead.
// std::mt19937_64 itself is fully specified by the standard.

#pragma once

#include <cstdint>
#include <random>

namespace spatialfw {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable seed for a child stream identified by a tuple of indices.
template <typename... Ts>
constexpr std::uint64_t derive_seed(std::uint64_t master, Ts... keys) {
  std::uint64_t h = mix64(master);
  ((h = mix64(h ^ static_cast<std::uint64_t>(keys))), ...);
  return h;
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer on [0, n). n must be > 0.
std::uint64_t uniform_index(Engine& rng, std::uint64_t n);

/// Exponential with the given rate; +inf when rate == 0.
double exponential(Engine& rng, double rate);

/// Exact Poisson variate. Inversion for means up to a fixed chunk size;
/// larger means are the sum of independent chunked inversions, which is
/// exact by the additivity of the Poisson law.
std::uint64_t poisson(Engine& rng, double mean);

}  // namespace spatialfw
