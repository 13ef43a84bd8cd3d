#include "spatialfw/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace spatialfw {

std::uint64_t uniform_index(Engine& rng, std::uint64_t n) {
  // Lemire-style rejection keeps the result unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

double exponential(Engine& rng, double rate) {
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-uniform01(rng)) / rate;
}

namespace {

constexpr double kPoissonChunk = 16.0;

std::uint64_t poisson_inversion(Engine& rng, double mean) {
  const double u = uniform01(rng);
  double p = std::exp(-mean);
  double cdf = p;
  std::uint64_t k = 0;
  while (u >= cdf) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p == 0.0 && cdf <= u) break;  // tail exhausted in double precision
  }
  return k;
}

}  // namespace

std::uint64_t poisson(Engine& rng, double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson mean must be finite and >= 0");
  }
  std::uint64_t total = 0;
  while (mean > kPoissonChunk) {
    total += poisson_inversion(rng, kPoissonChunk);
    mean -= kPoissonChunk;
  }
  if (mean > 0.0) total += poisson_inversion(rng, mean);
  return total;
}

}  // namespace spatialfw
