#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "spatialfw/random.hpp"
#include "spatialfw/spatial_domain.hpp"

using namespace spatialfw;

TEST_CASE("region rejects non-positive or non-finite sides") {
  CHECK_THROWS_AS(TorusRegion(0.0), std::invalid_argument);
  CHECK_THROWS_AS(TorusRegion(-5.0), std::invalid_argument);
  CHECK_THROWS_AS(TorusRegion(std::numeric_limits<double>::infinity()), std::invalid_argument);
  CHECK_THROWS_AS(TorusRegion(std::nan("")), std::invalid_argument);
}

TEST_CASE("normalize maps into [0, L)") {
  const TorusRegion r(4000.0);
  for (double v : {-1e-18, -4000.0, -1.0, 4000.0, 12345.6, 3999.999}) {
    const Point p = r.normalize({v, v});
    CHECK(p.x >= 0.0);
    CHECK(p.x < 4000.0);
  }
  CHECK(r.normalize({-100.0, 4100.0}) == Point{3900.0, 100.0});
}

TEST_CASE("torus distance examples") {
  const TorusRegion r(4000.0);
  CHECK(torus_distance({12.5, 40.0}, {12.5, 40.0}, r) == 0.0);
  CHECK(torus_distance({0, 0}, {3900, 0}, r) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(torus_distance({0, 0}, {2000, 2000}, r) ==
        doctest::Approx(4000.0 * std::sqrt(2.0) / 2.0));
}

TEST_CASE("minimal image displacement lies in (-L/2, L/2]") {
  const TorusRegion r(100.0);
  CHECK(r.displacement({10, 10}, {95, 10}).x == doctest::Approx(-15.0));
  CHECK(r.displacement({95, 10}, {10, 10}).x == doctest::Approx(15.0));
  CHECK(r.displacement({0, 0}, {50, 0}).x == doctest::Approx(50.0));
}

TEST_CASE("torus distance agrees with the 3x3 tiling oracle and is a metric") {
  std::mt19937_64 gen(7);
  const double L = 1000.0;
  const TorusRegion r(L);
  const auto pts = oracle::random_points(gen, 30000, L);
  for (std::size_t k = 0; k + 2 < pts.size(); k += 3) {
    const Point p = pts[k], q = pts[k + 1], s = pts[k + 2];
    const double d = r.distance(p, q);
    CHECK(d == doctest::Approx(oracle::tiled_distance(p, q, L)).epsilon(1e-12));
    CHECK(d == r.distance(q, p));
    CHECK(d <= L * std::sqrt(2.0) / 2.0 + 1e-9);
    CHECK(r.distance(p, s) <= d + r.distance(q, s) + 1e-9);
  }
}

TEST_CASE("sample_ppp: zero intensity and invalid intensities") {
  const TorusRegion r(4000.0);
  CHECK(sample_ppp(r, 0.0, 99).count() == 0);
  CHECK_THROWS_AS(sample_ppp(r, -1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_ppp(r, std::numeric_limits<double>::infinity(), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_ppp(r, std::nan(""), 1), std::invalid_argument);
}

TEST_CASE("sample_ppp is reproducible per seed and stays inside the region") {
  const TorusRegion r(4000.0);
  const auto a = sample_ppp(r, 80.0, 1234);
  const auto b = sample_ppp(r, 80.0, 1234);
  const auto c = sample_ppp(r, 80.0, 1235);
  REQUIRE(a.count() == b.count());
  for (std::size_t i = 0; i < a.count(); ++i) {
    CHECK(a[i] == b[i]);
    CHECK(a[i].x >= 0.0);
    CHECK(a[i].x < 4000.0);
    CHECK(a[i].y >= 0.0);
    CHECK(a[i].y < 4000.0);
  }
  CHECK_FALSE((a.count() == c.count() && a[0] == c[0]));
}

TEST_CASE("sample_ppp count is Poisson(1280) at the reference intensity") {
  // Poisson: mean == variance == 1280.
  const TorusRegion r(4000.0);
  const int seeds = 10000;
  double sum = 0, sum_sq = 0;
  for (int s = 0; s < seeds; ++s) {
    const double n = static_cast<double>(sample_ppp(r, 80.0, derive_seed(42, s)).count());
    sum += n;
    sum_sq += n * n;
  }
  const double mean = sum / seeds;
  const double var = (sum_sq - seeds * mean * mean) / (seeds - 1);
  const double se = std::sqrt(1280.0 / seeds);
  CHECK(std::abs(mean - 1280.0) < 3 * se);
  CHECK(std::abs(var - 1280.0) < 0.05 * 1280.0);
}

TEST_CASE("poisson variates: small means by inversion") {
  Engine rng(5);
  const int n = 200000;
  for (double mean : {0.3, 4.0, 15.5, 37.2}) {
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(poisson(rng, mean));
      s += k;
      s2 += k * k;
    }
    const double m = s / n;
    const double v = s2 / n - m * m;
    CHECK(std::abs(m - mean) < 4 * std::sqrt(mean / n));
    CHECK(v == doctest::Approx(mean).epsilon(0.03));
  }
  CHECK(poisson(rng, 0.0) == 0);
}

TEST_CASE("derive_seed separates child streams") {
  CHECK(derive_seed(1, 0, 0, 0) != derive_seed(1, 0, 0, 1));
  CHECK(derive_seed(1, 0, 1, 0) != derive_seed(1, 1, 0, 0));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  // Pinned so a change to the mixing function is caught.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
}
