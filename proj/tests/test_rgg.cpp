#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"
#include "spatialfw/rgg.hpp"

using namespace spatialfw;

namespace {

DeviceSet devices_at(double L, std::vector<Point> pts) {
  return DeviceSet(TorusRegion(L), std::move(pts));
}

}  // namespace

TEST_CASE("build_rgg threshold and wrap examples") {
  SUBCASE("150 m apart with a 200 m range") {
    const auto g = build_rgg(devices_at(4000, {{100, 100}, {250, 100}}), 200.0);
    CHECK(g.edge_count() == 1);
  }
  SUBCASE("edge across the boundary") {
    const auto g = build_rgg(devices_at(4000, {{100, 100}, {3950, 100}}), 200.0);
    CHECK(g.edge_count() == 1);
    CHECK(g.neighbors(0)[0] == 1);
  }
  SUBCASE("just out of range") {
    const auto g = build_rgg(devices_at(4000, {{100, 100}, {300.5, 100}}), 200.0);
    CHECK(g.edge_count() == 0);
  }
}

TEST_CASE("build_rgg rejects bad ranges") {
  const auto d = devices_at(1000, {{1, 1}});
  CHECK_THROWS_AS(build_rgg(d, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_rgg(d, -3.0), std::invalid_argument);
  CHECK_THROWS_AS(build_rgg(d, 500.1), std::invalid_argument);
  CHECK_NOTHROW(build_rgg(d, 500.0));
}

TEST_CASE("grid-index RGG equals the all-pairs oracle") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> nd(0, 400);
  std::uniform_real_distribution<double> rd(0.01, 0.5);
  for (int inst = 0; inst < 200; ++inst) {
    const double L = 1000.0;
    const auto pts = oracle::random_points(gen, static_cast<std::size_t>(nd(gen)), L);
    // Include ranges that leave only 2-4 grid cells per axis.
    const double range = inst % 10 == 0 ? L * rd(gen) : L * rd(gen) * 0.3;
    const auto g = build_rgg(devices_at(L, pts), range);
    REQUIRE(oracle::edge_set(g) == oracle::all_pairs_edges(pts, L, range));
  }
}

TEST_CASE("adjacency invariants") {
  std::mt19937_64 gen(3);
  const auto pts = oracle::random_points(gen, 500, 2000.0);
  const auto g = build_rgg(devices_at(2000.0, pts), 150.0);
  const TorusRegion r(2000.0);
  const auto deg = g.degrees();
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    const auto nb = g.neighbors(u);
    CHECK(deg[u] == nb.size());
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
    for (VertexId v : nb) {
      CHECK(v != u);
      CHECK(r.distance(pts[u], pts[v]) <= 150.0);
      const auto back = g.neighbors(v);
      CHECK(std::binary_search(back.begin(), back.end(), u));
    }
  }
}

TEST_CASE("build_rgg does not depend on device order beyond relabeling") {
  std::mt19937_64 gen(11);
  const auto pts = oracle::random_points(gen, 300, 1500.0);
  std::vector<VertexId> perm(pts.size());
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<Point> shuffled(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) shuffled[perm[i]] = pts[i];

  const auto g1 = build_rgg(devices_at(1500.0, pts), 120.0);
  const auto g2 = build_rgg(devices_at(1500.0, shuffled), 120.0);
  std::set<std::pair<VertexId, VertexId>> mapped;
  for (auto [u, v] : oracle::edge_set(g1)) {
    mapped.insert({std::min(perm[u], perm[v]), std::max(perm[u], perm[v])});
  }
  CHECK(mapped == oracle::edge_set(g2));
}

TEST_CASE("connected_components small cases") {
  // Path 0 - 1 - 2.
  const auto g = build_rgg(devices_at(1000, {{100, 100}, {150, 100}, {200, 100}}), 60.0);
  REQUIRE(g.edge_count() == 2);

  SUBCASE("all inactive") {
    const auto rep = connected_components(g, Mask{0, 0, 0});
    CHECK(rep.num_clusters == 0);
    CHECK(rep.max_cluster_size == 0);
    CHECK(rep.sizes.empty());
    CHECK(rep.labels == std::vector<std::int32_t>(3, ClusterReport::kInactive));
  }
  SUBCASE("middle vertex inactive") {
    const auto rep = connected_components(g, Mask{1, 0, 1});
    CHECK(rep.num_clusters == 2);
    CHECK(rep.sizes == std::vector<std::size_t>{1, 1});
    CHECK(rep.labels[1] == ClusterReport::kInactive);
    CHECK(rep.labels[0] != rep.labels[2]);
  }
  SUBCASE("all active") {
    const auto rep = connected_components(g, Mask{1, 1, 1});
    CHECK(rep.num_clusters == 1);
    CHECK(rep.max_cluster_size == 3);
  }
  CHECK_THROWS_AS(connected_components(g, Mask{1, 1}), std::invalid_argument);
}

TEST_CASE("union-find components equal the BFS oracle") {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> nd(1, 400);
  std::uniform_real_distribution<double> keep(0.3, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int inst = 0; inst < 200; ++inst) {
    const double L = 1000.0;
    const auto pts = oracle::random_points(gen, static_cast<std::size_t>(nd(gen)), L);
    const double range = 20.0 + 100.0 * u01(gen);
    const auto g = build_rgg(devices_at(L, pts), range);
    Mask mask(pts.size());
    const double p = keep(gen);
    for (auto& m : mask) m = u01(gen) < p;
    const auto rep = connected_components(g, mask);
    const auto expected = oracle::bfs_components(g, mask);
    REQUIRE(oracle::label_partition(rep.labels) == expected);
    CHECK(rep.num_clusters == expected.size());
    const auto active = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
    CHECK(std::accumulate(rep.sizes.begin(), rep.sizes.end(), std::size_t{0}) == active);
    CHECK(std::is_sorted(rep.sizes.rbegin(), rep.sizes.rend()));
  }
}

TEST_CASE("max cluster size is non-increasing along nested masks") {
  std::mt19937_64 gen(5);
  const auto pts = oracle::random_points(gen, 400, 1000.0);
  const auto g = build_rgg(devices_at(1000.0, pts), 80.0);
  std::vector<VertexId> order(pts.size());
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), gen);
  Mask mask(pts.size(), 1);
  std::size_t prev = connected_components(g, mask).max_cluster_size;
  for (std::size_t k = 0; k < order.size(); k += 10) {
    for (std::size_t i = k; i < std::min(order.size(), k + 10); ++i) mask[order[i]] = 0;
    const std::size_t cur = connected_components(g, mask).max_cluster_size;
    CHECK(cur <= prev);
    prev = cur;
  }
  CHECK(prev == 0);
}

TEST_CASE("edge list dump") {
  const auto g = build_rgg(devices_at(1000, {{100, 100}, {150, 100}, {200, 100}}), 60.0);
  std::ostringstream out;
  write_edge_list(out, g);
  CHECK(out.str() == "0 1\n1 2\n");
}
