#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "oracles.hpp"
#include "spatialfw/epidemic.hpp"
#include "spatialfw/random.hpp"

using namespace spatialfw;

namespace {

AdjacencyGraph graph_of(double L, std::vector<Point> pts, double range) {
  return build_rgg(DeviceSet(TorusRegion(L), std::move(pts)), range);
}

std::vector<VertexId> cluster_of(const AdjacencyGraph& g, const Mask& mask, VertexId s) {
  for (auto& comp : oracle::bfs_components(g, mask)) {
    if (std::binary_search(comp.begin(), comp.end(), s)) return comp;
  }
  return {};
}

void check_trace_invariants(const EpidemicTrace& t, std::size_t active) {
  REQUIRE_FALSE(t.counts_over_time.empty());
  std::size_t prev_s = active, prev_r = 0;
  for (const auto& c : t.counts_over_time) {
    CHECK(c.susceptible + c.infected + c.recovered == active);
    CHECK(c.susceptible <= prev_s);
    CHECK(c.recovered >= prev_r);
    prev_s = c.susceptible;
    prev_r = c.recovered;
  }
  for (std::size_t i = 1; i < t.events.size(); ++i) CHECK(t.events[i].time > t.events[i - 1].time);
  std::vector<VertexId> infected{t.seed_device};
  for (const auto& e : t.events) {
    if (e.transition == Transition::Infect) infected.push_back(e.device);
  }
  std::sort(infected.begin(), infected.end());
  CHECK(infected == t.ever_infected);
}

}  // namespace

TEST_CASE("simulate_sir rejects bad seeds and parameters") {
  const auto g = graph_of(1000, {{0, 0}, {10, 0}}, 50);
  CHECK_THROWS_AS(simulate_sir(g, Mask{1, 1}, 2, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sir(g, Mask{0, 1}, 0, {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sir(g, Mask{1, 1}, 0, {-1.0, 1.0}, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate_sir(g, Mask{1, 1}, 0, {1.0, 1.0, 0.0}, 1), std::invalid_argument);
}

TEST_CASE("without recovery the infection exhausts the seed cluster") {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int inst = 0; inst < 50; ++inst) {
    const auto pts = oracle::random_points(gen, 200, 1000.0);
    const auto g = graph_of(1000.0, pts, 90.0);
    Mask mask(200);
    for (auto& m : mask) m = u01(gen) < 0.7;
    VertexId seed = 0;
    while (!mask[seed]) ++seed;
    const auto t = simulate_sir(g, mask, seed, {0.5 + u01(gen), 0.0}, inst);
    CHECK(t.ever_infected == cluster_of(g, mask, seed));
    check_trace_invariants(t, static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)));
  }
}

TEST_CASE("two-device race: P(infect) = beta / (beta + delta)") {
  const auto g = graph_of(1000, {{0, 0}, {10, 0}}, 50);
  const Mask mask{1, 1};
  const int runs = 100000;
  for (auto [beta, delta] : {std::pair{1.0, 1.0}, std::pair{3.0, 1.0}}) {
    int hits = 0;
    for (int r = 0; r < runs; ++r) {
      hits += simulate_sir(g, mask, 0, {beta, delta}, derive_seed(9, r)).ever_infected.size() == 2;
    }
    CHECK(std::abs(static_cast<double>(hits) / runs - beta / (beta + delta)) < 0.01);
  }
}

TEST_CASE("star graph: expected infected leaves = c * beta / (beta + delta)") {
  // Five leaves on a circle of radius 55 around the centre, range 60. Adjacent
  // leaves are ~64.7 apart, so only spokes are edges.
  std::vector<Point> pts{{500, 500}};
  const int c = 5;
  for (int i = 0; i < c; ++i) {
    const double a = 2 * M_PI * i / c;
    pts.push_back({500 + 55 * std::cos(a), 500 + 55 * std::sin(a)});
  }
  const auto g = graph_of(1000, pts, 60);
  REQUIRE(g.degree(0) == c);
  REQUIRE(g.edge_count() == c);
  const Mask mask(c + 1, 1);
  const double beta = 0.7, delta = 1.3;
  const int runs = 20000;
  double sum = 0, sum_sq = 0;
  for (int r = 0; r < runs; ++r) {
    const double leaves =
        static_cast<double>(simulate_sir(g, mask, 0, {beta, delta}, derive_seed(77, r)).ever_infected.size() - 1);
    sum += leaves;
    sum_sq += leaves * leaves;
  }
  const double mean = sum / runs;
  const double se = std::sqrt((sum_sq / runs - mean * mean) / runs);
  CHECK(std::abs(mean - c * beta / (beta + delta)) < 3 * se);
}

TEST_CASE("quarantine: infection never leaves the seed cluster") {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int inst = 0; inst < 200; ++inst) {
    const auto pts = oracle::random_points(gen, 150, 1000.0);
    const auto g = graph_of(1000.0, pts, 100.0);
    Mask mask(150);
    for (auto& m : mask) m = u01(gen) < 0.6;
    std::vector<VertexId> active;
    for (VertexId v = 0; v < 150; ++v) {
      if (mask[v]) active.push_back(v);
    }
    if (active.empty()) continue;
    const VertexId seed = active[static_cast<std::size_t>(u01(gen) * active.size())];
    const double beta = std::pow(10.0, -3 + 6 * u01(gen));
    const double delta = std::pow(10.0, -3 + 6 * u01(gen));
    const auto t = simulate_sir(g, mask, seed, {beta, delta}, inst);
    const auto cluster = cluster_of(g, mask, seed);
    CHECK(std::includes(cluster.begin(), cluster.end(), t.ever_infected.begin(),
                        t.ever_infected.end()));
    check_trace_invariants(t, active.size());
    CHECK(t.final_counts().infected == 0);
  }
}

TEST_CASE("t_max truncates the run") {
  std::vector<Point> pts;
  for (int i = 0; i < 40; ++i) pts.push_back({20.0 * i, 0});
  const auto g = graph_of(1000, pts, 25);
  const Mask mask(40, 1);
  const auto t = simulate_sir(g, mask, 0, {1.0, 0.0, 5.0}, 3);
  for (const auto& e : t.events) CHECK(e.time < 5.0);
  CHECK(t.ever_infected.size() < 40);
  CHECK(t.final_counts().infected > 0);
}

TEST_CASE("simulate_sir is deterministic per seed") {
  std::mt19937_64 gen(4);
  const auto pts = oracle::random_points(gen, 200, 1000.0);
  const auto g = graph_of(1000.0, pts, 110.0);
  const Mask mask(200, 1);
  const auto a = simulate_sir(g, mask, 5, {1.0, 0.5}, 42);
  const auto b = simulate_sir(g, mask, 5, {1.0, 0.5}, 42);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].time == b.events[i].time);
    CHECK(a.events[i].device == b.events[i].device);
  }
}

TEST_CASE("trace export") {
  const auto g = graph_of(1000, {{0, 0}, {10, 0}}, 50);
  const auto t = simulate_sir(g, Mask{1, 1}, 0, {5.0, 1.0}, 1);
  std::ostringstream csv;
  write_trace_csv(csv, t);
  const std::string s = csv.str();
  CHECK(s.rfind("time,device,transition\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')) == t.events.size() + 1);

  const auto j = nlohmann::json::parse(trace_summary_json(t));
  CHECK(j.at("ever_infected").get<std::size_t>() == t.ever_infected.size());
  CHECK(j.at("final").at("S").get<std::size_t>() + j.at("final").at("I").get<std::size_t>() +
            j.at("final").at("R").get<std::size_t>() == 2);
}

TEST_CASE("mean-field: no contact means pure exponential decay") {
  const auto traj = solve_mean_field_sir(1000, 0.0, 0.5, 100, 10.0, 0.01);
  for (const auto& s : traj) {
    CHECK(s.s == doctest::Approx(900.0));
    CHECK(s.i == doctest::Approx(100.0 * std::exp(-0.5 * s.t)).epsilon(1e-9));
  }
  CHECK(traj.back().t == doctest::Approx(10.0));
}

TEST_CASE("mean-field conserves the population") {
  for (double c : {0.5, 2.0, 8.0}) {
    const auto traj = solve_mean_field_sir(5000, c, 1.0, 3, 50.0, 0.05);
    for (const auto& s : traj) CHECK(std::abs(s.s + s.i + s.r - 5000.0) <= 1e-9 * 5000.0);
  }
}

TEST_CASE("mean-field final size satisfies r = 1 - s0 exp(-R0 r)") {
  const double r0 = 2.0, s0 = 0.99;
  const double oracle_r = oracle::bisect([&](double r) { return r - (1 - s0 * std::exp(-r0 * r)); },
                                         0.05, 1.0);
  const auto traj = solve_mean_field_sir(100000, 2.0, 1.0, 1000, 200.0, 0.01);
  CHECK(std::abs(traj.back().r / 100000.0 - oracle_r) < 1e-4);
}

TEST_CASE("mean-field input validation") {
  CHECK_THROWS_AS(solve_mean_field_sir(10, 1.0, 1.0, 11, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(solve_mean_field_sir(10, 1.0, 1.0, 1, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_mean_field_sir(10, NAN, 1.0, 1, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(solve_mean_field_sir(10, 1.0, INFINITY, 1, 1.0, 0.1), std::invalid_argument);
}
