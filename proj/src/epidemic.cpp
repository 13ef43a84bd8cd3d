#include "spatialfw/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "spatialfw/random.hpp"

namespace spatialfw {

void EpidemicParams::validate() const {
  if (!(beta >= 0.0) || !(delta >= 0.0) || std::isnan(beta) || std::isnan(delta) ||
      std::isinf(beta) || std::isinf(delta)) {
    throw std::invalid_argument("beta and delta must be finite and >= 0");
  }
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be > 0");
}

std::string_view to_string(Transition t) {
  return t == Transition::Infect ? "S->I" : "I->R";
}

namespace {

enum class State : std::uint8_t { Susceptible, Infected, Recovered };

struct Pending {
  double time;
  std::uint64_t seq;  // tie-break so the pop order never depends on the heap
  Transition kind;
  VertexId device;

  bool operator>(const Pending& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

}  // namespace

EpidemicTrace simulate_sir(const AdjacencyGraph& graph,
                           std::span<const std::uint8_t> active,
                           VertexId seed_device, const EpidemicParams& params,
                           std::uint64_t rng_seed) {
  params.validate();
  const std::size_t n = graph.vertex_count();
  if (active.size() != n) throw std::invalid_argument("mask length does not match graph");
  if (seed_device >= n) throw std::invalid_argument("seed device out of range");
  if (!active[seed_device]) {
    throw std::invalid_argument("seed device is protected and cannot be infected");
  }

  Engine rng(rng_seed);
  std::vector<State> state(n, State::Susceptible);
  std::vector<double> recovery_time(n, std::numeric_limits<double>::infinity());
  // Earliest pending infection time per vertex; later transmissions are moot.
  std::vector<double> predicted(n, std::numeric_limits<double>::infinity());
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue;
  std::uint64_t seq = 0;

  EpidemicTrace trace;
  trace.seed_device = seed_device;
  CompartmentCounts counts;
  counts.susceptible = static_cast<std::size_t>(std::count(active.begin(), active.end(), 1)) - 1;
  counts.infected = 1;
  trace.counts_over_time.push_back(counts);

  auto infect = [&](VertexId v, double t) {
    state[v] = State::Infected;
    trace.ever_infected.push_back(v);
    const double rec = t + exponential(rng, params.delta);
    recovery_time[v] = rec;
    if (std::isfinite(rec)) queue.push({rec, seq++, Transition::Recover, v});
    for (VertexId u : graph.neighbors(v)) {
      if (!active[u] || state[u] != State::Susceptible) continue;
      const double hit = t + exponential(rng, params.beta);
      if (hit < rec && hit < predicted[u]) {
        predicted[u] = hit;
        queue.push({hit, seq++, Transition::Infect, u});
      }
    }
  };

  infect(seed_device, 0.0);
  while (!queue.empty()) {
    const Pending ev = queue.top();
    queue.pop();
    if (ev.time >= params.t_max) break;
    if (ev.kind == Transition::Infect) {
      if (state[ev.device] != State::Susceptible) continue;
      --counts.susceptible;
      ++counts.infected;
      infect(ev.device, ev.time);
    } else {
      state[ev.device] = State::Recovered;
      --counts.infected;
      ++counts.recovered;
    }
    counts.time = ev.time;
    trace.events.push_back({ev.time, ev.device, ev.kind});
    trace.counts_over_time.push_back(counts);
  }
  std::sort(trace.ever_infected.begin(), trace.ever_infected.end());
  return trace;
}

void write_trace_csv(std::ostream& out, const EpidemicTrace& trace) {
  const auto old_precision = out.precision(17);
  out << "time,device,transition\n";
  for (const auto& e : trace.events) {
    out << e.time << ',' << e.device << ',' << to_string(e.transition) << '\n';
  }
  out.precision(old_precision);
}

std::string trace_summary_json(const EpidemicTrace& trace) {
  const auto& last = trace.final_counts();
  nlohmann::ordered_json j;
  j["seed_device"] = trace.seed_device;
  j["ever_infected"] = trace.ever_infected.size();
  j["final"] = {{"S", last.susceptible}, {"I", last.infected}, {"R", last.recovered}};
  j["events"] = trace.events.size();
  j["end_time"] = last.time;
  return j.dump(2);
}

std::vector<MeanFieldState> solve_mean_field_sir(std::size_t population,
                                                 double contact_rate, double delta,
                                                 std::size_t initial_infected,
                                                 double t_max, double dt) {
  for (double v : {contact_rate, delta, t_max, dt}) {
    if (!std::isfinite(v)) throw std::invalid_argument("mean-field inputs must be finite");
  }
  if (population == 0) throw std::invalid_argument("population must be > 0");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be >= 0");
  if (contact_rate < 0.0 || delta < 0.0) throw std::invalid_argument("rates must be >= 0");
  if (initial_infected > population) {
    throw std::invalid_argument("initial_infected exceeds population");
  }

  const double N = static_cast<double>(population);
  const double k = contact_rate / N;
  struct D {
    double s, i, r;
  };
  auto deriv = [&](const D& x) {
    const double flow = k * x.s * x.i;
    const double rec = delta * x.i;
    return D{-flow, flow - rec, rec};
  };
  auto axpy = [](const D& x, double h, const D& d) {
    return D{x.s + h * d.s, x.i + h * d.i, x.r + h * d.r};
  };

  std::vector<MeanFieldState> out;
  D x{N - static_cast<double>(initial_infected), static_cast<double>(initial_infected), 0.0};
  double t = 0.0;
  out.push_back({t, x.s, x.i, x.r});
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-12));
  for (std::size_t step = 1; step <= steps; ++step) {
    const double t_next = std::min(t_max, static_cast<double>(step) * dt);
    const double h = t_next - t;
    const D k1 = deriv(x);
    const D k2 = deriv(axpy(x, 0.5 * h, k1));
    const D k3 = deriv(axpy(x, 0.5 * h, k2));
    const D k4 = deriv(axpy(x, h, k3));
    x.s += h / 6.0 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s);
    x.i += h / 6.0 * (k1.i + 2 * k2.i + 2 * k3.i + k4.i);
    x.r += h / 6.0 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r);
    t = t_next;
    out.push_back({t, x.s, x.i, x.r});
  }
  return out;
}

}  // namespace spatialfw
