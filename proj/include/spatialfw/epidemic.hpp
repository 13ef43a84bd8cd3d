// Continuous-time S/I/R malware spread on the susceptible subgraph, and the
// fully mixed mean-field comparator.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spatialfw/rgg.hpp"

namespace spatialfw {

struct EpidemicParams {
  double beta = 1.0;   // per-edge infection rate
  double delta = 1.0;  // per-device recovery rate
  double t_max = std::numeric_limits<double>::infinity();

  void validate() const;
};

enum class Transition : std::uint8_t { Infect, Recover };

std::string_view to_string(Transition t);

struct EpidemicEvent {
  double time = 0.0;
  VertexId device = 0;
  Transition transition = Transition::Infect;
};

struct CompartmentCounts {
  double time = 0.0;
  std::size_t susceptible = 0;
  std::size_t infected = 0;
  std::size_t recovered = 0;
};

struct EpidemicTrace {
  VertexId seed_device = 0;
  std::vector<EpidemicEvent> events;
  /// Step function: entry 0 is the state at t = 0, then one entry per event.
  std::vector<CompartmentCounts> counts_over_time;
  /// Sorted ascending; includes the seed.
  std::vector<VertexId> ever_infected;

  const CompartmentCounts& final_counts() const { return counts_over_time.back(); }
};

/// Event-driven exact simulation with exponential infection and recovery
/// times. Only vertices with active[v] != 0 take part. Throws
/// std::invalid_argument if the seed device is out of range or inactive.
EpidemicTrace simulate_sir(const AdjacencyGraph& graph,
                           std::span<const std::uint8_t> active,
                           VertexId seed_device, const EpidemicParams& params,
                           std::uint64_t rng_seed);

/// CSV with header "time,device,transition".
void write_trace_csv(std::ostream& out, const EpidemicTrace& trace);

/// {"seed_device", "ever_infected", "final": {"S","I","R"}, "events"}
std::string trace_summary_json(const EpidemicTrace& trace);

struct MeanFieldState {
  double t = 0.0;
  double s = 0.0;
  double i = 0.0;
  double r = 0.0;
};

/// RK4 integration of dS/dt = -(c/N) S I, dI/dt = (c/N) S I - delta I,
/// dR/dt = delta I from t = 0 to t_max with step dt (the last step is
/// shortened to land on t_max). Throws std::invalid_argument on non-finite
/// or out-of-range inputs.
std::vector<MeanFieldState> solve_mean_field_sir(std::size_t population,
                                                 double contact_rate, double delta,
                                                 std::size_t initial_infected,
                                                 double t_max, double dt);

}  // namespace spatialfw
