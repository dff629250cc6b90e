#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bhsim/baselines.hpp"
#include "bhsim/channel.hpp"
#include "bhsim/geometry.hpp"
#include "bhsim/metrics.hpp"
#include "bhsim/traffic.hpp"

namespace bh::engine {

enum class Algorithm { kJbspo, kGreedy, kGreedyPowerOpt, kRoundRobin, kMaxSinr, kGenetic };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::span<const Algorithm> all_algorithms();
/// Comma-separated list of accepted names, for diagnostics.
std::string algorithm_names();

struct SimConfig {
  int rings = 4;                 // N = 3 rings (rings + 1) + 1
  std::size_t num_beams = 8;     // K
  double p_max = 250.0;          // W
  double t_b = 0.5e-3;           // BH slot, s
  double t_p = 20e-3;            // BH cycle, s
  double t_s = 0.2;              // subsatellite update period, s
  double t_max = 20.0;           // s
  traffic::ArrivalConfig arrivals{};
  std::vector<double> lambda_multiplier;  // per position; empty means uniform
  channel::AntennaPattern tx{36.2, 1.66};
  channel::AntennaPattern rx{20.0, 1.66};
  channel::LinkBudget budget{};
  geo::GeoPoint grid_center{35.0, 110.0};
  double footprint_radius = 0.0;  // m; 0 derives altitude * tan(tx.theta_3db)
  geo::OrbitState orbit{508'000.0, {35.0, 110.0}, 0.0, 7050.0};
  double sink_density = 1.5e-8;   // nodes / m^2
  Algorithm algorithm = Algorithm::kJbspo;
  baselines::GaConfig ga{};
  int iteration_max = 50;
  std::uint64_t seed = 1;

  std::size_t num_positions() const { return geo::hex_cell_count(rings); }
  std::int64_t num_slots() const;
  double resolved_footprint_radius() const;
  /// Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

/// True when two configs describe the same scenario (everything except the
/// algorithm and its GA settings).
bool same_scenario(const SimConfig& a, const SimConfig& b);

struct SlotLog {
  std::int64_t slot = 0;
  std::vector<std::size_t> illuminated;  // global position indices
  std::vector<double> power;             // W, aligned with illuminated
  std::vector<double> sinr;
  std::vector<double> offered_bits;
  std::vector<traffic::Bits> served_bits;
  double sod = 0.0;
};

struct RunDiagnostics {
  std::int64_t scheduler_calls = 0;       // slots where |B| > K and a scheduler ran
  std::int64_t ne_not_converged = 0;
  std::int64_t optimizer_not_converged = 0;
  double mean_sweeps = 0.0;
  double scheduling_seconds = 0.0;        // wall time inside the beam scheduler
  traffic::Bits total_arrived = 0;
  traffic::Bits total_served = 0;
  traffic::Bits total_queued = 0;
  double max_power_sum = 0.0;
  std::size_t max_illuminated = 0;
};

struct RunResult {
  SimConfig config;
  metrics::RunSummary summary;
  std::vector<SlotLog> slots;  // filled only when requested
  RunDiagnostics diagnostics;
  std::vector<geo::GeoPoint> centers;
};

struct RunOptions {
  bool keep_slot_log = false;
};

RunResult run(const SimConfig& config, const RunOptions& options = {});

/// Runs every config on the same scenario realization. Throws if the
/// configs disagree on anything but the algorithm.
std::vector<RunResult> compare(std::span<const SimConfig> configs, const RunOptions& options = {},
                               unsigned workers = 0);

/// Runs independent configs concurrently; results keep input order.
std::vector<RunResult> run_all(std::span<const SimConfig> configs, const RunOptions& options = {},
                               unsigned workers = 0);

}  // namespace bh::engine
