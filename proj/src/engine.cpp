#include "bhsim/engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "bhsim/game_scheduler.hpp"
#include "bhsim/power_optimizer.hpp"

namespace bh::engine {

namespace {

constexpr std::array kAlgorithms{Algorithm::kJbspo,      Algorithm::kGreedy,
                                 Algorithm::kGreedyPowerOpt, Algorithm::kRoundRobin,
                                 Algorithm::kMaxSinr,    Algorithm::kGenetic};

// Independent random streams derived from the seed.
enum Stream : std::uint32_t { kGeometryStream = 1, kArrivalStream = 2, kSchedulerStream = 3 };

std::mt19937_64 make_stream(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

// Integer ratio b / a when a divides b within 1e-9 relative, else -1.
std::int64_t divides(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) return -1;
  const double ratio = b / a;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) return -1;
  return static_cast<std::int64_t>(rounded);
}

bool uses_power_optimizer(Algorithm a) {
  return a == Algorithm::kJbspo || a == Algorithm::kGreedyPowerOpt || a == Algorithm::kGenetic;
}

class GainCache {
 public:
  GainCache(std::size_t sinks, std::size_t positions)
      : positions_(positions), values_(sinks * positions, kEmpty) {}

  void clear() { std::fill(values_.begin(), values_.end(), kEmpty); }

  template <typename Compute>
  double get(int sink, std::size_t beam, Compute&& compute) {
    double& v = values_[static_cast<std::size_t>(sink) * positions_ + beam];
    if (v == kEmpty) v = compute();
    return v;
  }

 private:
  static constexpr double kEmpty = -1.0;
  std::size_t positions_;
  std::vector<double> values_;
};

}  // namespace

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kJbspo: return "JBSPO-BH";
    case Algorithm::kGreedy: return "G-BH";
    case Algorithm::kGreedyPowerOpt: return "G-BHPO";
    case Algorithm::kRoundRobin: return "RR-BH";
    case Algorithm::kMaxSinr: return "MAX-SINR-BH";
    case Algorithm::kGenetic: return "GA-BH";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (Algorithm a : kAlgorithms)
    if (upper == to_string(a)) return a;
  return std::nullopt;
}

std::span<const Algorithm> all_algorithms() { return kAlgorithms; }

std::string algorithm_names() {
  std::string out;
  for (Algorithm a : kAlgorithms) {
    if (!out.empty()) out += ", ";
    out += to_string(a);
  }
  return out;
}

std::int64_t SimConfig::num_slots() const { return divides(t_b, t_max); }

double SimConfig::resolved_footprint_radius() const {
  return footprint_radius > 0.0 ? footprint_radius
                                : geo::footprint_radius_for(orbit.altitude, tx.theta_3db);
}

void SimConfig::validate() const {
  if (rings < 0 || rings > geo::kMaxGridRings)
    throw std::invalid_argument("rings must lie in [0, " + std::to_string(geo::kMaxGridRings) + "]");
  if (num_beams < 1) throw std::invalid_argument("K (num_beams) must be >= 1");
  if (num_beams > num_positions())
    throw std::invalid_argument("K (num_beams) must not exceed N (beam positions)");
  if (!(p_max > 0.0)) throw std::invalid_argument("p_max must be > 0");
  if (!(t_b > 0.0) || !(t_p > 0.0) || !(t_s > 0.0) || !(t_max > 0.0))
    throw std::invalid_argument("timing: t_b, t_p, t_s and t_max must be > 0");
  if (divides(t_b, t_p) < 0)
    throw std::invalid_argument("timing invariant violated: t_b must divide t_p");
  if (divides(t_p, t_s) < 0)
    throw std::invalid_argument("timing invariant violated: t_p must divide t_s");
  if (t_max < t_p) throw std::invalid_argument("timing invariant violated: t_max must be >= t_p");
  if (divides(t_b, t_max) < 0)
    throw std::invalid_argument("timing invariant violated: t_b must divide t_max");
  if (std::abs(budget.slot - t_b) > 1e-12 * t_b)
    throw std::invalid_argument("link budget slot length must equal t_b");
  traffic::validate(arrivals);
  if (!lambda_multiplier.empty()) {
    if (lambda_multiplier.size() != num_positions())
      throw std::invalid_argument("lambda_multiplier must have one entry per beam position");
    for (double m : lambda_multiplier)
      if (!(m >= 0.0) || !std::isfinite(m))
        throw std::invalid_argument("lambda_multiplier entries must be finite and >= 0");
  }
  channel::validate(tx);
  channel::validate(rx);
  channel::validate(budget);
  if (!(orbit.altitude > 0.0)) throw std::invalid_argument("orbit altitude must be > 0");
  if (!(orbit.ground_speed > 0.0)) throw std::invalid_argument("orbit ground_speed must be > 0");
  geo::make_geo_point(grid_center.lat, grid_center.lon);
  geo::make_geo_point(orbit.initial_subsat.lat, orbit.initial_subsat.lon);
  if (footprint_radius < 0.0) throw std::invalid_argument("footprint_radius must be >= 0");
  if (!(sink_density >= 0.0)) throw std::invalid_argument("sink_density must be >= 0");
  baselines::validate(ga);
  if (iteration_max < 1) throw std::invalid_argument("iteration_max must be >= 1");
}

bool same_scenario(const SimConfig& a, const SimConfig& b) {
  const auto pattern_eq = [](const channel::AntennaPattern& x, const channel::AntennaPattern& y) {
    return x.g_max_dbi == y.g_max_dbi && x.theta_3db == y.theta_3db;
  };
  return a.rings == b.rings && a.num_beams == b.num_beams && a.p_max == b.p_max &&
         a.t_b == b.t_b && a.t_p == b.t_p && a.t_s == b.t_s && a.t_max == b.t_max &&
         a.arrivals.lambda == b.arrivals.lambda &&
         a.arrivals.packet_bits == b.arrivals.packet_bits &&
         a.lambda_multiplier == b.lambda_multiplier && pattern_eq(a.tx, b.tx) &&
         pattern_eq(a.rx, b.rx) && a.budget.carrier_freq == b.budget.carrier_freq &&
         a.budget.other_loss_db == b.budget.other_loss_db &&
         a.budget.noise_power == b.budget.noise_power && a.budget.bandwidth == b.budget.bandwidth &&
         a.budget.slot == b.budget.slot && a.grid_center.lat == b.grid_center.lat &&
         a.grid_center.lon == b.grid_center.lon && a.footprint_radius == b.footprint_radius &&
         a.orbit.altitude == b.orbit.altitude &&
         a.orbit.initial_subsat.lat == b.orbit.initial_subsat.lat &&
         a.orbit.initial_subsat.lon == b.orbit.initial_subsat.lon &&
         a.orbit.track_azimuth == b.orbit.track_azimuth &&
         a.orbit.ground_speed == b.orbit.ground_speed && a.sink_density == b.sink_density &&
         a.iteration_max == b.iteration_max && a.seed == b.seed;
}

RunResult run(const SimConfig& cfg, const RunOptions& options) {
  cfg.validate();

  const std::size_t num_positions = cfg.num_positions();
  const std::size_t num_beams = cfg.num_beams;
  const std::int64_t num_slots = cfg.num_slots();
  const std::int64_t slots_per_cycle = divides(cfg.t_b, cfg.t_p);
  const std::int64_t slots_per_update = divides(cfg.t_b, cfg.t_s);
  const double p_ave = cfg.p_max / static_cast<double>(num_beams);
  const double pn = cfg.budget.noise_power;
  const double bits_scale = cfg.budget.bits_scale();

  auto geometry_rng = make_stream(cfg.seed, kGeometryStream);
  auto arrival_rng = make_stream(cfg.seed, kArrivalStream);
  auto scheduler_rng = make_stream(cfg.seed, kSchedulerStream);

  const geo::BeamGrid grid =
      geo::build_grid(cfg.grid_center, cfg.rings, cfg.resolved_footprint_radius());
  const std::vector<geo::SinkNode> sinks = geo::sample_sinks(grid, cfg.sink_density, geometry_rng);

  std::vector<geo::EcefVector> boresight(num_positions);
  for (std::size_t n = 0; n < num_positions; ++n) boresight[n] = geo::geo_to_ecef(grid.centers[n], 0.0);
  std::vector<geo::EcefVector> sink_ecef(sinks.size());
  for (const auto& s : sinks) sink_ecef[static_cast<std::size_t>(s.id)] = geo::geo_to_ecef(s.position, 0.0);

  traffic::DemandState state(sinks, num_positions);
  GainCache cache(sinks.size(), num_positions);
  baselines::RoundRobinCursor cursor;
  geo::EcefVector sat{};

  RunResult result;
  result.config = cfg;
  result.centers = grid.centers;
  std::vector<double> sod_per_slot;
  sod_per_slot.reserve(static_cast<std::size_t>(num_slots));
  double sweep_total = 0.0;
  std::int64_t ne_calls = 0;

  std::vector<double> demand(num_positions);
  std::vector<int> selected(num_positions);

  for (std::int64_t slot = 0; slot < num_slots; ++slot) {
    if (slot % slots_per_cycle == 0) {
      for (std::size_t n = 0; n < num_positions; ++n) {
        const double mult = cfg.lambda_multiplier.empty() ? 1.0 : cfg.lambda_multiplier[n];
        traffic::generate_arrivals(cfg.arrivals, cfg.t_p, n, state, arrival_rng, mult);
      }
    }
    if (slot % slots_per_update == 0) {
      const double t = static_cast<double>(slot) * cfg.t_b;
      sat = geo::geo_to_ecef(geo::subsatellite_at(cfg.orbit, t), cfg.orbit.altitude);
      cache.clear();
    }

    // Preselected set and greedy sink choice.
    std::vector<std::size_t> preselected;
    for (std::size_t n = 0; n < num_positions; ++n) {
      demand[n] = static_cast<double>(state.position_demand(n));
      selected[n] = traffic::select_sink(n, state);
      if (state.position_demand(n) > 0) preselected.push_back(n);
    }

    // Positions that need channel rows/columns this slot.
    std::vector<std::size_t> candidates =
        cfg.algorithm == Algorithm::kRoundRobin
            ? baselines::rr_schedule(cursor, num_beams, num_positions)
            : preselected;

    channel::ChannelMatrix h;
    h.positions = candidates;
    h.selected_sink.resize(candidates.size());
    h.gains.resize(static_cast<Eigen::Index>(candidates.size()),
                   static_cast<Eigen::Index>(candidates.size()));
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const int sink = selected[candidates[i]];
      h.selected_sink[i] = sink;
      for (std::size_t j = 0; j < candidates.size(); ++j) {
        const std::size_t beam = candidates[j];
        h.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            cache.get(sink, beam, [&] {
              return channel::channel_gain(sat, boresight[beam],
                                           sink_ecef[static_cast<std::size_t>(sink)], cfg.tx,
                                           cfg.rx, cfg.budget);
            });
      }
    }

    // Local (matrix) indices of the illuminated positions.
    std::vector<std::size_t> active;
    if (cfg.algorithm == Algorithm::kRoundRobin || candidates.size() <= num_beams) {
      active.resize(candidates.size());
      for (std::size_t i = 0; i < active.size(); ++i) active[i] = i;
    } else {
      game::GameContext ctx;
      ctx.gains = h.gains;
      ctx.demands.resize(candidates.size());
      for (std::size_t i = 0; i < candidates.size(); ++i) ctx.demands[i] = demand[candidates[i]];
      ctx.p_ave = p_ave;
      ctx.p_noise = pn;
      ctx.bits_scale = bits_scale;

      const auto start = std::chrono::steady_clock::now();
      switch (cfg.algorithm) {
        case Algorithm::kJbspo: {
          const auto ne = game::find_ne(num_beams, ctx, scheduler_rng, cfg.iteration_max);
          active = ne.assignment.beams;
          if (!ne.converged) ++result.diagnostics.ne_not_converged;
          sweep_total += ne.sweeps;
          ++ne_calls;
          break;
        }
        case Algorithm::kGreedy:
        case Algorithm::kGreedyPowerOpt:
          active = baselines::g_bh_schedule(ctx.demands, num_beams);
          break;
        case Algorithm::kMaxSinr: {
          std::vector<std::size_t> all(candidates.size());
          for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
          active = baselines::max_sinr_schedule(all, h.gains, num_beams, p_ave, pn);
          break;
        }
        case Algorithm::kGenetic:
          active = baselines::ga_schedule(num_beams, ctx, cfg.ga, scheduler_rng).best.beams;
          break;
        case Algorithm::kRoundRobin:
          break;
      }
      result.diagnostics.scheduling_seconds +=
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      ++result.diagnostics.scheduler_calls;
    }

    // Power split over the illuminated set.
    std::vector<double> power(candidates.size(), 0.0);
    if (!active.empty()) {
      if (uses_power_optimizer(cfg.algorithm)) {
        const auto k = static_cast<Eigen::Index>(active.size());
        power::PowerProblem problem;
        problem.gains.resize(k, k);
        problem.demands.resize(k);
        for (Eigen::Index i = 0; i < k; ++i) {
          const std::size_t li = active[static_cast<std::size_t>(i)];
          problem.demands(i) = static_cast<double>(state.queued(h.selected_sink[li]));
          for (Eigen::Index j = 0; j < k; ++j)
            problem.gains(i, j) = h.gains(static_cast<Eigen::Index>(li),
                                          static_cast<Eigen::Index>(active[static_cast<std::size_t>(j)]));
        }
        problem.p_max = cfg.p_max;
        problem.p_noise = pn;
        problem.bits_scale = bits_scale;
        const auto sol = power::optimize(problem);
        if (!sol.converged) ++result.diagnostics.optimizer_not_converged;
        for (Eigen::Index i = 0; i < k; ++i) power[active[static_cast<std::size_t>(i)]] = sol.power(i);
      } else {
        const double each = cfg.p_max / static_cast<double>(active.size());
        for (std::size_t li : active) power[li] = each;
      }
    }

    // Transmission, rate cap, queue update.
    SlotLog log;
    log.slot = slot;
    std::vector<double> served_now(num_positions, 0.0);
    double power_sum = 0.0;
    for (std::size_t li : active) {
      const std::size_t n = candidates[li];
      const double s = channel::sinr(li, active, power, h, pn);
      const double offered = channel::offered_bits(s, cfg.budget);
      const traffic::Bits served = traffic::serve(n, offered, state);
      served_now[n] = static_cast<double>(served);
      power_sum += power[li];
      if (options.keep_slot_log) {
        log.illuminated.push_back(n);
        log.power.push_back(power[li]);
        log.sinr.push_back(s);
        log.offered_bits.push_back(offered);
        log.served_bits.push_back(served);
      }
    }
    log.sod = metrics::sod_cost(served_now, demand);
    sod_per_slot.push_back(log.sod);
    result.diagnostics.max_power_sum = std::max(result.diagnostics.max_power_sum, power_sum);
    result.diagnostics.max_illuminated = std::max(result.diagnostics.max_illuminated, active.size());
    if (options.keep_slot_log) result.slots.push_back(std::move(log));
  }

  std::vector<double> served(num_positions), arrived(num_positions);
  for (std::size_t n = 0; n < num_positions; ++n) {
    served[n] = static_cast<double>(state.served_at(n));
    arrived[n] = static_cast<double>(state.arrived_at(n));
  }
  result.summary = metrics::summarize(served, arrived,
                                      static_cast<double>(num_slots) * cfg.t_b,
                                      std::move(sod_per_slot));
  result.diagnostics.mean_sweeps = ne_calls > 0 ? sweep_total / static_cast<double>(ne_calls) : 0.0;
  result.diagnostics.total_arrived = state.total_arrived();
  result.diagnostics.total_served = state.total_served();
  result.diagnostics.total_queued = state.total_queued();
  return result;
}

std::vector<RunResult> run_all(std::span<const SimConfig> configs, const RunOptions& options,
                               unsigned workers) {
  std::vector<RunResult> results(configs.size());
  if (configs.empty()) return results;
  for (const auto& c : configs) c.validate();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(configs.size()));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(configs.size());
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
          try {
            results[i] = run(configs[i], options);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

std::vector<RunResult> compare(std::span<const SimConfig> configs, const RunOptions& options,
                               unsigned workers) {
  for (const auto& c : configs)
    if (!same_scenario(configs.front(), c))
      throw std::invalid_argument("compare: configs must share the scenario and differ only in algorithm");
  return run_all(configs, options, workers);
}

}  // namespace bh::engine
