#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bhsim/game_scheduler.hpp"
#include "bhsim/power_optimizer.hpp"

namespace bh::baselines {

struct GaConfig {
  int generations = 200;
  int population = 100;
  double p_mut = 0.2;
  double p_cro = 0.8;
};

void validate(const GaConfig& cfg);

struct RoundRobinCursor {
  std::size_t next_index = 0;
};

/// Greedy by demand: the K largest nonzero demands (ties to the lower
/// index), returned in descending-demand order.
std::vector<std::size_t> g_bh_schedule(std::span<const double> demands, std::size_t num_beams);

struct PoweredSchedule {
  std::vector<std::size_t> positions;
  Eigen::VectorXd power;
};

/// G-BH assignment followed by the interior-point power split. `gains` is
/// indexed like `demands` (full N x N); `sink_caps` are the per-position
/// caps handed to the optimizer.
PoweredSchedule g_bhpo_schedule(std::span<const double> demands, std::size_t num_beams,
                                const Eigen::MatrixXd& gains, std::span<const double> sink_caps,
                                double p_max, double p_noise, double bits_scale);

/// K consecutive positions (mod N) starting at the cursor, regardless of
/// demand. Advances the cursor by K.
std::vector<std::size_t> rr_schedule(RoundRobinCursor& cursor, std::size_t num_beams,
                                     std::size_t num_positions);

/// Greedy sum-SINR construction under average power p_ave: repeatedly adds
/// the candidate that maximizes the summed SINR of the chosen set.
/// `candidates` index into `gains`.
std::vector<std::size_t> max_sinr_schedule(std::span<const std::size_t> candidates,
                                           const Eigen::MatrixXd& gains, std::size_t num_beams,
                                           double p_ave, double p_noise);

struct GaResult {
  game::Assignment best;
  double best_fitness = 0.0;
  std::vector<double> best_per_generation;
};

/// Genetic search over ordered K-tuples of distinct positions, minimizing
/// the scheduling potential under average power. Tournament-2 selection,
/// one-point crossover with duplicate repair, per-gene mutation, elitism 1.
GaResult ga_schedule(std::size_t num_beams, const game::GameContext& ctx, const GaConfig& cfg,
                     std::mt19937_64& rng);

}  // namespace bh::baselines
