#pragma once

#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace bh::game {

inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

/// Beam -> position decision. beams[k] is a local position index into the
/// game context, or kUnassigned.
struct Assignment {
  std::vector<std::size_t> beams;

  std::size_t num_beams() const { return beams.size(); }
  std::size_t num_assigned() const;
  bool contains(std::size_t position) const;
  bool operator==(const Assignment&) const = default;
};

/// Per-slot scheduling game over the preselected (nonzero-demand) set.
/// All indices are local to this context.
struct GameContext {
  Eigen::MatrixXd gains;        // H[n][m], n receives, m is the beam target
  std::vector<double> demands;  // bits per position
  double p_ave = 0.0;           // W, P_max / K
  double p_noise = 0.0;         // W
  double bits_scale = 0.0;      // B * T_b

  std::size_t num_positions() const { return demands.size(); }
  void validate() const;
};

/// Throws if entries repeat or fall outside the context.
void validate(const Assignment& a, const GameContext& ctx);

/// Shared utility of every player: sum over assigned beams of
/// (B_b L_k)^2 - 2 B_b D_{a_k} L_k, where L_k = log2(1 + SINR_k) under
/// average power.
double utility(const Assignment& a, const GameContext& ctx);

/// utility() without validating `beams`; for hot loops that construct
/// assignments which are distinct by construction.
double shared_utility(std::span<const std::size_t> beams, const GameContext& ctx);

/// Sum over all context positions of (B_b L_n - D_n)^2, with L_n = 0 for
/// positions no beam illuminates. Positions outside the context have zero
/// demand and contribute nothing.
double potential(const Assignment& a, const GameContext& ctx);

/// Sum of squared demands: potential(a) - utility(a) for every a.
double potential_offset(const GameContext& ctx);

/// Re-targets beam k to the position minimizing the shared utility among
/// positions no other beam holds. The incumbent is kept unless a candidate
/// improves on it by more than a relative 1e-12 of the potential scale;
/// ties among improving candidates go to the lowest index.
Assignment best_response(std::size_t k, const Assignment& current, const GameContext& ctx);

struct NashResult {
  Assignment assignment;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> potential_trace;  // initial value, then one per sweep
};

/// Best-response dynamics from `initial`: sweeps beams 0..K-1 until a full
/// sweep changes nothing or `iteration_max` sweeps have run.
NashResult best_response_dynamics(Assignment initial, const GameContext& ctx,
                                  int iteration_max = 50);

/// Random distinct K-subset of the context's positions, in random order.
Assignment random_assignment(std::size_t num_beams, const GameContext& ctx,
                             std::mt19937_64& rng);

/// Pure-strategy Nash equilibrium of the K-beam scheduling game, starting
/// from a random assignment. Requires num_positions() >= num_beams.
NashResult find_ne(std::size_t num_beams, const GameContext& ctx, std::mt19937_64& rng,
                   int iteration_max = 50);

}  // namespace bh::game
