#include "bhsim/game_scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bh::game {

namespace {

constexpr double kImprovementTol = 1e-12;

// (B_b L)^2 - 2 B_b D L for one illuminated position.
double beam_term(double sinr, double demand, double bits_scale) {
  const double offered = bits_scale * std::log2(1.0 + sinr);
  return offered * offered - 2.0 * demand * offered;
}

double beam_sinr(std::size_t k, std::span<const std::size_t> beams, const GameContext& ctx) {
  const std::size_t target = beams[k];
  double interference = 0.0;
  for (std::size_t l = 0; l < beams.size(); ++l) {
    if (l == k || beams[l] == kUnassigned) continue;
    interference += ctx.p_ave * ctx.gains(static_cast<Eigen::Index>(target),
                                          static_cast<Eigen::Index>(beams[l]));
  }
  const auto t = static_cast<Eigen::Index>(target);
  return ctx.p_ave * ctx.gains(t, t) / (interference + ctx.p_noise);
}

}  // namespace

std::size_t Assignment::num_assigned() const {
  return static_cast<std::size_t>(
      std::count_if(beams.begin(), beams.end(), [](std::size_t b) { return b != kUnassigned; }));
}

bool Assignment::contains(std::size_t position) const {
  return std::find(beams.begin(), beams.end(), position) != beams.end();
}

void GameContext::validate() const {
  const auto n = static_cast<Eigen::Index>(demands.size());
  if (gains.rows() != n || gains.cols() != n)
    throw std::invalid_argument("GameContext: gain matrix must be |B| x |B|");
  if (!(p_ave > 0.0) || !(p_noise > 0.0) || !(bits_scale > 0.0))
    throw std::invalid_argument("GameContext: p_ave, p_noise and bits_scale must be > 0");
  for (double d : demands)
    if (!(d > 0.0)) throw std::invalid_argument("GameContext: demands must be > 0");
}

void validate(const Assignment& a, const GameContext& ctx) {
  std::vector<bool> seen(ctx.num_positions(), false);
  for (std::size_t b : a.beams) {
    if (b == kUnassigned) continue;
    if (b >= ctx.num_positions())
      throw std::invalid_argument("assignment entry outside the preselected set");
    if (seen[b]) throw std::invalid_argument("assignment entries must be distinct");
    seen[b] = true;
  }
}

double utility(const Assignment& a, const GameContext& ctx) {
  validate(a, ctx);
  return shared_utility(a.beams, ctx);
}

double shared_utility(std::span<const std::size_t> beams, const GameContext& ctx) {
  double total = 0.0;
  for (std::size_t k = 0; k < beams.size(); ++k) {
    if (beams[k] == kUnassigned) continue;
    total += beam_term(beam_sinr(k, beams, ctx), ctx.demands[beams[k]], ctx.bits_scale);
  }
  return total;
}

double potential(const Assignment& a, const GameContext& ctx) {
  validate(a, ctx);
  std::vector<std::size_t> beam_of(ctx.num_positions(), kUnassigned);
  for (std::size_t k = 0; k < a.beams.size(); ++k)
    if (a.beams[k] != kUnassigned) beam_of[a.beams[k]] = k;

  double total = 0.0;
  for (std::size_t n = 0; n < ctx.num_positions(); ++n) {
    const double offered =
        beam_of[n] == kUnassigned
            ? 0.0
            : ctx.bits_scale * std::log2(1.0 + beam_sinr(beam_of[n], a.beams, ctx));
    const double gap = offered - ctx.demands[n];
    total += gap * gap;
  }
  return total;
}

double potential_offset(const GameContext& ctx) {
  return std::accumulate(ctx.demands.begin(), ctx.demands.end(), 0.0,
                         [](double acc, double d) { return acc + d * d; });
}

Assignment best_response(std::size_t k, const Assignment& current, const GameContext& ctx) {
  if (k >= current.beams.size()) throw std::invalid_argument("best_response: beam out of range");
  validate(current, ctx);

  const std::size_t num_beams = current.beams.size();
  const auto& a = current.beams;
  const auto gain = [&](std::size_t n, std::size_t m) {
    return ctx.gains(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  };

  // Interference-plus-noise seen by each other beam, excluding beam k.
  std::vector<double> base(num_beams, 0.0);
  for (std::size_t l = 0; l < num_beams; ++l) {
    if (l == k || a[l] == kUnassigned) continue;
    double sum = ctx.p_noise;
    for (std::size_t j = 0; j < num_beams; ++j)
      if (j != l && j != k && a[j] != kUnassigned) sum += ctx.p_ave * gain(a[l], a[j]);
    base[l] = sum;
  }

  // Shared utility with beam k moved to `c`, in O(K).
  const auto evaluate = [&](std::size_t c) {
    double total = 0.0;
    for (std::size_t l = 0; l < num_beams; ++l) {
      if (l == k) {
        double interference = ctx.p_noise;
        for (std::size_t j = 0; j < num_beams; ++j)
          if (j != k && a[j] != kUnassigned) interference += ctx.p_ave * gain(c, a[j]);
        total += beam_term(ctx.p_ave * gain(c, c) / interference, ctx.demands[c], ctx.bits_scale);
      } else if (a[l] != kUnassigned) {
        const double interference = base[l] + ctx.p_ave * gain(a[l], c);
        total += beam_term(ctx.p_ave * gain(a[l], a[l]) / interference, ctx.demands[a[l]],
                           ctx.bits_scale);
      }
    }
    return total;
  };

  std::vector<bool> taken(ctx.num_positions(), false);
  for (std::size_t l = 0; l < num_beams; ++l)
    if (l != k && a[l] != kUnassigned) taken[a[l]] = true;

  const double scale = std::max(1.0, potential_offset(ctx));
  const double incumbent =
      a[k] == kUnassigned ? std::numeric_limits<double>::infinity() : evaluate(a[k]);
  const double threshold =
      a[k] == kUnassigned ? incumbent : incumbent - kImprovementTol * scale;

  std::size_t best = a[k];
  double best_value = threshold;
  for (std::size_t c = 0; c < ctx.num_positions(); ++c) {
    if (taken[c] || c == a[k]) continue;
    const double value = evaluate(c);
    if (value < best_value) {
      best_value = value;
      best = c;
    }
  }

  Assignment next = current;
  next.beams[k] = best;
  return next;
}

NashResult best_response_dynamics(Assignment initial, const GameContext& ctx, int iteration_max) {
  validate(initial, ctx);
  NashResult result;
  result.assignment = std::move(initial);
  result.potential_trace.push_back(potential(result.assignment, ctx));

  for (int sweep = 0; sweep < iteration_max; ++sweep) {
    const Assignment before = result.assignment;
    for (std::size_t k = 0; k < result.assignment.num_beams(); ++k)
      result.assignment = best_response(k, result.assignment, ctx);
    ++result.sweeps;
    result.potential_trace.push_back(potential(result.assignment, ctx));
    if (result.assignment == before) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Assignment random_assignment(std::size_t num_beams, const GameContext& ctx,
                             std::mt19937_64& rng) {
  if (ctx.num_positions() < num_beams)
    throw std::invalid_argument("random_assignment: fewer positions than beams");
  std::vector<std::size_t> order(ctx.num_positions());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: only the first K slots are needed.
  for (std::size_t i = 0; i < num_beams; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  order.resize(num_beams);
  return Assignment{std::move(order)};
}

NashResult find_ne(std::size_t num_beams, const GameContext& ctx, std::mt19937_64& rng,
                   int iteration_max) {
  ctx.validate();
  if (ctx.num_positions() < num_beams)
    throw std::invalid_argument("find_ne: requires |B| >= K");
  return best_response_dynamics(random_assignment(num_beams, ctx, rng), ctx, iteration_max);
}

}  // namespace bh::game
