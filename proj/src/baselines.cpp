#include "bhsim/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bh::baselines {

void validate(const GaConfig& cfg) {
  if (cfg.generations < 1) throw std::invalid_argument("ga generations must be >= 1");
  if (cfg.population < 1) throw std::invalid_argument("ga population must be >= 1");
  if (!(cfg.p_mut >= 0.0 && cfg.p_mut <= 1.0))
    throw std::invalid_argument("ga p_mut must lie in [0, 1]");
  if (!(cfg.p_cro >= 0.0 && cfg.p_cro <= 1.0))
    throw std::invalid_argument("ga p_cro must lie in [0, 1]");
}

std::vector<std::size_t> g_bh_schedule(std::span<const double> demands, std::size_t num_beams) {
  std::vector<std::size_t> order;
  for (std::size_t n = 0; n < demands.size(); ++n)
    if (demands[n] > 0.0) order.push_back(n);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return demands[a] > demands[b]; });
  if (order.size() > num_beams) order.resize(num_beams);
  return order;
}

PoweredSchedule g_bhpo_schedule(std::span<const double> demands, std::size_t num_beams,
                                const Eigen::MatrixXd& gains, std::span<const double> sink_caps,
                                double p_max, double p_noise, double bits_scale) {
  PoweredSchedule out;
  out.positions = g_bh_schedule(demands, num_beams);
  const auto k = static_cast<Eigen::Index>(out.positions.size());
  if (k == 0) return out;

  power::PowerProblem problem;
  problem.gains.resize(k, k);
  problem.demands.resize(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    problem.demands(i) = sink_caps[out.positions[static_cast<std::size_t>(i)]];
    for (Eigen::Index j = 0; j < k; ++j)
      problem.gains(i, j) = gains(static_cast<Eigen::Index>(out.positions[static_cast<std::size_t>(i)]),
                                  static_cast<Eigen::Index>(out.positions[static_cast<std::size_t>(j)]));
  }
  problem.p_max = p_max;
  problem.p_noise = p_noise;
  problem.bits_scale = bits_scale;
  out.power = power::optimize(problem).power;
  return out;
}

std::vector<std::size_t> rr_schedule(RoundRobinCursor& cursor, std::size_t num_beams,
                                     std::size_t num_positions) {
  if (num_positions == 0) return {};
  if (cursor.next_index >= num_positions)
    throw std::invalid_argument("rr_schedule: cursor out of range");
  const std::size_t count = std::min(num_beams, num_positions);
  std::vector<std::size_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = (cursor.next_index + i) % num_positions;
  cursor.next_index = (cursor.next_index + num_beams) % num_positions;
  return out;
}

std::vector<std::size_t> max_sinr_schedule(std::span<const std::size_t> candidates,
                                           const Eigen::MatrixXd& gains, std::size_t num_beams,
                                           double p_ave, double p_noise) {
  const auto g = [&](std::size_t n, std::size_t m) {
    return gains(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  };
  const auto sum_sinr = [&](const std::vector<std::size_t>& set) {
    double total = 0.0;
    for (std::size_t n : set) {
      double interference = p_noise;
      for (std::size_t m : set)
        if (m != n) interference += p_ave * g(n, m);
      total += p_ave * g(n, n) / interference;
    }
    return total;
  };

  std::vector<std::size_t> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());
  std::vector<std::size_t> chosen;
  std::vector<bool> used(pool.size(), false);
  const std::size_t target = std::min(num_beams, pool.size());
  while (chosen.size() < target) {
    std::size_t best = pool.size();
    double best_value = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      chosen.push_back(pool[i]);
      const double value = sum_sinr(chosen);
      chosen.pop_back();
      if (value > best_value) {
        best_value = value;
        best = i;
      }
    }
    used[best] = true;
    chosen.push_back(pool[best]);
  }
  return chosen;
}

namespace {

using Chromosome = std::vector<std::size_t>;

std::size_t random_unused(const Chromosome& genes, std::size_t skip_slot, std::size_t n,
                          std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (;;) {
    const std::size_t c = pick(rng);
    bool clash = false;
    for (std::size_t i = 0; i < genes.size(); ++i)
      if (i != skip_slot && genes[i] == c) clash = true;
    if (!clash) return c;
  }
}

// Replaces the second and later copies of a gene with random unused positions.
void repair(Chromosome& genes, std::size_t n, std::mt19937_64& rng) {
  for (std::size_t i = 1; i < genes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (genes[j] == genes[i]) {
        genes[i] = random_unused(genes, i, n, rng);
        break;
      }
}

}  // namespace

GaResult ga_schedule(std::size_t num_beams, const game::GameContext& ctx, const GaConfig& cfg,
                     std::mt19937_64& rng) {
  validate(cfg);
  ctx.validate();
  const std::size_t n = ctx.num_positions();
  if (n < num_beams) throw std::invalid_argument("ga_schedule: requires |B| >= K");

  const double offset = game::potential_offset(ctx);
  const auto fitness = [&](const Chromosome& c) { return game::shared_utility(c, ctx) + offset; };

  const auto pop_size = static_cast<std::size_t>(cfg.population);
  std::vector<Chromosome> pop(pop_size);
  std::vector<double> fit(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    pop[i] = game::random_assignment(num_beams, ctx, rng).beams;
    fit[i] = fitness(pop[i]);
  }

  const auto best_index = [&]() {
    return static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
  };

  GaResult result;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_member(0, pop_size - 1);
  const auto tournament = [&]() -> const Chromosome& {
    const std::size_t a = pick_member(rng);
    const std::size_t b = pick_member(rng);
    if (fit[b] < fit[a] || (fit[b] == fit[a] && b < a)) return pop[b];
    return pop[a];
  };

  for (int gen = 0; gen < cfg.generations; ++gen) {
    std::vector<Chromosome> next;
    std::vector<double> next_fit;
    next.reserve(pop_size);
    next_fit.reserve(pop_size);
    const std::size_t elite = best_index();
    next.push_back(pop[elite]);
    next_fit.push_back(fit[elite]);

    while (next.size() < pop_size) {
      Chromosome c1 = tournament();
      Chromosome c2 = tournament();
      if (num_beams >= 2 && unit(rng) < cfg.p_cro) {
        std::uniform_int_distribution<std::size_t> cut_dist(1, num_beams - 1);
        const std::size_t cut = cut_dist(rng);
        for (std::size_t i = cut; i < num_beams; ++i) std::swap(c1[i], c2[i]);
        repair(c1, n, rng);
        repair(c2, n, rng);
      }
      for (Chromosome* child : {&c1, &c2}) {
        for (std::size_t i = 0; i < num_beams; ++i)
          if (unit(rng) < cfg.p_mut && n > num_beams) (*child)[i] = random_unused(*child, i, n, rng);
        if (next.size() < pop_size) {
          next_fit.push_back(fitness(*child));
          next.push_back(std::move(*child));
        }
      }
    }
    pop = std::move(next);
    fit = std::move(next_fit);
    result.best_per_generation.push_back(fit[best_index()]);
  }

  const std::size_t best = best_index();
  result.best.beams = pop[best];
  result.best_fitness = fit[best];
  return result;
}

}  // namespace bh::baselines
