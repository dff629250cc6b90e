#include "bhsim/self_check.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "bhsim/channel.hpp"
#include "bhsim/engine.hpp"
#include "bhsim/game_scheduler.hpp"
#include "bhsim/metrics.hpp"
#include "bhsim/power_optimizer.hpp"

namespace bh::self_check {

namespace {

// Random game context with gains shaped like a real beam layout: a strong
// diagonal and leakage a few to tens of dB down.
game::GameContext random_context(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> diag(2e-12, 8e-12);
  std::uniform_real_distribution<double> leak_db(-30.0, -8.0);
  std::uniform_real_distribution<double> demand(1e4, 2e5);
  game::GameContext ctx;
  ctx.gains.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double d = diag(rng);
    for (std::size_t j = 0; j < n; ++j)
      ctx.gains(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          i == j ? d : d * std::pow(10.0, leak_db(rng) / 10.0);
  }
  ctx.demands.resize(n);
  for (auto& d : ctx.demands) d = demand(rng);
  ctx.p_ave = 250.0 / 8.0;
  ctx.p_noise = 7.96e-13;
  ctx.bits_scale = 1e5;
  return ctx;
}

power::PowerProblem problem_from(const game::GameContext& ctx, std::size_t k) {
  power::PowerProblem p;
  const auto kk = static_cast<Eigen::Index>(k);
  p.gains = ctx.gains.topLeftCorner(kk, kk);
  p.demands.resize(kk);
  for (Eigen::Index i = 0; i < kk; ++i) p.demands(i) = ctx.demands[static_cast<std::size_t>(i)];
  p.p_max = 250.0;
  p.p_noise = ctx.p_noise;
  p.bits_scale = ctx.bits_scale;
  return p;
}

bool potential_identity(std::mt19937_64& rng) {
  for (int trial = 0; trial < 200; ++trial) {
    const auto ctx = random_context(8, rng);
    auto a = game::random_assignment(3, ctx, rng);
    auto b = a;
    std::uniform_int_distribution<std::size_t> pick(0, 7);
    std::size_t target = pick(rng);
    while (a.contains(target)) target = pick(rng);
    b.beams[trial % 3] = target;
    const double du = game::utility(b, ctx) - game::utility(a, ctx);
    const double dp = game::potential(b, ctx) - game::potential(a, ctx);
    if (std::abs(du - dp) > 1e-9 * std::max(1.0, std::abs(dp))) return false;
  }
  return true;
}

bool best_response_monotone(std::mt19937_64& rng) {
  for (int trial = 0; trial < 20; ++trial) {
    const auto ctx = random_context(20, rng);
    const auto ne = game::find_ne(4, ctx, rng);
    for (std::size_t i = 1; i < ne.potential_trace.size(); ++i)
      if (ne.potential_trace[i] > ne.potential_trace[i - 1]) return false;
    if (!ne.converged) return false;
  }
  return true;
}

bool single_beam_closed_form(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> demand(1e3, 2e6);
  for (int trial = 0; trial < 20; ++trial) {
    auto p = problem_from(random_context(1, rng), 1);
    p.demands(0) = demand(rng);
    const double h = p.gains(0, 0);
    const double exact =
        std::min(p.p_max, (std::exp2(p.demands(0) / p.bits_scale) - 1.0) * p.p_noise / h);
    const double got = power::optimize(p).power(0);
    if (std::abs(got - exact) > 1e-6 * exact) return false;
  }
  return true;
}

bool gradient_matches(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> frac(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = problem_from(random_context(4, rng), 4);
    Eigen::VectorXd x(4);
    for (Eigen::Index i = 0; i < 4; ++i) x(i) = 60.0 * frac(rng);
    const Eigen::VectorXd g = power::objective_gradient(x, p);
    for (Eigen::Index i = 0; i < 4; ++i) {
      const double h = 1e-4 * x(i);
      Eigen::VectorXd up = x, down = x;
      up(i) += h;
      down(i) -= h;
      const double fd = (power::objective(up, p) - power::objective(down, p)) / (2.0 * h);
      if (std::abs(fd - g(i)) > 1e-5 * std::max(std::abs(g(i)), 1e-6 * g.cwiseAbs().maxCoeff()))
        return false;
    }
  }
  return true;
}

bool optimizer_descends(std::mt19937_64& rng) {
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = problem_from(random_context(4, rng), 4);
    const auto sol = power::optimize(p);
    if (power::objective(sol.power, p) > power::objective(power::average_power(p), p)) return false;
    if (sol.power.sum() > p.p_max * (1.0 + 1e-12) || sol.power.minCoeff() < 0.0) return false;
  }
  return true;
}

bool antenna_half_power() {
  for (double theta : {0.5, 1.66, 4.0}) {
    const channel::AntennaPattern pat{36.2, theta};
    if (channel::antenna_gain(pat, 0.0) != channel::db_to_linear(36.2)) return false;
    const double drop = channel::linear_to_db(channel::antenna_gain(pat, theta)) - 36.2;
    if (std::abs(drop + 3.0) > 0.05) return false;
  }
  return true;
}

bool jfi_bounds() {
  const std::vector<double> equal(10, 0.4);
  std::vector<double> one_hot(10, 0.0);
  one_hot[3] = 0.7;
  return metrics::jfi(equal) == 1.0 && metrics::jfi(one_hot) == 0.1;
}

bool engine_small_run() {
  engine::SimConfig cfg;
  cfg.rings = 2;
  cfg.num_beams = 4;
  cfg.t_max = 0.2;
  cfg.seed = 11;
  const auto a = engine::run(cfg);
  const auto b = engine::run(cfg);
  const auto& d = a.diagnostics;
  return a.summary.total_served_bits == b.summary.total_served_bits &&
         a.summary.sod_per_slot == b.summary.sod_per_slot &&
         d.total_arrived == d.total_served + d.total_queued && d.max_illuminated <= 4 &&
         d.max_power_sum <= cfg.p_max + 1e-8;
}

}  // namespace

int run_all(std::ostream& out) {
  std::mt19937_64 rng(20240611);
  const std::vector<std::pair<std::string, std::function<bool()>>> checks = {
      {"potential identity under unilateral deviation", [&] { return potential_identity(rng); }},
      {"best-response potential is non-increasing", [&] { return best_response_monotone(rng); }},
      {"single-beam power matches closed form", [&] { return single_beam_closed_form(rng); }},
      {"objective gradient matches finite differences", [&] { return gradient_matches(rng); }},
      {"optimized power beats the average split", [&] { return optimizer_descends(rng); }},
      {"antenna pattern peak and half-power angle", antenna_half_power},
      {"JFI equal and one-hot values", jfi_bounds},
      {"engine determinism, conservation and budgets", engine_small_run},
  };
  int failures = 0;
  for (const auto& [name, check] : checks) {
    bool ok = false;
    std::string detail;
    try {
      ok = check();
    } catch (const std::exception& e) {
      detail = std::string(" (") + e.what() + ")";
    }
    if (!ok) ++failures;
    out << (ok ? "PASS " : "FAIL ") << name << detail << '\n';
  }
  return failures;
}

}  // namespace bh::self_check
