// Independent reference computations used only by the tests. None of these
// call into the library's own numerics.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "bhsim/game_scheduler.hpp"
#include "bhsim/power_optimizer.hpp"

namespace oracle {

// Ascending power series in long double; fine for |x| <= 20.
inline double bessel_series(int order, double x) {
  const long double half = static_cast<long double>(x) / 2.0L;
  long double term = 1.0L;
  for (int i = 1; i <= order; ++i) term *= half / i;
  long double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= -half * half / (static_cast<long double>(m) * (m + order));
    sum += term;
    if (std::fabs(term) < 1e-30L) break;
  }
  return static_cast<double>(sum);
}

inline double pattern(double theta_deg, double theta_3db_deg) {
  const double pi = std::acos(-1.0);
  const double u = 2.07123 * std::sin(theta_deg * pi / 180.0) / std::sin(theta_3db_deg * pi / 180.0);
  if (u == 0.0) return 1.0;
  const double b = std::cyl_bessel_j(1.0, u) / (2.0 * u) + 36.0 * std::cyl_bessel_j(3.0, u) / (u * u * u);
  return b * b;
}

// Shannon bits of each beam in `beams` (local indices) under equal power.
inline std::vector<double> equal_power_bits(const std::vector<std::size_t>& beams,
                                            const bh::game::GameContext& ctx) {
  std::vector<double> out;
  for (std::size_t n : beams) {
    double interference = ctx.p_noise;
    for (std::size_t m : beams)
      if (m != n) interference += ctx.p_ave * ctx.gains(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    const double s = ctx.p_ave * ctx.gains(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) / interference;
    out.push_back(ctx.bits_scale * std::log2(1.0 + s));
  }
  return out;
}

// Sum over every context position of (offered - demand)^2.
inline double sod(const std::vector<std::size_t>& beams, const bh::game::GameContext& ctx) {
  const auto bits = equal_power_bits(beams, ctx);
  double total = 0.0;
  for (std::size_t n = 0; n < ctx.demands.size(); ++n) {
    double offered = 0.0;
    for (std::size_t k = 0; k < beams.size(); ++k)
      if (beams[k] == n) offered = bits[k];
    total += (offered - ctx.demands[n]) * (offered - ctx.demands[n]);
  }
  return total;
}

// Every ordered K-tuple of distinct positions in [0, n).
inline std::vector<std::vector<std::size_t>> all_assignments(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(i);
      self(self);
      cur.pop_back();
      used[i] = false;
    }
  };
  rec(rec);
  return out;
}

// True when no single beam can move to an unused position and strictly
// lower the objective.
inline bool is_nash(const std::vector<std::size_t>& a, const bh::game::GameContext& ctx,
                    double rel_tol = 1e-12) {
  const double base = sod(a, ctx);
  const double scale = std::max(1.0, base);
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t c = 0; c < ctx.demands.size(); ++c) {
      if (std::find(a.begin(), a.end(), c) != a.end()) continue;
      auto b = a;
      b[k] = c;
      if (sod(b, ctx) < base - rel_tol * scale) return false;
    }
  return true;
}

// Random instance whose gains look like a real hex layout: a dominant
// diagonal and cross gains 8 to 30 dB down.
inline bh::game::GameContext random_context(std::size_t n, std::mt19937_64& rng,
                                            double demand_lo = 1e4, double demand_hi = 3e5) {
  std::uniform_real_distribution<double> diag(2e-12, 8e-12);
  std::uniform_real_distribution<double> leak_db(-30.0, -8.0);
  std::uniform_real_distribution<double> demand(demand_lo, demand_hi);
  bh::game::GameContext ctx;
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
  ctx.bits_scale = 200e6 * 0.5e-3;
  return ctx;
}

inline bh::power::PowerProblem random_power_problem(std::size_t k, std::mt19937_64& rng,
                                                    double demand_lo = 1e4, double demand_hi = 6e5) {
  const auto ctx = random_context(k, rng, demand_lo, demand_hi);
  bh::power::PowerProblem p;
  p.gains = ctx.gains;
  p.demands = Eigen::Map<const Eigen::VectorXd>(ctx.demands.data(), static_cast<Eigen::Index>(k));
  p.p_max = 250.0;
  p.p_noise = ctx.p_noise;
  p.bits_scale = ctx.bits_scale;
  return p;
}

// Straightforward rate and objective evaluation for the power problem.
inline double rate(const Eigen::VectorXd& p, const bh::power::PowerProblem& pr, Eigen::Index k) {
  double interference = pr.p_noise;
  for (Eigen::Index l = 0; l < p.size(); ++l)
    if (l != k) interference += p(l) * pr.gains(k, l);
  return pr.bits_scale * std::log2(1.0 + p(k) * pr.gains(k, k) / interference);
}

inline double power_objective(const Eigen::VectorXd& p, const bh::power::PowerProblem& pr) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double gap = rate(p, pr, k) - pr.demands(k);
    total += gap * gap;
  }
  return total;
}

struct GridMinimum {
  double best = INFINITY;
  double resolution = 0.0;  // largest objective change to a feasible grid neighbour of the best point
};

// Brute-force minimum of a two-beam problem over the (m+1)^2 grid on
// [0, p_max]^2, keeping points that satisfy all constraints.
inline GridMinimum power_grid_minimum(const bh::power::PowerProblem& p, int m) {
  const double h = p.p_max / m;
  const auto point = [&](int i, int j) {
    Eigen::VectorXd x(2);
    x << i * h, j * h;
    return x;
  };
  const auto feasible = [&](int i, int j) {
    if (i < 0 || j < 0 || i > m || j > m) return false;
    const Eigen::VectorXd x = point(i, j);
    return x.sum() <= p.p_max * (1 + 1e-12) && rate(x, p, 0) <= p.demands(0) && rate(x, p, 1) <= p.demands(1);
  };
  GridMinimum out;
  int bi = 0, bj = 0;
  for (int i = 0; i <= m; ++i)
    for (int j = 0; i + j <= m; ++j) {
      if (!feasible(i, j)) continue;
      const double f = power_objective(point(i, j), p);
      if (f < out.best) {
        out.best = f;
        bi = i;
        bj = j;
      }
    }
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      if (feasible(bi + di, bj + dj))
        out.resolution = std::max(out.resolution, std::abs(power_objective(point(bi + di, bj + dj), p) - out.best));
  return out;
}

}  // namespace oracle
