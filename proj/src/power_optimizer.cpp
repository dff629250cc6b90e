#include "bhsim/power_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace bh::power {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kFractionToBoundary = 0.995;
constexpr double kArmijo = 1e-4;

struct RateTerms {
  VectorXd total;         // T_k = sum_l H_kl P_l + N
  VectorXd interference;  // I_k = T_k - H_kk P_k
};

RateTerms rate_terms(const VectorXd& p, const PowerProblem& problem) {
  RateTerms t;
  t.total = problem.gains * p + VectorXd::Constant(p.size(), problem.p_noise);
  t.interference = t.total - problem.gains.diagonal().cwiseProduct(p);
  return t;
}

// Hessian of R_k with respect to P.
MatrixXd rate_hessian(Index k, const VectorXd& p, const RateTerms& t, const PowerProblem& problem) {
  const double c = problem.bits_scale / std::numbers::ln2;
  const VectorXd row = problem.gains.row(k).transpose();
  VectorXd off = row;
  off(k) = 0.0;
  (void)p;
  return c * (off * off.transpose() / (t.interference(k) * t.interference(k)) -
              row * row.transpose() / (t.total(k) * t.total(k)));
}

struct BarrierEval {
  double value = 0.0;
  VectorXd gradient;
  MatrixXd hessian;
};

bool strictly_feasible(const VectorXd& s) { return (s.array() > 0.0).all(); }

double barrier_objective(const VectorXd& p, double mu, const PowerProblem& problem) {
  const VectorXd s = constraint_slacks(p, problem);
  if (!strictly_feasible(s)) return std::numeric_limits<double>::infinity();
  return objective(p, problem) - mu * s.array().log().sum();
}

BarrierEval evaluate_barrier(const VectorXd& p, double mu, const PowerProblem& problem,
                             bool with_hessian) {
  const Index k_count = p.size();
  const VectorXd s = constraint_slacks(p, problem);
  const RateTerms t = rate_terms(p, problem);
  const MatrixXd jac = rate_jacobian(p, problem);
  const VectorXd err = rates(p, problem) - problem.demands;

  BarrierEval e;
  e.value = err.squaredNorm() - mu * s.array().log().sum();

  // Gradient of each slack: s_0 -> -1, s_{1+k} -> e_k, s_{1+K+k} -> -grad R_k.
  e.gradient = 2.0 * jac.transpose() * err;
  e.gradient += VectorXd::Constant(k_count, mu / s(0));
  for (Index k = 0; k < k_count; ++k) e.gradient(k) -= mu / s(1 + k);
  for (Index k = 0; k < k_count; ++k)
    e.gradient += mu / s(1 + k_count + k) * jac.row(k).transpose();

  if (!with_hessian) return e;

  e.hessian = 2.0 * jac.transpose() * jac;
  e.hessian += MatrixXd::Constant(k_count, k_count, mu / (s(0) * s(0)));
  for (Index k = 0; k < k_count; ++k) {
    e.hessian(k, k) += mu / (s(1 + k) * s(1 + k));
    const MatrixXd hk = rate_hessian(k, p, t, problem);
    const double sk = s(1 + k_count + k);
    const VectorXd gk = jac.row(k).transpose();
    e.hessian += 2.0 * err(k) * hk;
    e.hessian += mu * (gk * gk.transpose() / (sk * sk) + hk / sk);
  }
  e.hessian = 0.5 * (e.hessian + e.hessian.transpose());
  return e;
}

// Truncated conjugate gradients on m(d) = g'd + d'Hd/2 within ||d|| <= radius.
VectorXd steihaug_cg(const MatrixXd& h, const VectorXd& g, double radius) {
  const Index n = g.size();
  VectorXd d = VectorXd::Zero(n);
  VectorXd r = g;
  VectorXd dir = -r;
  const double stop = 1e-12 * g.norm();
  if (g.norm() == 0.0) return d;

  const auto to_boundary = [&](const VectorXd& from, const VectorXd& along) {
    const double a = along.squaredNorm();
    const double b = 2.0 * from.dot(along);
    const double c = from.squaredNorm() - radius * radius;
    const double tau = (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a);
    return VectorXd(from + tau * along);
  };

  for (Index it = 0; it < 2 * n + 5; ++it) {
    const VectorXd hd = h * dir;
    const double curvature = dir.dot(hd);
    if (curvature <= 0.0) return to_boundary(d, dir);
    const double alpha = r.squaredNorm() / curvature;
    const VectorXd next = d + alpha * dir;
    if (next.norm() >= radius) return to_boundary(d, dir);
    const VectorXd r_next = r + alpha * hd;
    d = next;
    if (r_next.norm() <= stop) return d;
    const double beta = r_next.squaredNorm() / r.squaredNorm();
    dir = -r_next + beta * dir;
    r = r_next;
  }
  return d;
}

// Monotone power-control pass from the average allocation: each beam keeps
// at most P_max/K and never more than it needs to reach its cap. The limit
// satisfies every constraint and is no worse than the average allocation.
VectorXd capped_average(const PowerProblem& problem) {
  const VectorXd p_avg = average_power(problem);
  const VectorXd threshold =
      (problem.demands / problem.bits_scale).unaryExpr([](double x) { return std::exp2(x) - 1.0; });
  VectorXd p = p_avg;
  for (int it = 0; it < 1000; ++it) {
    const RateTerms t = rate_terms(p, problem);
    VectorXd next(p.size());
    for (Index k = 0; k < p.size(); ++k) {
      const double needed = threshold(k) * t.interference(k) / problem.gains(k, k);
      next(k) = std::min(p_avg(k), needed);
    }
    const double change = (next - p).cwiseAbs().maxCoeff();
    p = next;
    if (change <= 1e-15 * problem.p_max) break;
  }
  return p;
}

bool feasible_within(const VectorXd& p, const PowerProblem& problem) {
  const double power_tol = 1e-8 * problem.p_max;
  if (p.sum() > problem.p_max + power_tol) return false;
  if ((p.array() < -power_tol).any()) return false;
  const VectorXd r = rates(p.cwiseMax(0.0), problem);
  for (Index k = 0; k < p.size(); ++k)
    if (r(k) > problem.demands(k) * (1.0 + 1e-6)) return false;
  return true;
}

}  // namespace

void PowerProblem::validate() const {
  const Index k = demands.size();
  if (gains.rows() != k || gains.cols() != k)
    throw std::invalid_argument("PowerProblem: gains must be K x K");
  if (!(gains.array() > 0.0).all() || !gains.allFinite())
    throw std::invalid_argument("PowerProblem: gains must be finite and > 0");
  if (!(demands.array() > 0.0).all())
    throw std::invalid_argument("PowerProblem: demands must be > 0");
  if (!(p_max > 0.0) || !(p_noise > 0.0) || !(bits_scale > 0.0))
    throw std::invalid_argument("PowerProblem: p_max, p_noise and bits_scale must be > 0");
}

VectorXd rates(const VectorXd& power, const PowerProblem& problem) {
  const RateTerms t = rate_terms(power, problem);
  VectorXd r(power.size());
  for (Index k = 0; k < power.size(); ++k)
    r(k) = problem.bits_scale * std::log2(t.total(k) / t.interference(k));
  return r;
}

MatrixXd rate_jacobian(const VectorXd& power, const PowerProblem& problem) {
  const RateTerms t = rate_terms(power, problem);
  const double c = problem.bits_scale / std::numbers::ln2;
  const Index n = power.size();
  MatrixXd jac(n, n);
  for (Index k = 0; k < n; ++k)
    for (Index j = 0; j < n; ++j) {
      const double h = problem.gains(k, j);
      jac(k, j) = c * (h / t.total(k) - (j == k ? 0.0 : h / t.interference(k)));
    }
  return jac;
}

double objective(const VectorXd& power, const PowerProblem& problem) {
  return (rates(power, problem) - problem.demands).squaredNorm();
}

VectorXd objective_gradient(const VectorXd& power, const PowerProblem& problem) {
  return 2.0 * rate_jacobian(power, problem).transpose() * (rates(power, problem) - problem.demands);
}

MatrixXd objective_hessian(const VectorXd& power, const PowerProblem& problem) {
  const RateTerms t = rate_terms(power, problem);
  const MatrixXd jac = rate_jacobian(power, problem);
  const VectorXd err = rates(power, problem) - problem.demands;
  MatrixXd h = 2.0 * jac.transpose() * jac;
  for (Index k = 0; k < power.size(); ++k) h += 2.0 * err(k) * rate_hessian(k, power, t, problem);
  return h;
}

VectorXd constraint_slacks(const VectorXd& power, const PowerProblem& problem) {
  const Index n = power.size();
  VectorXd s(2 * n + 1);
  s(0) = problem.p_max - power.sum();
  s.segment(1, n) = power;
  s.segment(1 + n, n) = problem.demands - rates(power, problem);
  return s;
}

double barrier_value(const BarrierState& state, const PowerProblem& problem) {
  if (state.slack.size() != 2 * state.power.size() + 1)
    throw std::invalid_argument("barrier_value: slack vector must have 2K+1 entries");
  if (!strictly_feasible(state.slack))
    throw std::invalid_argument("barrier_value: slacks must be strictly positive");
  return objective(state.power, problem) - state.mu * state.slack.array().log().sum();
}

VectorXd average_power(const PowerProblem& problem) {
  const Index n = problem.demands.size();
  if (n == 0) return VectorXd();
  return VectorXd::Constant(n, problem.p_max / static_cast<double>(n));
}

double barrier_stationarity(const VectorXd& power, double mu, double mu0,
                            const PowerProblem& problem) {
  const BarrierEval e = evaluate_barrier(power, mu, problem, false);
  return e.gradient.cwiseAbs().maxCoeff() * problem.p_max / mu0;
}

PowerSolution optimize(const PowerProblem& problem, const OptimizerOptions& options) {
  PowerSolution sol;
  if (problem.size() == 0) {
    sol.converged = true;
    return sol;
  }
  problem.validate();

  const VectorXd p_avg = average_power(problem);
  const VectorXd p_capped = capped_average(problem);
  const double mu0 = std::max(1.0, objective(p_avg, problem));

  // Pull the capped allocation strictly inside every constraint.
  VectorXd p = p_capped;
  for (double shrink = 1e-6; shrink < 1.0; shrink *= 4.0) {
    p = (1.0 - shrink) * p_capped;
    if (strictly_feasible(constraint_slacks(p, problem))) break;
  }
  if (!strictly_feasible(constraint_slacks(p, problem))) {
    // Degenerate caps; nothing better than the safe allocation.
    sol.power = p_capped;
    sol.converged = false;
    return sol;
  }

  double radius = 0.1 * problem.p_max;
  double mu = mu0;
  bool inner_ok = true;
  for (int outer = 0; outer < options.outer_max; ++outer) {
    const double inner_tol = std::max(options.tol, mu / mu0);
    inner_ok = false;
    for (int inner = 0; inner < options.inner_max; ++inner) {
      const BarrierEval e = evaluate_barrier(p, mu, problem, true);
      const double residual = e.gradient.cwiseAbs().maxCoeff() * problem.p_max / mu0;
      if (residual <= inner_tol) {
        inner_ok = true;
        break;
      }
      const double noise_floor = 1e-14 * (std::abs(e.value) + mu0);

      // Newton step with fraction-to-boundary and Armijo backtracking.
      bool stepped = false;
      Eigen::LLT<MatrixXd> llt(e.hessian);
      if (llt.info() == Eigen::Success) {
        const VectorXd d = llt.solve(-e.gradient);
        const double slope = e.gradient.dot(d);
        if (slope < 0.0 && d.allFinite()) {
          const VectorXd s_old = constraint_slacks(p, problem);
          double alpha = 1.0;
          for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
            const VectorXd trial = p + alpha * d;
            const VectorXd s_new = constraint_slacks(trial, problem);
            if (!((s_new.array() >= (1.0 - kFractionToBoundary) * s_old.array()).all())) continue;
            const double value = barrier_objective(trial, mu, problem);
            if (value <= e.value + kArmijo * alpha * slope + noise_floor) {
              p = trial;
              stepped = true;
              ++sol.newton_steps;
              break;
            }
          }
        }
      }
      if (stepped) continue;

      // Trust-region fallback with truncated conjugate gradients.
      for (int attempt = 0; attempt < 60 && !stepped; ++attempt) {
        const VectorXd d = steihaug_cg(e.hessian, e.gradient, radius);
        const double predicted = -(e.gradient.dot(d) + 0.5 * d.dot(e.hessian * d));
        const VectorXd trial = p + d;
        const VectorXd s_old = constraint_slacks(p, problem);
        const VectorXd s_new = constraint_slacks(trial, problem);
        double ratio = -1.0;
        if ((s_new.array() >= (1.0 - kFractionToBoundary) * s_old.array()).all() && predicted > 0.0)
          ratio = (e.value - barrier_objective(trial, mu, problem)) / predicted;
        if (ratio > 1e-4) {
          p = trial;
          stepped = true;
          ++sol.trust_region_steps;
          if (ratio > 0.75 && d.norm() > 0.99 * radius) radius = std::min(2.0 * radius, problem.p_max);
        } else {
          radius = 0.25 * std::min(radius, std::max(d.norm(), 1e-300));
        }
        if (radius < 1e-15 * problem.p_max) break;
      }
      if (!stepped) break;  // no progress possible at this mu
    }

    ++sol.outer_iterations;
    sol.objective_trace.push_back(objective(p, problem));
    if (mu <= options.mu_floor * mu0) break;
    mu = std::max(mu * options.mu_decrease, options.mu_floor * mu0);
    radius = std::max(radius, 1e-3 * problem.p_max);
  }

  sol.stationarity = barrier_stationarity(p, mu, mu0, problem);
  sol.converged = inner_ok && mu <= options.mu_floor * mu0 && sol.stationarity <= options.tol;

  // Keep the better of the interior-point result and the capped start.
  if (!feasible_within(p, problem) || objective(p, problem) > objective(p_capped, problem))
    p = p_capped;
  sol.power = p.cwiseMax(0.0);
  return sol;
}

}  // namespace bh::power
