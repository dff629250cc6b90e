#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace bh::power {

/// Continuous power split over K already-scheduled beams.
///
///   min  sum_k (R_k(P) - D_k)^2
///   s.t. sum_k P_k <= p_max,  P_k >= 0,  R_k(P) <= D_k
///
/// with R_k(P) = bits_scale * log2(1 + P_k H_kk / (sum_{l!=k} P_l H_kl + p_noise)).
/// D_k is the cap the served sink can absorb this slot.
struct PowerProblem {
  Eigen::MatrixXd gains;    // K x K, row k receives beam k's target
  Eigen::VectorXd demands;  // bits, > 0
  double p_max = 0.0;       // W
  double p_noise = 0.0;     // W
  double bits_scale = 0.0;  // B * T_b

  std::size_t size() const { return static_cast<std::size_t>(demands.size()); }
  void validate() const;
};

/// Slack-augmented iterate. The slack vector has 2K+1 entries, ordered as
/// [p_max - sum P, P_1..P_K, D_1 - R_1..D_K - R_K].
struct BarrierState {
  Eigen::VectorXd power;
  Eigen::VectorXd slack;
  double mu = 1.0;
};

Eigen::VectorXd rates(const Eigen::VectorXd& power, const PowerProblem& problem);

/// d R_k / d P_j.
Eigen::MatrixXd rate_jacobian(const Eigen::VectorXd& power, const PowerProblem& problem);

double objective(const Eigen::VectorXd& power, const PowerProblem& problem);
Eigen::VectorXd objective_gradient(const Eigen::VectorXd& power, const PowerProblem& problem);
Eigen::MatrixXd objective_hessian(const Eigen::VectorXd& power, const PowerProblem& problem);

/// Slacks that make every inequality an equality at `power` (may be <= 0
/// when `power` is infeasible).
Eigen::VectorXd constraint_slacks(const Eigen::VectorXd& power, const PowerProblem& problem);

/// objective(P) - mu * sum ln(s_i). Throws if any slack is <= 0.
double barrier_value(const BarrierState& state, const PowerProblem& problem);

/// P_max / K on every beam.
Eigen::VectorXd average_power(const PowerProblem& problem);

struct OptimizerOptions {
  double tol = 1e-8;            // scaled stationarity target at the final mu
  int outer_max = 100;          // barrier-parameter updates
  int inner_max = 200;          // Newton / trust-region steps per mu
  double mu_decrease = 0.2;
  double mu_floor = 1e-10;      // stop once mu <= mu_floor * mu_0
};

struct PowerSolution {
  Eigen::VectorXd power;
  bool converged = false;
  int outer_iterations = 0;
  int newton_steps = 0;
  int trust_region_steps = 0;
  double stationarity = 0.0;          // at the final mu, scaled
  std::vector<double> objective_trace;  // objective after each mu
};

/// Scaled first-order residual of the barrier subproblem:
/// ||grad f_mu(P)||_inf * p_max / mu_0.
double barrier_stationarity(const Eigen::VectorXd& power, double mu, double mu0,
                            const PowerProblem& problem);

/// Log-barrier interior-point solve started from the average allocation.
/// The returned powers are feasible and never worse than P_max/K per beam.
PowerSolution optimize(const PowerProblem& problem, const OptimizerOptions& options = {});

}  // namespace bh::power
