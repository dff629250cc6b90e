#include "bhsim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bh::channel {

namespace {

constexpr double kSeriesLimit = 12.0;
constexpr double kPatternConstant = 2.07123;

double series_j(int order, double x) {
  const double half = 0.5 * x;
  const double q = -half * half;
  // First term (x/2)^n / n!
  double term = 1.0;
  for (int i = 1; i <= order; ++i) term *= half / i;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > 2 * half) break;
  }
  return sum;
}

// Miller backward recurrence normalized by J0 + 2 * sum(J_2k) = 1.
double miller_j(int order, double x) {
  constexpr double kBig = 1e10;
  constexpr double kBigInv = 1e-10;
  const double two_over_x = 2.0 / x;
  int start = static_cast<int>(x + 30.0 + 8.0 * std::sqrt(x)) + order;
  start += start % 2;

  bool accumulate = false;
  double bj_next = 0.0, bj = 1.0, sum = 0.0, ans = 0.0;
  for (int j = start; j > 0; --j) {
    const double bj_prev = j * two_over_x * bj - bj_next;
    bj_next = bj;
    bj = bj_prev;
    if (std::abs(bj) > kBig) {
      bj *= kBigInv;
      bj_next *= kBigInv;
      ans *= kBigInv;
      sum *= kBigInv;
    }
    if (accumulate) sum += bj;
    accumulate = !accumulate;
    if (j == order) ans = bj_next;
  }
  sum = 2.0 * sum - bj;
  return ans / sum;
}

}  // namespace

double bessel_j(int order, double x) {
  if (order != 1 && order != 3)
    throw std::invalid_argument("bessel_j: unsupported order " + std::to_string(order));
  if (!std::isfinite(x)) throw std::invalid_argument("bessel_j: argument must be finite");
  const double ax = std::abs(x);
  if (ax == 0.0) return 0.0;
  const double value = ax <= kSeriesLimit ? series_j(order, ax) : miller_j(order, ax);
  // Both supported orders are odd functions.
  return x < 0.0 ? -value : value;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

void validate(const AntennaPattern& pattern) {
  if (!std::isfinite(pattern.g_max_dbi))
    throw std::invalid_argument("antenna g_max must be finite");
  if (!(pattern.theta_3db > 0.0 && pattern.theta_3db < 90.0))
    throw std::invalid_argument("antenna theta_3db must lie in (0, 90) degrees");
}

void validate(const LinkBudget& b) {
  if (!(b.carrier_freq > 0.0)) throw std::invalid_argument("carrier_freq must be > 0");
  if (!(b.other_loss_db >= 0.0)) throw std::invalid_argument("other_loss_db must be >= 0");
  if (!(b.noise_power > 0.0)) throw std::invalid_argument("noise_power must be > 0");
  if (!(b.bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
  if (!(b.slot > 0.0)) throw std::invalid_argument("slot must be > 0");
}

double pattern_argument(const AntennaPattern& pattern, double theta_deg) {
  return kPatternConstant * std::sin(geo::deg2rad(theta_deg)) /
         std::sin(geo::deg2rad(pattern.theta_3db));
}

double antenna_gain(const AntennaPattern& pattern, double theta_deg) {
  if (!(theta_deg >= 0.0 && theta_deg < 90.0))
    throw std::invalid_argument("antenna_gain: theta must lie in [0, 90) degrees");
  const double g_max = db_to_linear(pattern.g_max_dbi);
  const double u = pattern_argument(pattern, theta_deg);

  double bracket;
  if (u == 0.0) {
    // J1(u)/(2u) -> 1/4 and 36 J3(u)/u^3 -> 36/48.
    return g_max;
  } else if (u < 1e-4) {
    bracket = 1.0 - 0.078125 * u * u;
  } else {
    bracket = bessel_j(1, u) / (2.0 * u) + 36.0 * bessel_j(3, u) / (u * u * u);
  }
  return g_max * bracket * bracket;
}

double free_space_loss_db(double distance, double carrier_freq) {
  return 20.0 * std::log10(4.0 * geo::kPi * distance * carrier_freq / kSpeedOfLight);
}

double path_loss(double distance, const LinkBudget& budget) {
  if (!(distance > 0.0)) throw std::invalid_argument("path_loss: distance must be > 0");
  return db_to_linear(-(free_space_loss_db(distance, budget.carrier_freq) + budget.other_loss_db));
}

double channel_gain(const geo::EcefVector& sat, const geo::EcefVector& boresight_center,
                    const geo::EcefVector& node, const AntennaPattern& tx,
                    const AntennaPattern& rx, const LinkBudget& budget) {
  const double theta = geo::off_axis_angle(sat, boresight_center, node);
  return antenna_gain(tx, theta) * antenna_gain(rx, 0.0) *
         path_loss(geo::slant_range(sat, node), budget);
}

void ChannelMatrix::validate() const {
  const auto n = static_cast<Eigen::Index>(positions.size());
  if (selected_sink.size() != positions.size() || gains.rows() != n || gains.cols() != n)
    throw std::invalid_argument("ChannelMatrix: inconsistent dimensions");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (!(std::isfinite(gains(i, j)) && gains(i, j) > 0.0))
        throw std::invalid_argument("ChannelMatrix: gains must be finite and > 0");
}

double sinr(std::size_t n, std::span<const std::size_t> active, std::span<const double> power,
            const ChannelMatrix& h, double noise_power) {
  if (std::find(active.begin(), active.end(), n) == active.end()) return 0.0;
  double interference = 0.0;
  for (std::size_t m : active)
    if (m != n) interference += power[m] * h(n, m);
  return power[n] * h(n, n) / (interference + noise_power);
}

double offered_bits(double sinr, const LinkBudget& budget) {
  if (sinr < 0.0) throw std::invalid_argument("offered_bits: sinr must be >= 0");
  return budget.bits_scale() * std::log2(1.0 + sinr);
}

}  // namespace bh::channel
