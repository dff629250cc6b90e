#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "bhsim/geometry.hpp"

namespace bh::channel {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Bessel function of the first kind, orders 1 and 3 only (the two the
/// tapered-aperture pattern needs). Power series up to |x| = 12, Miller
/// backward recurrence beyond. Absolute accuracy ~1e-12 for |x| <= 100.
/// Throws std::invalid_argument for any other order.
double bessel_j(int order, double x);

struct AntennaPattern {
  double g_max_dbi = 0.0;
  double theta_3db = 1.66;  // degrees, half-power angle
};

struct LinkBudget {
  double carrier_freq = 20e9;       // Hz
  double other_loss_db = 7.0;       // dB
  double noise_power = 7.96e-13;    // W
  double bandwidth = 200e6;         // Hz
  double slot = 0.5e-3;             // s, one BH slot
  double bits_scale() const { return bandwidth * slot; }
};

double db_to_linear(double db);
double linear_to_db(double linear);

void validate(const AntennaPattern& pattern);
void validate(const LinkBudget& budget);

/// Normalized pattern argument u(theta) = 2.07123 sin(theta) / sin(theta_3db).
double pattern_argument(const AntennaPattern& pattern, double theta_deg);

/// Linear gain at `theta_deg` off boresight, 0 <= theta < 90.
double antenna_gain(const AntennaPattern& pattern, double theta_deg);

double free_space_loss_db(double distance, double carrier_freq);

/// Linear attenuation 10^(-(FSPL + PL_o)/10).
double path_loss(double distance, const LinkBudget& budget);

/// Gain from the beam whose boresight targets `boresight_center` to a sink
/// at `node`. Receive antennas track the satellite, so G_R is evaluated on
/// axis.
double channel_gain(const geo::EcefVector& sat, const geo::EcefVector& boresight_center,
                    const geo::EcefVector& node, const AntennaPattern& tx,
                    const AntennaPattern& rx, const LinkBudget& budget);

/// Linear gains between a subset of beam positions. Row n is the selected
/// sink of positions[n]; column m is the beam pointed at positions[m].
struct ChannelMatrix {
  std::vector<std::size_t> positions;
  std::vector<int> selected_sink;
  Eigen::MatrixXd gains;

  std::size_t size() const { return positions.size(); }
  double operator()(std::size_t n, std::size_t m) const { return gains(n, m); }

  /// Throws unless shapes agree and every gain is finite and > 0.
  void validate() const;
};

/// SINR of local row `n` when the positions listed in `active` transmit with
/// `power` (indexed like the matrix rows). Zero when n is not active.
double sinr(std::size_t n, std::span<const std::size_t> active, std::span<const double> power,
            const ChannelMatrix& h, double noise_power);

/// Shannon bits deliverable in one slot.
double offered_bits(double sinr, const LinkBudget& budget);

}  // namespace bh::channel
