#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bh::metrics {

/// Sum of squared gaps between offered and demanded bits. Throws on a
/// length mismatch.
double sod_cost(std::span<const double> offered, std::span<const double> demands);

/// served / demanded; a position with no demand counts as fully satisfied.
double satisfaction(double served, double demanded);

/// Jain fairness index (sum S)^2 / (N sum S^2). Throws on an empty or
/// all-zero input.
double jfi(std::span<const double> satisfactions);

struct PositionSummary {
  double served_bits = 0.0;
  double demanded_bits = 0.0;
  double satisfaction = 1.0;
};

struct RunSummary {
  double total_served_bits = 0.0;
  double duration = 0.0;  // seconds
  std::vector<PositionSummary> per_position;
  std::vector<double> sod_per_slot;
  double jfi = 1.0;

  double mean_sod() const;
};

/// Builds per-position satisfaction and the JFI from cumulative served and
/// arrived bits.
RunSummary summarize(std::span<const double> served, std::span<const double> demanded,
                     double duration, std::vector<double> sod_per_slot);

/// System throughput in bits/s.
double throughput(const RunSummary& summary);

/// Throughput of one position in bits/s.
double position_throughput(const RunSummary& summary, std::size_t n);

}  // namespace bh::metrics
