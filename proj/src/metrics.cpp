#include "bhsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bh::metrics {

double sod_cost(std::span<const double> offered, std::span<const double> demands) {
  if (offered.size() != demands.size())
    throw std::invalid_argument("sod_cost: offered and demands differ in length");
  double total = 0.0;
  for (std::size_t n = 0; n < offered.size(); ++n) {
    const double gap = offered[n] - demands[n];
    total += gap * gap;
  }
  return total;
}

double satisfaction(double served, double demanded) {
  if (demanded < 0.0) throw std::invalid_argument("satisfaction: demanded must be >= 0");
  if (demanded == 0.0) return 1.0;
  return served / demanded;
}

double jfi(std::span<const double> s) {
  if (s.empty()) throw std::invalid_argument("jfi: empty input");
  double peak = 0.0;
  for (double x : s) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) throw std::invalid_argument("jfi: undefined for an all-zero vector");
  // Normalizing by the peak makes equal and one-hot inputs exact.
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : s) {
    const double v = x / peak;
    sum += v;
    sum_sq += v * v;
  }
  return sum * sum / (static_cast<double>(s.size()) * sum_sq);
}

double RunSummary::mean_sod() const {
  if (sod_per_slot.empty()) return 0.0;
  return std::accumulate(sod_per_slot.begin(), sod_per_slot.end(), 0.0) /
         static_cast<double>(sod_per_slot.size());
}

RunSummary summarize(std::span<const double> served, std::span<const double> demanded,
                     double duration, std::vector<double> sod_per_slot) {
  if (served.size() != demanded.size())
    throw std::invalid_argument("summarize: served and demanded differ in length");
  RunSummary out;
  out.duration = duration;
  out.sod_per_slot = std::move(sod_per_slot);
  out.per_position.resize(served.size());
  std::vector<double> sat(served.size());
  for (std::size_t n = 0; n < served.size(); ++n) {
    out.per_position[n] = {served[n], demanded[n], satisfaction(served[n], demanded[n])};
    sat[n] = out.per_position[n].satisfaction;
    out.total_served_bits += served[n];
  }
  // Every satisfaction is 0 only if nothing was ever served while demand existed.
  out.jfi = sat.empty() ? 1.0 : (std::accumulate(sat.begin(), sat.end(), 0.0) > 0.0 ? jfi(sat) : 0.0);
  return out;
}

double throughput(const RunSummary& summary) {
  if (!(summary.duration > 0.0)) throw std::invalid_argument("throughput: duration must be > 0");
  return summary.total_served_bits / summary.duration;
}

double position_throughput(const RunSummary& summary, std::size_t n) {
  if (!(summary.duration > 0.0)) throw std::invalid_argument("throughput: duration must be > 0");
  return summary.per_position.at(n).served_bits / summary.duration;
}

}  // namespace bh::metrics
