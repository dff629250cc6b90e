#include "bhsim/report.hpp"

#include <fmt/format.h>

#include <ostream>

namespace bh::report {

namespace {

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& format) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ';';
    out += format(v);
  }
  return out;
}

}  // namespace

std::string fmt(double value) {
  if (value == 0.0) return "0";  // avoids "-0"
  return fmt::format("{:.12g}", value);
}

void write_summary_csv(std::ostream& out, const engine::RunResult& result) {
  out << "position,lat_deg,lon_deg,served_bits,arrived_bits,satisfaction,throughput_bps\n";
  const auto& per = result.summary.per_position;
  for (std::size_t n = 0; n < per.size(); ++n) {
    out << n << ',' << fmt(result.centers[n].lat) << ',' << fmt(result.centers[n].lon) << ','
        << fmt(per[n].served_bits) << ',' << fmt(per[n].demanded_bits) << ','
        << fmt(per[n].satisfaction) << ','
        << fmt(metrics::position_throughput(result.summary, n)) << '\n';
  }
}

void write_slots_csv(std::ostream& out, const engine::RunResult& result) {
  out << "slot,time_s,illuminated,power_w,sinr,offered_bits,served_bits,sod\n";
  const double t_b = result.config.t_b;
  for (const auto& s : result.slots) {
    out << s.slot << ',' << fmt(static_cast<double>(s.slot) * t_b) << ','
        << join(s.illuminated, [](std::size_t v) { return std::to_string(v); }) << ','
        << join(s.power, [](double v) { return fmt(v); }) << ','
        << join(s.sinr, [](double v) { return fmt(v); }) << ','
        << join(s.offered_bits, [](double v) { return fmt(v); }) << ','
        << join(s.served_bits, [](traffic::Bits v) { return std::to_string(v); }) << ','
        << fmt(s.sod) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, std::span<const engine::RunResult> results) {
  out << "algorithm,lambda,seed,throughput_gbps,mean_sod,jfi,served_bits,arrived_bits\n";
  for (const auto& r : results) {
    out << engine::to_string(r.config.algorithm) << ',' << fmt(r.config.arrivals.lambda) << ','
        << r.config.seed << ',' << fmt(metrics::throughput(r.summary) / 1e9) << ','
        << fmt(r.summary.mean_sod()) << ',' << fmt(r.summary.jfi) << ','
        << r.diagnostics.total_served << ',' << r.diagnostics.total_arrived << '\n';
  }
}

void print_comparison_table(std::ostream& out, std::span<const engine::RunResult> results) {
  out << fmt::format("{:<12} {:>9} {:>6} {:>16} {:>14} {:>8}\n", "algorithm", "lambda", "seed",
                     "throughput_Gbps", "mean_SOD", "JFI");
  for (const auto& r : results) {
    out << fmt::format("{:<12} {:>9.6g} {:>6} {:>16.6f} {:>14.6g} {:>8.5f}\n",
                       engine::to_string(r.config.algorithm), r.config.arrivals.lambda,
                       r.config.seed, metrics::throughput(r.summary) / 1e9,
                       r.summary.mean_sod(), r.summary.jfi);
  }
}

}  // namespace bh::report
