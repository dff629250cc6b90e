#include "bhsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bh::traffic {

void validate(const ArrivalConfig& cfg) {
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda))
    throw std::invalid_argument("lambda must be finite and >= 0");
  if (!(cfg.packet_bits > 0.0) || cfg.packet_bits != std::floor(cfg.packet_bits))
    throw std::invalid_argument("packet_bits must be a positive integer");
}

DemandState::DemandState(std::span<const geo::SinkNode> sinks, std::size_t num_positions)
    : queued_(sinks.size(), 0),
      parent_(sinks.size(), 0),
      position_sinks_(num_positions),
      position_demand_(num_positions, 0),
      arrived_per_position_(num_positions, 0),
      served_per_position_(num_positions, 0) {
  for (const auto& s : sinks) {
    if (s.id < 0 || static_cast<std::size_t>(s.id) >= sinks.size())
      throw std::invalid_argument("DemandState: sink ids must be 0..S-1");
    if (s.parent >= num_positions)
      throw std::invalid_argument("DemandState: sink parent out of range");
    parent_[static_cast<std::size_t>(s.id)] = s.parent;
    position_sinks_[s.parent].push_back(s.id);
  }
  for (auto& ids : position_sinks_) std::sort(ids.begin(), ids.end());
}

Bits DemandState::total_queued() const {
  return std::accumulate(queued_.begin(), queued_.end(), Bits{0});
}

void DemandState::enqueue(int sink, Bits bits) {
  if (bits < 0) throw std::invalid_argument("enqueue: negative bits");
  const auto i = static_cast<std::size_t>(sink);
  queued_.at(i) += bits;
  position_demand_[parent_[i]] += bits;
  arrived_per_position_[parent_[i]] += bits;
  total_arrived_ += bits;
}

Bits DemandState::dequeue(int sink, Bits bits) {
  if (bits < 0) throw std::invalid_argument("dequeue: negative bits");
  const auto i = static_cast<std::size_t>(sink);
  const Bits taken = std::min(bits, queued_.at(i));
  queued_[i] -= taken;
  position_demand_[parent_[i]] -= taken;
  served_per_position_[parent_[i]] += taken;
  total_served_ += taken;
  return taken;
}

bool DemandState::consistent() const {
  for (std::size_t n = 0; n < position_sinks_.size(); ++n) {
    Bits sum = 0;
    for (int id : position_sinks_[n]) {
      if (queued_[static_cast<std::size_t>(id)] < 0) return false;
      sum += queued_[static_cast<std::size_t>(id)];
    }
    if (sum != position_demand_[n]) return false;
  }
  return true;
}

long generate_arrivals(const ArrivalConfig& cfg, double duration, std::size_t n,
                       DemandState& state, std::mt19937_64& rng, double multiplier) {
  if (!(duration > 0.0)) throw std::invalid_argument("generate_arrivals: duration must be > 0");
  const double mean = cfg.lambda * duration * multiplier;
  if (mean <= 0.0) return 0;

  const auto sinks = state.sinks_of(n);
  if (sinks.empty()) throw std::invalid_argument("generate_arrivals: position has no sinks");

  std::poisson_distribution<long> poisson(mean);
  const long packets = poisson(rng);
  const auto bits = static_cast<Bits>(cfg.packet_bits);
  if (sinks.size() == 1) {
    state.enqueue(sinks.front(), bits * packets);
    return packets;
  }
  std::uniform_int_distribution<std::size_t> pick(0, sinks.size() - 1);
  for (long p = 0; p < packets; ++p) state.enqueue(sinks[pick(rng)], bits);
  return packets;
}

int select_sink(std::size_t n, const DemandState& state) {
  const auto sinks = state.sinks_of(n);
  if (sinks.empty()) throw std::invalid_argument("select_sink: position has no sinks");
  // sinks_of() is sorted by id, so the first maximum is the lowest id.
  int best = sinks.front();
  for (int id : sinks)
    if (state.queued(id) > state.queued(best)) best = id;
  return best;
}

Bits serve(std::size_t n, double offered, DemandState& state) {
  if (!(offered >= 0.0)) throw std::invalid_argument("serve: offered must be >= 0");
  const int sink = select_sink(n, state);
  const double cap = static_cast<double>(state.queued(sink));
  const auto request = static_cast<Bits>(std::floor(std::min(offered, cap)));
  return state.dequeue(sink, request);
}

}  // namespace bh::traffic
