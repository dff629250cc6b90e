#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "bhsim/geometry.hpp"

namespace bh::traffic {

using Bits = std::int64_t;

struct ArrivalConfig {
  double lambda = 3000.0;       // packets/s per beam position
  double packet_bits = 10'000;  // M
};

void validate(const ArrivalConfig& cfg);

/// Per-sink demand queues. Sink ids must be 0..S-1 (as produced by
/// geo::sample_sinks). Position demand is kept as the exact integer sum of
/// its sinks' queues.
class DemandState {
 public:
  DemandState(std::span<const geo::SinkNode> sinks, std::size_t num_positions);

  std::size_t num_positions() const { return position_sinks_.size(); }
  std::size_t num_sinks() const { return queued_.size(); }

  Bits queued(int sink) const { return queued_.at(static_cast<std::size_t>(sink)); }
  Bits position_demand(std::size_t n) const { return position_demand_.at(n); }
  std::span<const int> sinks_of(std::size_t n) const { return position_sinks_.at(n); }

  Bits total_arrived() const { return total_arrived_; }
  Bits total_served() const { return total_served_; }
  Bits total_queued() const;
  Bits arrived_at(std::size_t n) const { return arrived_per_position_.at(n); }
  Bits served_at(std::size_t n) const { return served_per_position_.at(n); }

  void enqueue(int sink, Bits bits);
  /// Removes up to `bits` from the sink queue; returns what was removed.
  Bits dequeue(int sink, Bits bits);

  /// True when every position demand equals the sum of its sinks' queues.
  bool consistent() const;

 private:
  std::vector<Bits> queued_;
  std::vector<std::size_t> parent_;
  std::vector<std::vector<int>> position_sinks_;
  std::vector<Bits> position_demand_;
  std::vector<Bits> arrived_per_position_;
  std::vector<Bits> served_per_position_;
  Bits total_arrived_ = 0;
  Bits total_served_ = 0;
};

/// Poisson(lambda * duration * multiplier) packets for position n, each
/// landing on a uniformly chosen sink of that position. Returns the number of
/// packets generated.
long generate_arrivals(const ArrivalConfig& cfg, double duration, std::size_t n,
                       DemandState& state, std::mt19937_64& rng, double multiplier = 1.0);

/// Sink with the largest queue in position n; ties go to the lowest id.
int select_sink(std::size_t n, const DemandState& state);

/// Serves the selected sink of position n with up to floor(offered) bits.
/// Returns the bits actually served.
Bits serve(std::size_t n, double offered, DemandState& state);

}  // namespace bh::traffic
