#pragma once

#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "rcons/graph.hpp"

namespace rcons {

// offset + amplitude * sin(2 pi t / period)
struct SineWave {
  double amplitude = 0.5;
  double period = 10.0;
  double offset = 0.5;
};

// Piecewise-constant rate, redrawn uniformly in [lo, hi] at every send instant.
struct RandomControl {
  double lo = -10.0;
  double hi = 10.0;
};

using AdversaryBehavior = std::variant<SineWave, RandomControl>;

struct AdversarySpec {
  NodeId agent = 0;
  AdversaryBehavior behavior = SineWave{};
  double send_interval = 0.1;
};

struct Transmission {
  double time;
  double value;
};

/// State of one malicious agent. Every send goes out identically to all
/// out-neighbors; incoming messages are ignored.
///
/// Queries must come in nondecreasing time. RandomControl draws its rates
/// from its own stream, so two processes built alike agree bit for bit.
class AdversaryProcess {
 public:
  AdversaryProcess(AdversarySpec spec, double initial_value, std::mt19937_64 rng);

  const AdversarySpec& spec() const noexcept { return spec_; }

  double value(double now);
  // Time of the k-th send (k = 0 at t = 0).
  double send_time(std::int64_t k) const { return static_cast<double>(k) * spec_.send_interval; }
  // Rate in force right after the most recent send instant reached by value().
  double current_rate() const noexcept { return rate_; }

 private:
  void advance_to_grid(std::int64_t k);

  AdversarySpec spec_;
  std::mt19937_64 rng_;
  std::int64_t grid_index_ = -1;
  double anchor_value_ = 0.0;
  double rate_ = 0.0;
  double last_query_ = 0.0;
};

double adversary_value(AdversaryProcess& process, double now);

// Number of send instants k * interval that fall in [0, horizon].
std::int64_t send_count(double send_interval, double horizon);

/// All transmissions in [0, horizon], starting at t = 0.
std::vector<Transmission> schedule_adversary(const AdversarySpec& spec, double horizon, double initial_value,
                                             std::mt19937_64 rng);

}  // namespace rcons
