#include "rcons/adversary.hpp"

#include <cmath>
#include <numbers>

#include "rcons/errors.hpp"

namespace rcons {

AdversaryProcess::AdversaryProcess(AdversarySpec spec, double initial_value, std::mt19937_64 rng)
    : spec_(spec), rng_(std::move(rng)), anchor_value_(initial_value) {
  if (!(spec_.send_interval > 0.0)) throw UsageError("adversary send interval must be positive");
  if (const auto* rc = std::get_if<RandomControl>(&spec_.behavior); rc && rc->lo > rc->hi)
    throw UsageError("random control range needs lo <= hi");
  if (const auto* sw = std::get_if<SineWave>(&spec_.behavior); sw && !(sw->period > 0.0))
    throw UsageError("sine period must be positive");
}

void AdversaryProcess::advance_to_grid(std::int64_t k) {
  const auto* rc = std::get_if<RandomControl>(&spec_.behavior);
  while (grid_index_ < k) {
    if (grid_index_ >= 0) anchor_value_ += rate_ * spec_.send_interval;
    ++grid_index_;
    if (rc) rate_ = std::uniform_real_distribution<double>(rc->lo, rc->hi)(rng_);
  }
}

double AdversaryProcess::value(double now) {
  if (now < 0.0 || now < last_query_) throw UsageError("adversary queried backwards in time");
  last_query_ = now;
  if (const auto* sw = std::get_if<SineWave>(&spec_.behavior))
    return sw->offset + sw->amplitude * std::sin(2.0 * std::numbers::pi * now / sw->period);

  auto k = static_cast<std::int64_t>(std::floor(now / spec_.send_interval));
  // Grid times are k * interval; guard against the quotient landing one ulp low.
  if (send_time(k + 1) <= now) ++k;
  if (k > 0 && send_time(k) > now) --k;
  advance_to_grid(k);
  return anchor_value_ + rate_ * (now - send_time(grid_index_));
}

double adversary_value(AdversaryProcess& process, double now) { return process.value(now); }

std::int64_t send_count(double send_interval, double horizon) {
  if (horizon < 0.0) return 0;
  auto k = static_cast<std::int64_t>(std::floor(horizon / send_interval));
  while (static_cast<double>(k + 1) * send_interval <= horizon) ++k;
  while (k > 0 && static_cast<double>(k) * send_interval > horizon) --k;
  return k + 1;
}

std::vector<Transmission> schedule_adversary(const AdversarySpec& spec, double horizon, double initial_value,
                                             std::mt19937_64 rng) {
  if (horizon < 0.0) throw UsageError("horizon must be nonnegative");
  AdversaryProcess process(spec, initial_value, std::move(rng));
  const auto count = send_count(spec.send_interval, horizon);
  std::vector<Transmission> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) {
    const double t = process.send_time(k);
    out.push_back({t, process.value(t)});
  }
  return out;
}

}  // namespace rcons
