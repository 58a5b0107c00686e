#pragma once

#include <cstdint>
#include <random>

namespace rcons {

// Independent streams per (seed, trial, purpose, index); never depends on
// execution order, so parallel trials reproduce serial ones exactly.
enum class StreamPurpose : std::uint32_t { Graph = 1, Delay = 2, Adversary = 3, Initial = 4, Placement = 5 };

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t trial, StreamPurpose purpose,
                                   std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// Scalar seed for APIs that take one (e.g. graph generation).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, StreamPurpose purpose,
                                 std::uint64_t index = 0) {
  auto stream = make_stream(seed, trial, purpose, index);
  return stream();
}

}  // namespace rcons
