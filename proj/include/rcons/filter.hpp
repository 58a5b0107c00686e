#pragma once

#include <span>
#include <vector>

#include "rcons/graph.hpp"

namespace rcons {

// One stored neighbor value, tagged with the neighbor that sent it.
struct ValueWithSource {
  NodeId source;
  double value;
};

/// Mean-subsequence-reduced trimming relative to the agent's own value.
///
/// Drops the F largest candidates strictly above `own_value` (all of them if
/// fewer than F are above) and the F smallest strictly below it. Values equal
/// to `own_value` always survive. Among equal values the higher source id is
/// treated as more extreme and dropped first, which makes the result
/// independent of candidate order. Returns surviving source ids, ascending.
///
/// Throws UsageError on duplicate sources or negative F.
std::vector<NodeId> msr_trim(double own_value, std::span<const ValueWithSource> candidates, int F);

}  // namespace rcons
