#include "rcons/filter.hpp"

#include <algorithm>
#include <sstream>

#include "rcons/errors.hpp"

namespace rcons {

std::vector<NodeId> msr_trim(double own_value, std::span<const ValueWithSource> candidates, int F) {
  if (F < 0) throw UsageError("trimming parameter F must be nonnegative");

  std::vector<NodeId> sources;
  sources.reserve(candidates.size());
  for (const auto& c : candidates) sources.push_back(c.source);
  std::sort(sources.begin(), sources.end());
  if (auto dup = std::adjacent_find(sources.begin(), sources.end()); dup != sources.end()) {
    std::ostringstream msg;
    msg << "duplicate source " << *dup << " in trimming candidates";
    throw UsageError(msg.str());
  }

  std::vector<ValueWithSource> above;
  std::vector<ValueWithSource> below;
  std::vector<NodeId> kept;
  for (const auto& c : candidates) {
    if (c.value > own_value)
      above.push_back(c);
    else if (c.value < own_value)
      below.push_back(c);
    else
      kept.push_back(c.source);
  }

  // Most extreme first: largest value above, smallest value below; ties by higher id.
  std::sort(above.begin(), above.end(), [](const auto& a, const auto& b) {
    return a.value != b.value ? a.value > b.value : a.source > b.source;
  });
  std::sort(below.begin(), below.end(), [](const auto& a, const auto& b) {
    return a.value != b.value ? a.value < b.value : a.source > b.source;
  });

  const auto drop = static_cast<std::size_t>(F);
  for (std::size_t k = std::min(drop, above.size()); k < above.size(); ++k) kept.push_back(above[k].source);
  for (std::size_t k = std::min(drop, below.size()); k < below.size(); ++k) kept.push_back(below[k].source);
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace rcons
