#include "rcons/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "rcons/errors.hpp"

namespace rcons {

DirectedGraph::DirectedGraph(int n) : n_(n), in_(n), out_(n), in_weight_(n) {
  if (n < 0) throw UsageError("graph node count must be nonnegative");
}

DirectedGraph DirectedGraph::from_edges(int n, const std::vector<Edge>& edges) {
  DirectedGraph g(n);
  for (const auto& e : edges) g.add_edge(e.from, e.to);
  return g;
}

DirectedGraph DirectedGraph::from_undirected(int n,
                                             const std::vector<std::pair<NodeId, NodeId>>& pairs) {
  DirectedGraph g(n);
  for (const auto& [a, b] : pairs) g.add_bidirectional(a, b);
  return g;
}

DirectedGraph DirectedGraph::complete(int n) {
  DirectedGraph g(n);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) g.add_bidirectional(a, b);
  return g;
}

DirectedGraph DirectedGraph::cycle(int n) {
  DirectedGraph g(n);
  if (n >= 2)
    for (NodeId a = 0; a < n; ++a) g.add_bidirectional(a, (a + 1) % n);
  return g;
}

void DirectedGraph::check_node(NodeId i) const {
  if (i < 0 || i >= n_) {
    std::ostringstream msg;
    msg << "node id " << i << " out of range [0, " << n_ << ")";
    throw UsageError(msg.str());
  }
}

void DirectedGraph::add_edge(NodeId from, NodeId to) {
  check_node(from);
  check_node(to);
  if (from == to) throw UsageError("self-loops are not allowed");
  auto& ins = in_[to];
  auto pos = std::lower_bound(ins.begin(), ins.end(), from);
  if (pos != ins.end() && *pos == from) return;
  in_weight_[to].insert(in_weight_[to].begin() + (pos - ins.begin()), 0.0);
  ins.insert(pos, from);
  auto& outs = out_[from];
  outs.insert(std::lower_bound(outs.begin(), outs.end(), to), to);
}

void DirectedGraph::add_bidirectional(NodeId a, NodeId b) {
  add_edge(a, b);
  add_edge(b, a);
}

void DirectedGraph::set_weight(NodeId i, NodeId j, double a) {
  check_node(i);
  check_node(j);
  const auto& ins = in_[i];
  auto pos = std::lower_bound(ins.begin(), ins.end(), j);
  if (pos == ins.end() || *pos != j) {
    std::ostringstream msg;
    msg << "cannot weight (" << i << ", " << j << "): " << j << " is not a neighbor of " << i;
    throw UsageError(msg.str());
  }
  in_weight_[i][pos - ins.begin()] = a;
}

std::size_t DirectedGraph::edge_count() const noexcept {
  std::size_t total = 0;
  for (const auto& ins : in_) total += ins.size();
  return total;
}

bool DirectedGraph::has_edge(NodeId from, NodeId to) const {
  const auto& ins = in_neighbors(to);
  check_node(from);
  return std::binary_search(ins.begin(), ins.end(), from);
}

const std::vector<NodeId>& DirectedGraph::in_neighbors(NodeId i) const {
  check_node(i);
  return in_[i];
}

const std::vector<NodeId>& DirectedGraph::out_neighbors(NodeId i) const {
  check_node(i);
  return out_[i];
}

double DirectedGraph::weight(NodeId i, NodeId j) const {
  const auto& ins = in_neighbors(i);
  auto pos = std::lower_bound(ins.begin(), ins.end(), j);
  if (pos == ins.end() || *pos != j) return 0.0;
  return in_weight_[i][pos - ins.begin()];
}

double DirectedGraph::self_weight(NodeId i) const {
  check_node(i);
  double sum = 0.0;
  for (double a : in_weight_[i]) sum += a;
  return 1.0 - sum;
}

std::vector<Edge> DirectedGraph::edges() const {
  std::vector<Edge> all;
  all.reserve(edge_count());
  for (NodeId from = 0; from < n_; ++from)
    for (NodeId to : out_[from]) all.push_back({from, to});
  return all;
}

std::vector<NodeId> neighbors(const DirectedGraph& g, NodeId i) { return g.in_neighbors(i); }

namespace {

using Mask = std::uint32_t;

std::vector<NodeId> mask_members(Mask m) {
  std::vector<NodeId> out;
  for (NodeId i = 0; m != 0; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

}  // namespace

int count_reachable_from_outside(const DirectedGraph& g, const std::vector<NodeId>& subset, int r) {
  std::vector<char> inside(g.size(), 0);
  for (NodeId v : subset) inside.at(v) = 1;
  int count = 0;
  for (NodeId v : subset) {
    int outside = 0;
    for (NodeId j : g.in_neighbors(v))
      if (!inside[j]) ++outside;
    if (outside >= r) ++count;
  }
  return count;
}

RobustnessVerdict check_robustness(const DirectedGraph& g, int r, int s,
                                   const RobustnessOptions& options) {
  const int n = g.size();
  if (r < 1 || s < 1) throw UsageError("robustness parameters r and s must be positive");
  if (r >= n || s >= n) throw UsageError("robustness requires r < n and s < n");
  if (options.exhaustive_limit > 30) throw UsageError("exhaustive limit cannot exceed 30 nodes");
  if (n > options.exhaustive_limit) {
    std::ostringstream msg;
    msg << "exhaustive robustness check refused for n = " << n << " (limit "
        << options.exhaustive_limit << ")";
    throw CapacityError(msg.str());
  }

  const Mask all = (n == 32) ? ~Mask{0} : ((Mask{1} << n) - 1);
  const std::size_t subsets = std::size_t{1} << n;

  std::vector<Mask> in_mask(n, 0);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j : g.in_neighbors(i)) in_mask[i] |= Mask{1} << j;

  // reached[m] = |X^r_m|: members of m with >= r in-neighbors outside m.
  std::vector<std::uint8_t> reached(subsets, 0);
  for (std::size_t m = 1; m < subsets; ++m) {
    const Mask mask = static_cast<Mask>(m);
    const Mask outside = ~mask & all;
    int count = 0;
    for (Mask rest = mask; rest != 0; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      if (std::popcount(in_mask[v] & outside) >= r) ++count;
    }
    reached[m] = static_cast<std::uint8_t>(count);
  }
  auto saturated = [&](Mask m) { return reached[m] == std::popcount(m); };

  std::vector<Mask> order;
  order.reserve(subsets - 1);
  for (std::size_t m = 1; m < subsets; ++m) order.push_back(static_cast<Mask>(m));
  std::stable_sort(order.begin(), order.end(),
                   [](Mask a, Mask b) { return std::popcount(a) < std::popcount(b); });
  std::vector<std::uint32_t> rank(subsets, 0);
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = static_cast<std::uint32_t>(k);

  for (Mask first : order) {
    if (saturated(first)) continue;
    const Mask rest = ~first & all;
    std::optional<Mask> worst;
    for (Mask second = rest; second != 0; second = (second - 1) & rest) {
      if (saturated(second)) continue;
      if (reached[first] + reached[second] >= s) continue;
      if (!worst || rank[second] < rank[*worst]) worst = second;
    }
    if (worst) {
      return RobustnessVerdict{false, RobustnessWitness{mask_members(first), mask_members(*worst)}};
    }
  }
  return RobustnessVerdict{true, std::nullopt};
}

DirectedGraph random_geometric(int n, double range, std::uint64_t seed) {
  if (n < 1) throw UsageError("random geometric graph needs n >= 1");
  if (!(range > 0.0) || range > std::numbers::sqrt2 + 1e-12)
    throw UsageError("communication range must lie in (0, sqrt 2]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::pair<double, double>> points(n);
  for (auto& [x, y] : points) {
    x = unit(rng);
    y = unit(rng);
  }
  DirectedGraph g(n);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) {
      const double d = std::hypot(points[a].first - points[b].first,
                                  points[a].second - points[b].second);
      if (d <= range) g.add_bidirectional(a, b);
    }
  return assign_uniform_weights(std::move(g));
}

DirectedGraph assign_uniform_weights(DirectedGraph g) {
  for (NodeId i = 0; i < g.size(); ++i) {
    const double a = 1.0 / (g.in_degree(i) + 1);
    for (NodeId j : g.in_neighbors(i)) g.set_weight(i, j, a);
  }
  return g;
}

double min_nonzero_weight(const DirectedGraph& g) {
  double lowest = 1.0;
  for (NodeId i = 0; i < g.size(); ++i) {
    for (NodeId j : g.in_neighbors(i)) {
      const double a = g.weight(i, j);
      if (a > 0.0) lowest = std::min(lowest, a);
    }
    const double self = g.self_weight(i);
    if (self > 0.0) lowest = std::min(lowest, self);
  }
  return lowest;
}

std::vector<std::string> weight_violations(const DirectedGraph& g, double alpha) {
  std::vector<std::string> problems;
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    std::ostringstream msg;
    msg << "weight lower bound alpha = " << alpha << " must lie in (0, 1/2]";
    problems.push_back(msg.str());
  }
  // Tolerates representation error of sums like 1/3 + 1/3 + 1/3.
  constexpr double slack = 1e-12;
  for (NodeId i = 0; i < g.size(); ++i) {
    for (NodeId j : g.in_neighbors(i)) {
      const double a = g.weight(i, j);
      if (a < alpha - slack || a >= 1.0) {
        std::ostringstream msg;
        msg << "weight a(" << i << "," << j << ") = " << a << " outside [" << alpha << ", 1)";
        problems.push_back(msg.str());
      }
    }
    const double self = g.self_weight(i);
    if (self < alpha - slack) {
      std::ostringstream msg;
      msg << "self-weight of node " << i << " is " << self << ", below alpha = " << alpha;
      problems.push_back(msg.str());
    }
  }
  return problems;
}

namespace {

std::size_t reach_count(const DirectedGraph& g, bool forward) {
  std::vector<char> seen(g.size(), 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  std::size_t count = 1;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    const auto& next = forward ? g.out_neighbors(v) : g.in_neighbors(v);
    for (NodeId w : next) {
      if (seen[w]) continue;
      seen[w] = 1;
      ++count;
      frontier.push(w);
    }
  }
  return count;
}

}  // namespace

bool is_connected(const DirectedGraph& g) {
  if (g.size() < 1) throw UsageError("connectivity needs at least one node");
  const auto n = static_cast<std::size_t>(g.size());
  return reach_count(g, true) == n && reach_count(g, false) == n;
}

int min_in_degree(const DirectedGraph& g) {
  int lowest = std::numeric_limits<int>::max();
  for (NodeId i = 0; i < g.size(); ++i) lowest = std::min(lowest, g.in_degree(i));
  return g.size() == 0 ? 0 : lowest;
}

double geometric_link_probability(double range) {
  if (range <= 0.0) return 0.0;
  if (range >= std::numbers::sqrt2) return 1.0;
  const double r2 = range * range;
  if (range <= 1.0) return std::numbers::pi * r2 - 8.0 / 3.0 * r2 * range + 0.5 * r2 * r2;
  // Distance distribution of two uniform points on the unit square, 1 < r < sqrt 2.
  const double root = std::sqrt(r2 - 1.0);
  return 1.0 / 3.0 + (std::numbers::pi - 2.0) * r2 - 0.5 * r2 * r2 + 4.0 / 3.0 * (2.0 * r2 + 1.0) * root -
         4.0 * r2 * std::acos(1.0 / range);
}

double range_for_mean_degree(int n, double mean_degree) {
  if (n < 2) throw UsageError("mean degree needs at least two nodes");
  const double target = mean_degree / (n - 1);
  if (!(target > 0.0) || target > geometric_link_probability(1.0))
    throw UsageError("requested mean degree is not reachable with range <= 1");
  double lo = 0.0;
  double hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (geometric_link_probability(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void write_adjacency_csv(const DirectedGraph& g, std::ostream& out) {
  out << "from,to,weight\n";
  const auto old_precision = out.precision(17);
  for (const auto& e : g.edges()) out << e.from << ',' << e.to << ',' << g.weight(e.to, e.from) << '\n';
  out.precision(old_precision);
}

}  // namespace rcons
