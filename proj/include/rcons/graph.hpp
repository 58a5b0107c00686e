#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rcons {

using NodeId = int;

struct Edge {
  NodeId from;
  NodeId to;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed graph with per-edge weights a_ij on incoming edges.
///
/// An edge (j, i) means j can send to i, so j is an in-neighbor of i and
/// a_ij is the weight node i puts on values received from j. Neighbor lists
/// are kept sorted so every traversal is deterministic. Self-loops are
/// rejected; adding an existing edge is a no-op.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(int n);

  static DirectedGraph from_edges(int n, const std::vector<Edge>& edges);
  // Every pair {a, b} becomes the two directed edges (a, b) and (b, a).
  static DirectedGraph from_undirected(int n, const std::vector<std::pair<NodeId, NodeId>>& pairs);
  static DirectedGraph complete(int n);
  static DirectedGraph cycle(int n);

  void add_edge(NodeId from, NodeId to);
  void add_bidirectional(NodeId a, NodeId b);
  // Requires j to be an in-neighbor of i.
  void set_weight(NodeId i, NodeId j, double a);

  int size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept;
  bool has_edge(NodeId from, NodeId to) const;

  const std::vector<NodeId>& in_neighbors(NodeId i) const;
  const std::vector<NodeId>& out_neighbors(NodeId i) const;
  int in_degree(NodeId i) const { return static_cast<int>(in_neighbors(i).size()); }

  // a_ij, or 0 when j is not an in-neighbor of i.
  double weight(NodeId i, NodeId j) const;
  // 1 - sum_j a_ij.
  double self_weight(NodeId i) const;

  // All edges ordered by (from, to).
  std::vector<Edge> edges() const;

  friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

 private:
  void check_node(NodeId i) const;

  int n_ = 0;
  std::vector<std::vector<NodeId>> in_;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<double>> in_weight_;  // parallel to in_
};

std::vector<NodeId> neighbors(const DirectedGraph& g, NodeId i);

struct RobustnessWitness {
  std::vector<NodeId> first;
  std::vector<NodeId> second;
};

struct RobustnessVerdict {
  bool holds = false;
  std::optional<RobustnessWitness> witness;
};

struct RobustnessOptions {
  int exhaustive_limit = 16;
};

/// Exhaustive (r, s)-robustness certification.
///
/// Enumerates every pair of nonempty disjoint node subsets. A pair passes
/// when either subset has all of its nodes with at least r in-neighbors
/// outside it, or when the two counts of such nodes add up to at least s.
/// Subsets are ordered by (size, bitmask value) and pairs lexicographically,
/// so the reported witness is the first failing pair in that order.
/// Cost is O(3^n); graphs larger than `exhaustive_limit` are refused.
RobustnessVerdict check_robustness(const DirectedGraph& g, int r, int s,
                                   const RobustnessOptions& options = {});

// Number of nodes of `subset` with at least r in-neighbors outside it.
int count_reachable_from_outside(const DirectedGraph& g, const std::vector<NodeId>& subset, int r);

/// n points uniform on the unit square, bidirectional edges between points at
/// distance <= range, uniform weights. Bit-identical for a given seed.
DirectedGraph random_geometric(int n, double range, std::uint64_t seed);

/// Sets a_ij = 1/(d_i + 1) on every incoming edge.
DirectedGraph assign_uniform_weights(DirectedGraph g);

// Smallest a_ij over all edges together with the smallest self-weight.
// For uniform weights this is min_i 1/(d_i + 1).
double min_nonzero_weight(const DirectedGraph& g);

// Violations of alpha <= a_ij < 1 and self-weight >= alpha; empty when valid.
std::vector<std::string> weight_violations(const DirectedGraph& g, double alpha);

/// Strong connectivity of the directed edge set.
bool is_connected(const DirectedGraph& g);

int min_in_degree(const DirectedGraph& g);

// Probability that two uniform points of the unit square lie within `range`.
double geometric_link_probability(double range);
// Range in (0, 1] giving expected degree `mean_degree` for n uniform nodes.
double range_for_mean_degree(int n, double mean_degree);

// One row per edge: from,to,weight (weight is a_{to,from}).
void write_adjacency_csv(const DirectedGraph& g, std::ostream& out);

}  // namespace rcons
