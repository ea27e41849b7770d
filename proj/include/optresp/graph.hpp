#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "optresp/types.hpp"

namespace optresp {

struct Edge {
  NodeId u;
  NodeId v;
  double w;
};

struct Neighbor {
  NodeId node;
  double weight;
  EdgeId edge;
};

/// Undirected weighted graph in CSR form.
///
/// Each undirected edge is stored once in `edges()` with u < v, sorted by
/// (u, v), and appears in the adjacency of both endpoints with the same edge
/// id. Adjacency rows are sorted by neighbor id. Immutable once built.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds from an arbitrary edge sequence. Self-loops are dropped (and
  /// counted), both orientations of a pair are canonicalized, and parallel
  /// edges are merged by summing weights. Throws ValidationError on
  /// out-of-range endpoints or weights that are not finite and positive.
  WeightedGraph(std::size_t num_nodes, std::span<const Edge> edges);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return n_ == 0; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const Neighbor> neighbors(NodeId i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
  double weighted_degree(NodeId i) const { return weighted_degree_[i]; }

  /// Edge id of {i, j}, or kInvalidNode when not adjacent.
  EdgeId find_edge(NodeId i, NodeId j) const;

  double total_weight() const noexcept { return total_weight_; }
  double average_degree() const noexcept {
    return n_ ? 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_) : 0.0;
  }
  std::size_t self_loops_dropped() const noexcept { return self_loops_dropped_; }

  std::span<const std::size_t> offsets() const noexcept { return offsets_; }
  std::span<const Neighbor> adjacency() const noexcept { return adjacency_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> weighted_degree_;
  double total_weight_ = 0.0;
  std::size_t self_loops_dropped_ = 0;
};

/// Square sparse matrix, CSR with sorted column indices.
struct SparseMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<NodeId> col;
  std::vector<double> val;

  double at(NodeId i, NodeId j) const;
  double row_sum(NodeId i) const;
};

/// Graph Laplacian D - W.
SparseMatrix laplacian(const WeightedGraph& g);

struct ComponentExtraction {
  WeightedGraph graph;
  /// old id -> new id, kInvalidNode for dropped nodes
  std::vector<NodeId> old_to_new;
  std::vector<NodeId> new_to_old;
};

/// Induced subgraph on the largest connected component. Ties go to the
/// component containing the smallest node id; new ids keep the old order.
ComponentExtraction largest_component(const WeightedGraph& g);

/// Connected-component label per node, labels numbered by smallest member.
std::vector<NodeId> component_labels(const WeightedGraph& g, std::size_t* count = nullptr);

/// Transmission probabilities as max-normalized inverse weights:
/// p_e = (1 / w_e) / max_f (1 / w_f) = min_f w_f / w_e.
std::vector<double> p_from_weights(const WeightedGraph& g);

}  // namespace optresp
