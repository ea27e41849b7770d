#include "optresp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optresp {

WeightedGraph::WeightedGraph(std::size_t num_nodes, std::span<const Edge> edges) : n_(num_nodes) {
  if (num_nodes >= static_cast<std::size_t>(kInvalidNode)) {
    throw ValidationError("graph too large for 32-bit node ids");
  }
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const Edge& e : edges) {
    if (e.u >= n_ || e.v >= n_) {
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") references a node outside [0, " + std::to_string(n_) + ")");
    }
    if (!std::isfinite(e.w) || e.w <= 0.0) {
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") has non-positive weight " + std::to_string(e.w));
    }
    if (e.u == e.v) {
      ++self_loops_dropped_;
      continue;
    }
    canon.push_back(e.u < e.v ? e : Edge{e.v, e.u, e.w});
  }
  std::stable_sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  edges_.reserve(canon.size());
  for (const Edge& e : canon) {
    if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v) {
      edges_.back().w += e.w;
    } else {
      edges_.push_back(e);
    }
  }
  if (edges_.size() >= static_cast<std::size_t>(kInvalidNode)) {
    throw ValidationError("graph too large for 32-bit edge ids");
  }

  std::vector<std::size_t> deg(n_, 0);
  for (const Edge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + deg[i];

  adjacency_.resize(offsets_[n_]);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    adjacency_[cursor[e.u]++] = {e.v, e.w, id};
    adjacency_[cursor[e.v]++] = {e.u, e.w, id};
  }
  weighted_degree_.assign(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    auto first = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    auto last = adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    double d = 0.0;
    for (auto it = first; it != last; ++it) d += it->weight;
    weighted_degree_[i] = d;
  }
  for (const Edge& e : edges_) total_weight_ += e.w;
}

EdgeId WeightedGraph::find_edge(NodeId i, NodeId j) const {
  auto row = neighbors(i);
  auto it = std::lower_bound(row.begin(), row.end(), j,
                             [](const Neighbor& nb, NodeId key) { return nb.node < key; });
  return (it != row.end() && it->node == j) ? it->edge : kInvalidNode;
}

double SparseMatrix::at(NodeId i, NodeId j) const {
  auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
}

double SparseMatrix::row_sum(NodeId i) const {
  double s = 0.0;
  for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k];
  return s;
}

SparseMatrix laplacian(const WeightedGraph& g) {
  SparseMatrix L;
  L.n = g.num_nodes();
  L.row_ptr.assign(L.n + 1, 0);
  L.col.reserve(g.adjacency().size() + L.n);
  L.val.reserve(g.adjacency().size() + L.n);
  for (NodeId i = 0; i < L.n; ++i) {
    bool diag_done = false;
    for (const Neighbor& nb : g.neighbors(i)) {
      if (!diag_done && nb.node > i) {
        L.col.push_back(i);
        L.val.push_back(g.weighted_degree(i));
        diag_done = true;
      }
      L.col.push_back(nb.node);
      L.val.push_back(-nb.weight);
    }
    if (!diag_done) {
      L.col.push_back(i);
      L.val.push_back(g.weighted_degree(i));
    }
    L.row_ptr[i + 1] = L.col.size();
  }
  return L;
}

std::vector<NodeId> component_labels(const WeightedGraph& g, std::size_t* count) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> label(n, kInvalidNode);
  NodeId next = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != kInvalidNode) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(u)) {
        if (label[nb.node] == kInvalidNode) {
          label[nb.node] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

ComponentExtraction largest_component(const WeightedGraph& g) {
  if (g.empty()) throw ValidationError("largest_component: graph has no nodes");
  std::size_t count = 0;
  const auto label = component_labels(g, &count);
  std::vector<std::size_t> size(count, 0);
  for (NodeId l : label) ++size[l];
  // labels are assigned in order of smallest member, so the first maximum wins ties
  const auto best = static_cast<NodeId>(std::max_element(size.begin(), size.end()) - size.begin());

  ComponentExtraction out;
  out.old_to_new.assign(g.num_nodes(), kInvalidNode);
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    if (label[i] == best) {
      out.old_to_new[i] = static_cast<NodeId>(out.new_to_old.size());
      out.new_to_old.push_back(i);
    }
  }
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    if (label[e.u] == best) kept.push_back({out.old_to_new[e.u], out.old_to_new[e.v], e.w});
  }
  out.graph = WeightedGraph(out.new_to_old.size(), kept);
  return out;
}

std::vector<double> p_from_weights(const WeightedGraph& g) {
  std::vector<double> p(g.num_edges());
  double max_inv = 0.0;
  for (const Edge& e : g.edges()) max_inv = std::max(max_inv, 1.0 / e.w);
  for (EdgeId id = 0; id < g.num_edges(); ++id) p[id] = (1.0 / g.edge(id).w) / max_inv;
  return p;
}

}  // namespace optresp
