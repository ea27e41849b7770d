#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "optresp/graph.hpp"
#include "optresp/graph_io.hpp"

namespace optresp {

/// Binary decision vector: 1 = node stays open, 0 = node is closed.
using Assignment = std::vector<std::uint8_t>;

/// The response problem on one level of the hierarchy:
///
///   maximize   sum_{ij in E} w_ij x_i x_j + sum_i a_i x_i
///   subject to x_i - prod_{j in N(i)} (1 - p_ij phi_j x_j) <= b_i
///
/// At the finest level a is zero unless a degree penalty was applied.
struct ResponseInstance {
  WeightedGraph graph;
  std::vector<double> p;  ///< per edge id
  std::vector<double> phi;
  std::vector<double> b;
  std::vector<double> a;
  /// p was produced by p_from_weights, so coarse levels re-derive it from W
  bool p_from_weights = true;

  std::size_t num_nodes() const noexcept { return graph.num_nodes(); }

  /// Probability that the open neighbor `nb` of some node transmits to it.
  double transmission(const Neighbor& nb) const { return p[nb.edge] * phi[nb.node]; }
};

/// Throws ValidationError unless every vector has the right length and
/// p, phi lie in [0, 1], b >= 0 and a >= 0 (a may be negative when
/// `allow_negative_a`, used by the degree penalty).
void validate(const ResponseInstance& inst, bool allow_negative_a = false);

/// Instance with p derived from the weights; missing `a` means all zeros.
ResponseInstance make_instance(WeightedGraph g, std::vector<double> phi, std::vector<double> b,
                               std::vector<double> a = {});
ResponseInstance make_instance(WeightedGraph g, const NodeAttributes& attrs);

NodeAttributes attributes_of(const ResponseInstance& inst);

/// Adds -scale * weighted_degree(i) to every a_i, which makes high-degree
/// nodes more expensive to keep open.
void apply_degree_penalty(ResponseInstance& inst, double scale = 1.0);

struct Solution {
  Assignment x;
  double objective = 0.0;
  bool feasible = true;
  std::vector<NodeId> violated;

  std::size_t num_closed() const;
};

double evaluate_objective(const ResponseInstance& inst, std::span<const std::uint8_t> x);

/// prod_{j in N(i)} (1 - p_ij phi_j x_j)
double non_infection_probability(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                                 NodeId i);

/// max(0, x_i - non_infection_probability - b_i)
double constraint_violation(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                            NodeId i);

/// Evaluates x and collects violated constraints (violation > kConstraintTol).
Solution is_feasible(const ResponseInstance& inst, Assignment x);

/// Incremental bookkeeping of x, the objective, and each node's
/// non-infection product. Opening a node multiplies its neighbors' products;
/// closing recomputes them, so zero factors never need dividing out.
class ExposureTracker {
 public:
  ExposureTracker(const ResponseInstance& inst, Assignment x);

  const Assignment& x() const noexcept { return x_; }
  bool is_open(NodeId i) const { return x_[i] != 0; }
  double objective() const noexcept { return objective_; }
  double survival(NodeId i) const { return survival_[i]; }

  /// x_i - survival_i - b_i with the node taken as open; <= tol means an open
  /// node i is satisfied.
  double open_excess(NodeId i) const { return 1.0 - survival_[i] - inst_->b[i]; }
  double violation(NodeId i) const;

  /// Objective change from opening i (closing gives the negative).
  double open_gain(NodeId i) const;

  /// True when opening the closed node i keeps i and every open neighbor feasible.
  bool can_open(NodeId i) const;

  void open(NodeId i);
  void close(NodeId i);

  bool feasible() const;
  Solution solution() const;

 private:
  double recompute_survival(NodeId i) const;

  const ResponseInstance* inst_;
  Assignment x_;
  std::vector<double> survival_;
  double objective_ = 0.0;
};

}  // namespace optresp
