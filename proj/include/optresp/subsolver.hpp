#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "optresp/instance.hpp"

namespace optresp {

/// Per-node state for a localized solve: -1 free, otherwise the fixed value.
struct BoundaryCondition {
  std::vector<std::int8_t> value;

  static BoundaryCondition all_free(std::size_t n);
  /// Frees `subset` and fixes every other node at its value in x.
  static BoundaryCondition around(std::span<const std::uint8_t> x, std::span<const NodeId> subset);

  bool is_free(NodeId i) const { return value[i] < 0; }
  std::vector<NodeId> free_nodes() const;
};

/// Exposure constraint over free variables:
///   [x_owner or 1] - scale * prod_t (1 - q_t x_{var_t}) <= bound
/// A constraint without an owner belongs to an open boundary node whose
/// neighbors include free variables.
struct ExposureConstraint {
  static constexpr std::int32_t kBoundaryOwner = -1;

  std::int32_t owner = kBoundaryOwner;
  NodeId node = kInvalidNode;
  double scale = 1.0;
  double bound = 0.0;
  std::vector<std::pair<std::uint32_t, double>> terms;
};

/// The problem over the free nodes once the boundary is substituted in:
/// maximize sum_edges w x_u x_v + sum_v linear_v x_v (+ offset).
struct ReducedProblem {
  std::vector<NodeId> free_nodes;  ///< variable -> original node id, increasing
  std::vector<double> linear;
  std::vector<Edge> edges;  ///< endpoints are variable indices
  std::vector<ExposureConstraint> constraints;
  /// objective contributed by the fixed nodes alone
  double offset = 0.0;
  bool boundary_feasible = true;

  std::size_t num_vars() const noexcept { return free_nodes.size(); }
  double objective(std::span<const std::uint8_t> x) const;
  bool feasible(std::span<const std::uint8_t> x) const;
};

/// Substitutes the fixed values: free node i gets linear a_i + sum of w_ij to
/// open fixed neighbors and scale k_i = prod over fixed neighbors of
/// (1 - p_ij phi_j x_j). Open fixed nodes next to free ones keep their
/// constraints. Marks the result boundary-infeasible when some open fixed
/// node is violated even with every free node closed.
ReducedProblem reduce_with_boundary(const ResponseInstance& inst, const BoundaryCondition& bc);

/// reduce_with_boundary for BoundaryCondition::around(x, subset), touching
/// only the subset and its neighborhood. The offset is left at zero and only
/// boundary nodes adjacent to the subset are checked.
ReducedProblem reduce_subset(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                             std::span<const NodeId> sorted_subset);

enum class ExactMethod { automatic, enumerate, branch_and_bound };

struct ExactOptions {
  std::size_t limit = 40;              ///< refuse larger problems
  std::size_t enumeration_limit = 20;  ///< automatic enumerates up to this size
  double time_budget = 0.0;            ///< seconds, 0 = unlimited
  ExactMethod method = ExactMethod::automatic;
};

struct ExactResult {
  Assignment x;  ///< per variable
  double objective = 0.0;  ///< reduced objective, offset excluded
  bool optimal = true;
  std::uint64_t nodes = 0;
  ExactMethod method = ExactMethod::enumerate;
};

/// Globally optimal assignment of a reduced problem. Among equal optima the
/// lexicographically smallest x is returned. Exhaustive enumeration of the
/// feasible set for small problems, otherwise best-first branch and bound.
/// When the time budget runs out the best assignment found is returned with
/// optimal = false. Throws ValidationError for boundary-infeasible input or
/// more than `limit` variables.
ExactResult solve_exact(const ReducedProblem& problem, const ExactOptions& opts = {});

struct ExactSolve {
  Solution solution;
  bool optimal = true;
  std::uint64_t nodes = 0;
};

/// Whole-instance exact solve (every node free).
ExactSolve solve_exact(const ResponseInstance& inst, const ExactOptions& opts = {});

}  // namespace optresp
