#pragma once

#include <cstdint>
#include <vector>

#include "optresp/coarsening.hpp"
#include "optresp/subsolver.hpp"

namespace optresp {

/// Fine solution from a coarse one. Seeds copy their aggregate's value (seeds
/// left violated at the fine level are closed, worst first); the remaining
/// nodes are visited by descending phi and opened when that gains objective
/// and keeps the node and its open neighbors feasible. If the plain
/// prolongation of the coarse solution is feasible and scores higher, it is
/// returned instead. Throws ValidationError if `coarse` is infeasible for
/// level.coarse.
Solution interpolate(const ResponseInstance& fine, const HierarchyLevel& level,
                     const Solution& coarse);

struct SweepStats {
  std::size_t sweeps = 0;
  std::size_t flips = 0;
};

/// Single-node flips in descending weighted-degree order, committed only when
/// they strictly raise the objective and keep the node and its neighbors
/// feasible; stops after a sweep without flips or after max_sweeps.
Solution gauss_seidel_sweep(const ResponseInstance& inst, const Solution& sol,
                            std::size_t max_sweeps, SweepStats* stats = nullptr);

/// Disjoint connected subsets covering every node, with a coloring in which
/// two subsets of one color are at graph distance >= 3 (no shared node, no
/// edge between them, no common neighbor).
struct RefinePlan {
  std::vector<std::vector<NodeId>> subsets;  ///< each sorted by node id
  std::vector<std::uint32_t> color;          ///< per subset
  std::size_t num_colors = 0;

  std::vector<std::size_t> subsets_with_color(std::uint32_t c) const;
};

/// Grows subsets of at most `subset_cap` nodes breadth-first over uncovered
/// nodes, starting from the nodes whose constraint is closest to tight
/// (smallest |b_i - (1 - survival_i)|, seeded random tie-break), then colors
/// them greedily.
RefinePlan build_refine_plan(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                             std::size_t subset_cap, std::uint64_t seed);

/// True when the plan covers every node, its subsets are connected and
/// disjoint, and same-colored subsets are at distance >= 3.
bool plan_is_valid(const WeightedGraph& g, const RefinePlan& plan);

struct RefineStats {
  /// objective after each color phase of each pass
  std::vector<double> trace;
  std::size_t subproblems = 0;
  std::size_t splices = 0;
  std::size_t boundary_infeasible = 0;
  std::size_t budget_hits = 0;
};

/// For each pass and color, re-solves every subset of that color exactly with
/// the rest of the solution fixed, and splices the result back when the
/// objective does not drop. Subsets of one color are independent, so
/// Execution::parallel solves them concurrently against a snapshot and
/// produces the same result as Execution::sequential.
Solution localized_refine(const ResponseInstance& inst, const Solution& sol, const RefinePlan& plan,
                          std::size_t passes, Execution exec = Execution::parallel,
                          RefineStats* stats = nullptr, const ExactOptions& exact = {});

}  // namespace optresp
