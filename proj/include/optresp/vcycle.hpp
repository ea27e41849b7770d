#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optresp/coarsening.hpp"
#include "optresp/refine.hpp"

namespace optresp {

struct VCycleConfig {
  AlgDistParams algdist;
  double theta = 0.5;
  TraversalOrder order = TraversalOrder::descending_phi;
  ScalarAggregation scalars = ScalarAggregation::mean;
  std::size_t coarsest_size = 40;
  std::size_t subset_cap = 15;
  std::size_t gs_sweeps = 3;
  std::size_t refine_passes = 5;
  std::uint64_t seed = 1;
  double time_budget = 0.0;  ///< seconds, 0 = unlimited
  Execution exec = Execution::parallel;
  std::size_t exact_limit = 40;
  std::size_t max_levels = 64;  ///< counting the input level

  void validate() const;
};

struct TracePoint {
  double seconds = 0.0;
  double objective = 0.0;
};

struct LevelStats {
  std::size_t level = 0;  ///< 0 is the input instance
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  std::size_t coarse_size = 0;  ///< 0 at the coarsest level
  double theta_used = 0.0;
  int theta_retries = 0;
  double objective_interpolated = 0.0;
  double objective_smoothed = 0.0;
  double objective_refined = 0.0;
  /// objective after each color phase of every refinement pass
  std::vector<double> refine_trace;
  std::size_t subproblems = 0;
  double seconds = 0.0;
};

struct SolveReport {
  std::string method;
  Solution solution;
  std::vector<LevelStats> levels;  ///< finest first
  bool coarsest_optimal = false;
  bool budget_exhausted = false;
  double coarsen_seconds = 0.0;
  double coarsest_seconds = 0.0;
  double uncoarsen_seconds = 0.0;
  double total_seconds = 0.0;
  std::size_t subproblems = 0;
  std::size_t iterations = 0;
  /// objective over time: after each phase for the multilevel solver,
  /// best-so-far for local search
  std::vector<TracePoint> trace;
};

/// Coarsening options derived from a V-cycle configuration.
CoarseningOptions coarsening_options(const VCycleConfig& cfg);

/// Levels from repeated coarsening, stopping once a level has at most
/// coarsest_size nodes, when coarsening stalls, or at max_levels. Level l is
/// built with seed mix_seed(cfg.seed, l).
std::vector<HierarchyLevel> build_hierarchy(const ResponseInstance& inst, const VCycleConfig& cfg);

/// One V-cycle: coarsen until at most coarsest_size nodes remain (or
/// coarsening stalls), solve the coarsest problem exactly, then interpolate,
/// smooth and refine level by level back to the input. The coarsest level is
/// not refined. The returned solution is always feasible.
SolveReport ms_solve(const ResponseInstance& inst, const VCycleConfig& cfg);

}  // namespace optresp
