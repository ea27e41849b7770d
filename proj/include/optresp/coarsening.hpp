#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "optresp/algdist.hpp"
#include "optresp/instance.hpp"

namespace optresp {

enum class TraversalOrder { descending_phi, ascending_phi };

/// How phi and b of the fine nodes in an aggregate combine into one value.
enum class ScalarAggregation { mean, sum, max };

/// Partition of the fine nodes into seeds (C) and the rest (F).
struct FCSplit {
  std::vector<std::uint8_t> is_seed;

  std::size_t size() const noexcept { return is_seed.size(); }
  std::vector<NodeId> seeds() const;
  std::vector<NodeId> fine() const;
  std::size_t num_seeds() const;
};

/// Visits nodes by phi (descending by default, ties by id) and makes node i a
/// seed when its coupling to the seeds chosen so far is weak:
///
///   sum_{j in N(i), j in C} 1/rho_ij  /  sum_{j in N(i)} 1/rho_ij  <  theta
///
/// Nodes without neighbors always become seeds.
FCSplit fc_split(const WeightedGraph& g, const EdgeDistances& dist, std::span<const double> phi,
                 double theta, TraversalOrder order = TraversalOrder::descending_phi);

struct Aggregation {
  /// fine node -> coarse node; the single nonzero of row i of R
  std::vector<NodeId> aggregate_of;
  /// coarse node -> its seed
  std::vector<NodeId> seed_of;
  /// split after any promotions
  FCSplit split;
  std::size_t promoted = 0;

  std::size_t num_aggregates() const noexcept { return seed_of.size(); }
};

/// Each seed opens an aggregate (numbered by seed id); every other node joins
/// the seed neighbor with the strongest coupling (ties to the smaller id).
/// Nodes with no seed neighbor take the aggregate of their most strongly
/// coupled already-assigned neighbor, in rounds; anything still unassigned is
/// promoted to a seed.
Aggregation aggregate(const WeightedGraph& g, FCSplit split, const EdgeDistances& dist);

/// Coarse problem for an aggregation map:
///   W_IJ = sum of fine weights between I and J,
///   A_I  = sum of fine weights inside I + sum of fine a over I,
///   P_IJ = p_from_weights(W) when the fine p came from weights, otherwise the
///          mean fine p over edges between I and J,
///   Phi, B = mean (or sum / max) of the fine values over I.
ResponseInstance coarse_instance(const ResponseInstance& fine, std::span<const NodeId> aggregate_of,
                                 std::size_t num_aggregates,
                                 ScalarAggregation scalars = ScalarAggregation::mean);

/// x_i = X_{aggregate_of(i)}
Assignment prolongate(std::span<const NodeId> aggregate_of, std::span<const std::uint8_t> coarse_x);

struct CoarseningOptions {
  AlgDistParams algdist;
  double theta = 0.5;
  TraversalOrder order = TraversalOrder::descending_phi;
  ScalarAggregation scalars = ScalarAggregation::mean;
  /// a level with coarse/fine >= stall_ratio is retried with a smaller theta
  double stall_ratio = 0.95;
  double theta_step = 0.1;
  int max_theta_retries = 3;
  Execution exec = Execution::parallel;
};

struct HierarchyLevel {
  FCSplit split;
  std::vector<NodeId> aggregate_of;
  ResponseInstance coarse;
  std::size_t fine_size = 0;
  std::size_t coarse_size = 0;
  double theta_used = 0.0;
  int theta_retries = 0;
};

/// One coarsening step: algebraic distances, split, aggregation, coarse
/// problem. Returns nothing when every allowed theta stalls.
std::optional<HierarchyLevel> coarsen(const ResponseInstance& fine, const CoarseningOptions& opts,
                                      std::uint64_t seed);

}  // namespace optresp
