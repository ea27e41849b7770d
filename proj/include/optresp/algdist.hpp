#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "optresp/graph.hpp"

namespace optresp {

/// Test-vector relaxation settings for algebraic distance.
struct AlgDistParams {
  double omega = 0.5;            ///< JOR damping, in (0, 1)
  std::size_t num_vectors = 10;  ///< R
  std::size_t num_iters = 20;    ///< k
  double norm_p = 2.0;           ///< p in [1, inf]; infinity selects the max norm

  void validate() const;
};

/// Floor applied to rho before inverting it into a coupling strength.
inline constexpr double kMinDistance = 1e-12;

struct EdgeDistances {
  std::vector<double> rho;  ///< per edge id

  /// 1 / max(rho_e, kMinDistance)
  double coupling(EdgeId e) const { return 1.0 / std::max(rho[e], kMinDistance); }
};

/// One application of H = (1 - omega) I + omega D^-1 W. Isolated nodes keep
/// their value.
std::vector<double> jor_iterate(const WeightedGraph& g, std::span<const double> chi, double omega,
                                Execution exec = Execution::parallel);

/// Relaxes each of the given test vectors (stored back to back, n values
/// each) num_iters times and returns rho per edge.
EdgeDistances algebraic_distances_from(const WeightedGraph& g, const AlgDistParams& params,
                                       std::vector<double> vectors,
                                       Execution exec = Execution::parallel);

/// Same, with num_vectors initial vectors drawn uniformly from [-0.5, 0.5]
/// (vector by vector, node by node) from a generator seeded with `seed`.
EdgeDistances algebraic_distances(const WeightedGraph& g, const AlgDistParams& params,
                                  std::uint64_t seed, Execution exec = Execution::parallel);

}  // namespace optresp
