#include "optresp/algdist.hpp"

#include <cmath>

#include "optresp/kernels.hpp"
#include "optresp/rng.hpp"

namespace optresp {

void AlgDistParams::validate() const {
  if (!(omega > 0.0 && omega < 1.0)) throw ValidationError("omega must lie in (0, 1)");
  if (num_vectors < 1) throw ValidationError("algebraic distance needs at least one test vector");
  if (num_iters < 1) throw ValidationError("algebraic distance needs at least one iteration");
  if (!(norm_p >= 1.0)) throw ValidationError("norm p must be >= 1 (or infinity)");
}

std::vector<double> jor_iterate(const WeightedGraph& g, std::span<const double> chi, double omega,
                                Execution exec) {
  if (chi.size() != g.num_nodes()) throw ValidationError("test vector has wrong length");
  std::vector<double> out(chi.size());
  if (exec == Execution::parallel) {
    kernels::parallel::jor_apply(g, omega, chi, out);
  } else {
    kernels::serial::jor_apply(g, omega, chi, out);
  }
  return out;
}

EdgeDistances algebraic_distances_from(const WeightedGraph& g, const AlgDistParams& params,
                                       std::vector<double> vectors, Execution exec) {
  params.validate();
  const std::size_t n = g.num_nodes();
  if (vectors.size() != n * params.num_vectors) {
    throw ValidationError("expected num_vectors * n initial values");
  }
  std::vector<double> scratch(n);
  for (std::size_t r = 0; r < params.num_vectors; ++r) {
    std::span<double> chi(vectors.data() + r * n, n);
    for (std::size_t k = 0; k < params.num_iters; ++k) {
      if (exec == Execution::parallel) {
        kernels::parallel::jor_apply(g, params.omega, chi, scratch);
      } else {
        kernels::serial::jor_apply(g, params.omega, chi, scratch);
      }
      std::copy(scratch.begin(), scratch.end(), chi.begin());
    }
  }
  EdgeDistances dist;
  dist.rho.resize(g.num_edges());
  if (exec == Execution::parallel) {
    kernels::parallel::edge_distances(g, vectors, params.num_vectors, params.norm_p, dist.rho);
  } else {
    kernels::serial::edge_distances(g, vectors, params.num_vectors, params.norm_p, dist.rho);
  }
  return dist;
}

EdgeDistances algebraic_distances(const WeightedGraph& g, const AlgDistParams& params,
                                  std::uint64_t seed, Execution exec) {
  params.validate();
  Rng rng(seed);
  std::vector<double> vectors(g.num_nodes() * params.num_vectors);
  for (double& v : vectors) v = rng.uniform(-0.5, 0.5);
  return algebraic_distances_from(g, params, std::move(vectors), exec);
}

}  // namespace optresp
