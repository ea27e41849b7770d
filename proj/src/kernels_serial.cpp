#include "kernel_rows.hpp"
#include "optresp/kernels.hpp"

namespace optresp::kernels::serial {

void jor_apply(const WeightedGraph& g, double omega, std::span<const double> in,
               std::span<double> out) {
  for (NodeId i = 0; i < g.num_nodes(); ++i) out[i] = rows::jor(g, omega, in, i);
}

void spread_apply(const WeightedGraph& g, std::span<const double> p, std::span<const double> in,
                  std::span<double> out) {
  for (NodeId i = 0; i < g.num_nodes(); ++i) out[i] = rows::spread(g, p, in, i);
}

void sis_apply(const WeightedGraph& g, std::span<const double> p, double delta,
               std::span<const double> in, std::span<double> out) {
  for (NodeId i = 0; i < g.num_nodes(); ++i) out[i] = rows::sis(g, p, delta, in, i);
}

void edge_distances(const WeightedGraph& g, std::span<const double> vectors,
                    std::size_t num_vectors, double norm_p, std::span<double> rho) {
  const std::size_t n = g.num_nodes();
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    rho[e] = rows::distance(vectors, n, num_vectors, norm_p, g.edge(e).u, g.edge(e).v);
  }
}

}  // namespace optresp::kernels::serial
