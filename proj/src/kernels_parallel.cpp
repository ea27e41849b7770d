#include <cstdlib>
#include <string>

#include <omp.h>

#include "kernel_rows.hpp"
#include "optresp/kernels.hpp"

namespace optresp::kernels {

namespace parallel {

namespace {
// below this many nodes the fork/join costs more than the loop
constexpr std::int64_t kMinParallel = 2048;
}

void jor_apply(const WeightedGraph& g, double omega, std::span<const double> in,
               std::span<double> out) {
  const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::int64_t i = 0; i < n; ++i) out[i] = rows::jor(g, omega, in, static_cast<NodeId>(i));
}

void spread_apply(const WeightedGraph& g, std::span<const double> p, std::span<const double> in,
                  std::span<double> out) {
  const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::int64_t i = 0; i < n; ++i) out[i] = rows::spread(g, p, in, static_cast<NodeId>(i));
}

void sis_apply(const WeightedGraph& g, std::span<const double> p, double delta,
               std::span<const double> in, std::span<double> out) {
  const auto n = static_cast<std::int64_t>(g.num_nodes());
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (std::int64_t i = 0; i < n; ++i) out[i] = rows::sis(g, p, delta, in, static_cast<NodeId>(i));
}

void edge_distances(const WeightedGraph& g, std::span<const double> vectors,
                    std::size_t num_vectors, double norm_p, std::span<double> rho) {
  const std::size_t n = g.num_nodes();
  const auto m = static_cast<std::int64_t>(g.num_edges());
#pragma omp parallel for schedule(static) if (m >= kMinParallel)
  for (std::int64_t e = 0; e < m; ++e) {
    const Edge& edge = g.edge(static_cast<EdgeId>(e));
    rho[e] = rows::distance(vectors, n, num_vectors, norm_p, edge.u, edge.v);
  }
}

}  // namespace parallel

int configure_threads_from_env() {
  if (const char* env = std::getenv("OPTRESP_THREADS")) {
    try {
      const int threads = std::stoi(env);
      if (threads > 0) omp_set_num_threads(threads);
    } catch (const std::exception&) {
      // ignore malformed values and keep the OpenMP default
    }
  }
  return omp_get_max_threads();
}

}  // namespace optresp::kernels
