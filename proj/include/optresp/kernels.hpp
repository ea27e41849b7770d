#pragma once

// Data-parallel inner loops. `serial` is the reference each `parallel` kernel
// is tested against; both compute every output element with the same
// arithmetic, so their results are bitwise identical.

#include <span>

#include "optresp/graph.hpp"

namespace optresp::kernels {

namespace serial {

/// out = ((1 - omega) I + omega D^-1 W) in; isolated nodes copy their input.
void jor_apply(const WeightedGraph& g, double omega, std::span<const double> in,
               std::span<double> out);

/// out_i = min(1, in_i + sum_j p_ij / (sum_k p_ik) * in_j)
void spread_apply(const WeightedGraph& g, std::span<const double> p, std::span<const double> in,
                  std::span<double> out);

/// out_i = 1 - h_i ((1 - in_i) + delta in_i), h_i = prod_j (1 - p_ij in_j), clamped to [0, 1]
void sis_apply(const WeightedGraph& g, std::span<const double> p, double delta,
               std::span<const double> in, std::span<double> out);

/// rho_e = (sum_r |x_r[u] - x_r[v]|^norm_p)^(1/norm_p) over `num_vectors`
/// vectors stored back to back in `vectors`; norm_p = inf gives the max norm.
void edge_distances(const WeightedGraph& g, std::span<const double> vectors,
                    std::size_t num_vectors, double norm_p, std::span<double> rho);

}  // namespace serial

namespace parallel {

void jor_apply(const WeightedGraph& g, double omega, std::span<const double> in,
               std::span<double> out);
void spread_apply(const WeightedGraph& g, std::span<const double> p, std::span<const double> in,
                  std::span<double> out);
void sis_apply(const WeightedGraph& g, std::span<const double> p, double delta,
               std::span<const double> in, std::span<double> out);
void edge_distances(const WeightedGraph& g, std::span<const double> vectors,
                    std::size_t num_vectors, double norm_p, std::span<double> rho);

}  // namespace parallel

/// Thread count from OPTRESP_THREADS, if set; returns the count in effect.
int configure_threads_from_env();

}  // namespace optresp::kernels
