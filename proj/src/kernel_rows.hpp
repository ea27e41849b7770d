#pragma once

// Per-element bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

#include "optresp/graph.hpp"

namespace optresp::kernels::rows {

inline double jor(const WeightedGraph& g, double omega, std::span<const double> in, NodeId i) {
  const double d = g.weighted_degree(i);
  if (g.degree(i) == 0) return in[i];
  double acc = 0.0;
  // difference form keeps constant vectors fixed exactly
  for (const Neighbor& nb : g.neighbors(i)) acc += nb.weight * (in[nb.node] - in[i]);
  return in[i] + omega * (acc / d);
}

inline double spread(const WeightedGraph& g, std::span<const double> p, std::span<const double> in,
                     NodeId i) {
  double total_p = 0.0;
  for (const Neighbor& nb : g.neighbors(i)) total_p += p[nb.edge];
  if (total_p <= 0.0) return in[i];
  double inflow = 0.0;
  for (const Neighbor& nb : g.neighbors(i)) inflow += (p[nb.edge] / total_p) * in[nb.node];
  return std::min(1.0, in[i] + inflow);
}

inline double sis(const WeightedGraph& g, std::span<const double> p, double delta,
                  std::span<const double> in, NodeId i) {
  double h = 1.0;
  for (const Neighbor& nb : g.neighbors(i)) h *= 1.0 - p[nb.edge] * in[nb.node];
  const double susceptible = (1.0 - in[i]) * h + delta * in[i] * h;
  return std::clamp(1.0 - susceptible, 0.0, 1.0);
}

inline double distance(std::span<const double> vectors, std::size_t n, std::size_t num_vectors,
                       double norm_p, NodeId u, NodeId v) {
  if (std::isinf(norm_p)) {
    double m = 0.0;
    for (std::size_t r = 0; r < num_vectors; ++r) {
      m = std::max(m, std::abs(vectors[r * n + u] - vectors[r * n + v]));
    }
    return m;
  }
  double acc = 0.0;
  for (std::size_t r = 0; r < num_vectors; ++r) {
    const double diff = std::abs(vectors[r * n + u] - vectors[r * n + v]);
    acc += norm_p == 2.0 ? diff * diff : (norm_p == 1.0 ? diff : std::pow(diff, norm_p));
  }
  if (norm_p == 1.0) return acc;
  return norm_p == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / norm_p);
}

}  // namespace optresp::kernels::rows
