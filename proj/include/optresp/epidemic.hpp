#pragma once

#include <cstdint>
#include <vector>

#include "optresp/generators.hpp"
#include "optresp/instance.hpp"

namespace optresp {

/// Mean-field SIS rates.
struct SISParams {
  double beta = 0.0;   ///< transmission rate
  double delta = 0.0;  ///< recovery rate
  double k_avg = 1.0;  ///< average degree
};

struct SISState {
  double susceptible = 0.0;
  double infected = 0.0;
};

/// One explicit Euler step of dI/dt = lambda S - delta I, dS/dt = -dI/dt with
/// lambda = beta <k> I / (S + I), before any clamping.
SISState mean_field_euler(SISState s, const SISParams& params, double dt);

/// mean_field_euler followed by clamping both classes at zero.
SISState mean_field_step(SISState s, const SISParams& params, double dt);

/// Node-level SIS update: h_i = prod_j (1 - p_ij phi_j), then
/// 1 - phi_i' = (1 - phi_i) h_i + delta phi_i h_i, clamped to [0, 1].
std::vector<double> node_sis_step(const ResponseInstance& inst, std::span<const double> phi_prev,
                                  double delta, Execution exec = Execution::parallel);

/// phi for an outbreak: ceil(fraction * n) nodes picked uniformly get a value
/// from `high`, the rest get `background`.
std::vector<double> seed_outbreak(std::size_t num_nodes, double fraction, Range high,
                                  std::uint64_t seed, double background = 0.0);

/// Synchronous spreading, `iterations` times:
/// phi_i <- min(1, phi_i + sum_j p_ij / (sum_k p_ik) phi_j).
std::vector<double> spread_iterate(const ResponseInstance& inst, std::vector<double> phi,
                                   std::size_t iterations, Execution exec = Execution::parallel);

}  // namespace optresp
