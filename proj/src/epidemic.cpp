#include "optresp/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optresp/kernels.hpp"
#include "optresp/rng.hpp"

namespace optresp {

SISState mean_field_euler(SISState s, const SISParams& params, double dt) {
  if (!(dt > 0.0)) throw ValidationError("mean-field step needs dt > 0");
  if (params.beta < 0.0 || params.delta < 0.0 || !(params.k_avg > 0.0)) {
    throw ValidationError("SIS parameters need beta, delta >= 0 and k_avg > 0");
  }
  const double total = s.susceptible + s.infected;
  if (s.susceptible < 0.0 || s.infected < 0.0 || !(total > 0.0)) {
    throw ValidationError("mean-field state needs S, I >= 0 and S + I > 0");
  }
  const double lambda = params.beta * params.k_avg * s.infected / total;
  const double flow = lambda * s.susceptible - params.delta * s.infected;
  return {s.susceptible - dt * flow, s.infected + dt * flow};
}

SISState mean_field_step(SISState s, const SISParams& params, double dt) {
  SISState next = mean_field_euler(s, params, dt);
  next.susceptible = std::max(0.0, next.susceptible);
  next.infected = std::max(0.0, next.infected);
  return next;
}

std::vector<double> node_sis_step(const ResponseInstance& inst, std::span<const double> phi_prev,
                                  double delta, Execution exec) {
  if (phi_prev.size() != inst.num_nodes()) throw ValidationError("phi has wrong length");
  std::vector<double> next(inst.num_nodes());
  if (exec == Execution::parallel) {
    kernels::parallel::sis_apply(inst.graph, inst.p, delta, phi_prev, next);
  } else {
    kernels::serial::sis_apply(inst.graph, inst.p, delta, phi_prev, next);
  }
  return next;
}

std::vector<double> seed_outbreak(std::size_t num_nodes, double fraction, Range high,
                                  std::uint64_t seed, double background) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("outbreak fraction must lie in (0, 1]");
  if (!(high.lo >= 0.0 && high.hi <= 1.0 && high.lo <= high.hi)) {
    throw ValidationError("outbreak phi range must be a sub-interval of [0, 1]");
  }
  // 0.05 * 20 must give 1, not 2
  const double scaled = fraction * static_cast<double>(num_nodes);
  const auto count = static_cast<std::size_t>(std::ceil(scaled - 1e-9 * std::max(1.0, scaled)));
  if (count < 1) throw ValidationError("outbreak fraction selects no node");

  Rng rng(seed);
  std::vector<NodeId> order(num_nodes);
  std::iota(order.begin(), order.end(), NodeId{0});
  // partial Fisher-Yates: the first `count` entries are a uniform sample
  for (std::size_t k = 0; k < count; ++k) {
    const auto pick = k + static_cast<std::size_t>(rng.below(num_nodes - k));
    std::swap(order[k], order[pick]);
  }
  std::vector<double> phi(num_nodes, background);
  for (std::size_t k = 0; k < count; ++k) phi[order[k]] = rng.uniform(high.lo, high.hi);
  return phi;
}

std::vector<double> spread_iterate(const ResponseInstance& inst, std::vector<double> phi,
                                   std::size_t iterations, Execution exec) {
  if (phi.size() != inst.num_nodes()) throw ValidationError("phi has wrong length");
  std::vector<double> next(phi.size());
  for (std::size_t it = 0; it < iterations; ++it) {
    if (exec == Execution::parallel) {
      kernels::parallel::spread_apply(inst.graph, inst.p, phi, next);
    } else {
      kernels::serial::spread_apply(inst.graph, inst.p, phi, next);
    }
    phi.swap(next);
  }
  return phi;
}

}  // namespace optresp
