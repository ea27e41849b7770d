#pragma once

#include <cstdint>

#include "optresp/vcycle.hpp"

namespace optresp {

struct ILSConfig {
  double perturb_fraction = 0.05;
  std::size_t max_iterations = 1000;  ///< 0 = until the time budget runs out
  double time_budget = 0.0;           ///< seconds, 0 = unlimited
  std::uint64_t seed = 1;
  std::size_t gs_sweeps = 50;

  void validate() const;
};

/// Iterated local search: descend from all-closed with Gauss-Seidel sweeps,
/// then repeatedly flip a random perturb_fraction of the nodes, close violated
/// nodes (worst first) until feasible, descend again and keep the result if it
/// beats the incumbent. Stops after max_iterations or when the budget runs
/// out; at least one iteration is made whenever the budget is limited. The
/// trace holds the best objective after every improvement.
SolveReport ils_solve(const ResponseInstance& inst, const ILSConfig& cfg);

}  // namespace optresp
