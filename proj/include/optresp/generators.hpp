#pragma once

#include <cstdint>
#include <utility>

#include "optresp/instance.hpp"

namespace optresp {

struct Range {
  double lo;
  double hi;
};

struct ErdosRenyiParams {
  std::size_t n = 20;
  double edge_prob = 0.3;
  Range weight{0.1, 1.0};
  Range phi{0.0, 1.0};
  Range b{0.0, 1.0};
};

/// G(n, edge_prob) with weights, phi and b drawn uniformly from their ranges,
/// p = p_from_weights and a = 0. Bitwise reproducible for a given seed.
/// Throws ValidationError on bad ranges or when no edge was drawn.
ResponseInstance erdos_renyi_instance(const ErdosRenyiParams& params, std::uint64_t seed);

}  // namespace optresp
