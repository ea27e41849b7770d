#include "optresp/generators.hpp"

#include <string>

#include "optresp/rng.hpp"

namespace optresp {

namespace {

void check_range(const Range& r, double lo, double hi, bool open_low, const char* what) {
  const bool low_ok = open_low ? r.lo > lo : r.lo >= lo;
  if (!(low_ok && r.hi <= hi && r.lo <= r.hi)) {
    throw ValidationError(std::string(what) + " range [" + std::to_string(r.lo) + ", " +
                          std::to_string(r.hi) + "] is not a sub-interval of " +
                          (open_low ? "(" : "[") + std::to_string(lo) + ", " + std::to_string(hi) +
                          "]");
  }
}

}  // namespace

ResponseInstance erdos_renyi_instance(const ErdosRenyiParams& params, std::uint64_t seed) {
  if (params.n < 2) throw ValidationError("erdos_renyi_instance needs n >= 2");
  if (!(params.edge_prob >= 0.0 && params.edge_prob <= 1.0)) {
    throw ValidationError("edge probability must lie in [0, 1]");
  }
  check_range(params.weight, 0.0, 1.0, true, "weight");
  check_range(params.phi, 0.0, 1.0, false, "phi");
  check_range(params.b, 0.0, 1.0, false, "b");

  Rng rng(seed);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < params.n; ++i) {
    for (NodeId j = i + 1; j < params.n; ++j) {
      if (rng.bernoulli(params.edge_prob)) {
        edges.push_back({i, j, rng.uniform(params.weight.lo, params.weight.hi)});
      }
    }
  }
  if (edges.empty()) {
    throw ValidationError("generated graph has no edges; increase the edge probability");
  }
  std::vector<double> phi(params.n), b(params.n);
  for (auto& v : phi) v = rng.uniform(params.phi.lo, params.phi.hi);
  for (auto& v : b) v = rng.uniform(params.b.lo, params.b.hi);
  return make_instance(WeightedGraph(params.n, edges), std::move(phi), std::move(b));
}

}  // namespace optresp
