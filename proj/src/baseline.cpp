#include "optresp/baseline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "optresp/rng.hpp"

namespace optresp {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Closing a node only raises its neighbors' survival, so this terminates.
Solution repair(const ResponseInstance& inst, Assignment x) {
  ExposureTracker tracker(inst, std::move(x));
  const std::size_t n = inst.num_nodes();
  for (;;) {
    std::vector<std::pair<double, NodeId>> violated;
    for (NodeId i = 0; i < n; ++i) {
      const double v = tracker.violation(i);
      if (v > kConstraintTol) violated.emplace_back(v, i);
    }
    if (violated.empty()) break;
    std::sort(violated.begin(), violated.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (auto [v, i] : violated) {
      if (tracker.violation(i) > kConstraintTol) tracker.close(i);
    }
  }
  return tracker.solution();
}

}  // namespace

void ILSConfig::validate() const {
  if (!(perturb_fraction > 0.0 && perturb_fraction < 1.0)) {
    throw ValidationError("perturb_fraction must lie in (0, 1)");
  }
  if (!(time_budget >= 0.0)) throw ValidationError("time budget must be non-negative");
  if (max_iterations == 0 && time_budget == 0.0) {
    throw ValidationError("local search needs an iteration limit or a time budget");
  }
  if (gs_sweeps == 0) throw ValidationError("gs_sweeps must be positive");
}

SolveReport ils_solve(const ResponseInstance& inst, const ILSConfig& cfg) {
  cfg.validate();
  validate(inst, true);
  const auto start = Clock::now();
  const std::size_t n = inst.num_nodes();

  SolveReport report;
  report.method = "ils";
  Rng rng(cfg.seed);

  Solution best = gauss_seidel_sweep(inst, is_feasible(inst, Assignment(n, 0)), cfg.gs_sweeps);
  report.trace.push_back({since(start), best.objective});

  const std::size_t flips = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.perturb_fraction * static_cast<double>(n))));
  std::vector<NodeId> pool(n);
  for (std::size_t it = 0; cfg.max_iterations == 0 || it < cfg.max_iterations; ++it) {
    if (cfg.time_budget > 0.0 && it > 0 && since(start) >= cfg.time_budget) {
      report.budget_exhausted = true;
      break;
    }
    Assignment x = best.x;
    std::iota(pool.begin(), pool.end(), NodeId{0});
    for (std::size_t k = 0; k < std::min(flips, n); ++k) {
      const std::size_t j = k + rng.below(n - k);
      std::swap(pool[k], pool[j]);
      x[pool[k]] ^= 1;
    }
    Solution candidate = gauss_seidel_sweep(inst, repair(inst, std::move(x)), cfg.gs_sweeps);
    ++report.iterations;
    if (candidate.objective > best.objective) {
      best = std::move(candidate);
      report.trace.push_back({since(start), best.objective});
    }
  }

  report.solution = std::move(best);
  report.total_seconds = since(start);
  return report;
}

}  // namespace optresp
