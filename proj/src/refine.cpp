#include "optresp/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optresp/rng.hpp"

namespace optresp {

namespace {

std::vector<NodeId> nodes_by(std::size_t n, auto&& before) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), before);
  return order;
}

// Closes open nodes that are violated, worst first, until none is left.
void close_violated(ExposureTracker& tracker, std::span<const NodeId> candidates) {
  for (;;) {
    std::vector<std::pair<double, NodeId>> violated;
    for (NodeId i : candidates) {
      const double v = tracker.violation(i);
      if (v > kConstraintTol) violated.emplace_back(v, i);
    }
    if (violated.empty()) return;
    std::sort(violated.begin(), violated.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (auto [v, i] : violated) {
      if (tracker.violation(i) > kConstraintTol) tracker.close(i);
    }
  }
}

}  // namespace

Solution interpolate(const ResponseInstance& fine, const HierarchyLevel& level,
                     const Solution& coarse) {
  const std::size_t n = fine.num_nodes();
  if (level.aggregate_of.size() != n || level.split.size() != n) {
    throw ValidationError("hierarchy level does not match the fine instance");
  }
  if (coarse.x.size() != level.coarse_size) throw ValidationError("coarse solution has wrong length");
  if (!is_feasible(level.coarse, coarse.x).feasible) {
    throw ValidationError("cannot interpolate an infeasible coarse solution");
  }

  Assignment x(n, 0);
  std::vector<NodeId> seeds;
  for (NodeId i = 0; i < n; ++i) {
    if (level.split.is_seed[i]) {
      x[i] = coarse.x[level.aggregate_of[i]];
      seeds.push_back(i);
    }
  }
  ExposureTracker tracker(fine, std::move(x));
  close_violated(tracker, seeds);

  const auto order = nodes_by(n, [&](NodeId a, NodeId b) { return fine.phi[a] > fine.phi[b]; });
  for (NodeId i : order) {
    if (level.split.is_seed[i]) continue;
    if (tracker.open_gain(i) > 0.0 && tracker.can_open(i)) tracker.open(i);
  }

  Solution out = tracker.solution();
  Solution prolonged = is_feasible(fine, prolongate(level.aggregate_of, coarse.x));
  if (prolonged.feasible && prolonged.objective > out.objective) return prolonged;
  return out;
}

Solution gauss_seidel_sweep(const ResponseInstance& inst, const Solution& sol,
                            std::size_t max_sweeps, SweepStats* stats) {
  const std::size_t n = inst.num_nodes();
  const auto order = nodes_by(n, [&](NodeId a, NodeId b) {
    return inst.graph.weighted_degree(a) > inst.graph.weighted_degree(b);
  });
  ExposureTracker tracker(inst, sol.x);
  SweepStats local;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    ++local.sweeps;
    std::size_t flips = 0;
    for (NodeId i : order) {
      const double gain = tracker.open_gain(i);
      if (tracker.is_open(i)) {
        if (-gain > 0.0) {
          tracker.close(i);
          ++flips;
        }
      } else if (gain > 0.0 && tracker.can_open(i)) {
        tracker.open(i);
        ++flips;
      }
    }
    local.flips += flips;
    if (flips == 0) break;
  }
  if (stats) *stats = local;
  return tracker.solution();
}

std::vector<std::size_t> RefinePlan::subsets_with_color(std::uint32_t c) const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    if (color[s] == c) out.push_back(s);
  }
  return out;
}

namespace {

// For every node, the subsets whose closed neighborhood contains it; two
// subsets are within distance 2 exactly when some node lists both.
std::vector<std::vector<std::size_t>> conflicts(const WeightedGraph& g, const RefinePlan& plan) {
  std::vector<std::vector<std::uint32_t>> touching(g.num_nodes());
  for (std::size_t s = 0; s < plan.subsets.size(); ++s) {
    const auto id = static_cast<std::uint32_t>(s);
    for (NodeId i : plan.subsets[s]) {
      if (touching[i].empty() || touching[i].back() != id) touching[i].push_back(id);
      for (const Neighbor& nb : g.neighbors(i)) {
        if (touching[nb.node].empty() || touching[nb.node].back() != id) touching[nb.node].push_back(id);
      }
    }
  }
  std::vector<std::vector<std::size_t>> adj(plan.subsets.size());
  for (const auto& list : touching) {
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        adj[list[a]].push_back(list[b]);
        adj[list[b]].push_back(list[a]);
      }
    }
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return adj;
}

}  // namespace

// slack values within one bucket count as equally tight
constexpr double kSlackBucket = 0.05;

RefinePlan build_refine_plan(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                             std::size_t subset_cap, std::uint64_t seed) {
  if (subset_cap < 2) throw ValidationError("refinement subsets need a cap of at least 2");
  const std::size_t n = inst.num_nodes();
  if (x.size() != n) throw ValidationError("solution has wrong length");

  Rng rng(seed);
  std::vector<double> slack(n), jitter(n);
  for (NodeId i = 0; i < n; ++i) {
    const double exposure = 1.0 - non_infection_probability(inst, x, i);
    slack[i] = std::floor(std::abs(inst.b[i] - exposure) / kSlackBucket);
    jitter[i] = rng.uniform();
  }
  const auto seeds = nodes_by(n, [&](NodeId a, NodeId b) {
    return slack[a] != slack[b] ? slack[a] < slack[b] : jitter[a] < jitter[b];
  });

  RefinePlan plan;
  std::vector<std::uint8_t> covered(n, 0);
  std::vector<NodeId> queue;
  std::vector<Neighbor> order;
  for (NodeId s : seeds) {
    if (covered[s]) continue;
    std::vector<NodeId> subset{s};
    covered[s] = 1;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size() && subset.size() < subset_cap; ++head) {
      const auto row = inst.graph.neighbors(queue[head]);
      order.assign(row.begin(), row.end());
      for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[rng.below(k)]);
      for (const Neighbor& nb : order) {
        if (subset.size() >= subset_cap) break;
        if (covered[nb.node]) continue;
        covered[nb.node] = 1;
        subset.push_back(nb.node);
        queue.push_back(nb.node);
      }
    }
    std::sort(subset.begin(), subset.end());
    plan.subsets.push_back(std::move(subset));
  }

  const auto adj = conflicts(inst.graph, plan);
  plan.color.assign(plan.subsets.size(), 0);
  std::vector<std::uint8_t> used;
  for (std::size_t s = 0; s < plan.subsets.size(); ++s) {
    used.assign(plan.num_colors + 1, 0);
    for (std::size_t t : adj[s]) {
      if (t < s) used[plan.color[t]] = 1;
    }
    std::uint32_t c = 0;
    while (used[c]) ++c;
    plan.color[s] = c;
    plan.num_colors = std::max<std::size_t>(plan.num_colors, c + 1);
  }
  return plan;
}

bool plan_is_valid(const WeightedGraph& g, const RefinePlan& plan) {
  std::vector<std::uint8_t> seen(g.num_nodes(), 0);
  if (plan.color.size() != plan.subsets.size()) return false;
  for (const auto& subset : plan.subsets) {
    if (subset.empty() || !std::is_sorted(subset.begin(), subset.end())) return false;
    for (NodeId i : subset) {
      if (seen[i]) return false;
      seen[i] = 1;
    }
    // connectivity inside the subset
    std::vector<NodeId> stack{subset.front()};
    std::vector<NodeId> reached{subset.front()};
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (const Neighbor& nb : g.neighbors(u)) {
        if (std::binary_search(subset.begin(), subset.end(), nb.node) &&
            std::find(reached.begin(), reached.end(), nb.node) == reached.end()) {
          reached.push_back(nb.node);
          stack.push_back(nb.node);
        }
      }
    }
    if (reached.size() != subset.size()) return false;
  }
  if (std::find(seen.begin(), seen.end(), std::uint8_t{0}) != seen.end()) return false;
  const auto adj = conflicts(g, plan);
  for (std::size_t s = 0; s < adj.size(); ++s) {
    for (std::size_t t : adj[s]) {
      if (plan.color[s] == plan.color[t]) return false;
    }
  }
  return true;
}

namespace {

struct SubsetOutcome {
  bool boundary_feasible = true;
  bool optimal = true;
  double current = 0.0;
  double improved = 0.0;
  Assignment x;
};

SubsetOutcome solve_subset(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                           std::span<const NodeId> subset, const ExactOptions& exact) {
  SubsetOutcome out;
  const ReducedProblem rp = reduce_subset(inst, x, subset);
  if (!rp.boundary_feasible) {
    out.boundary_feasible = false;
    return out;
  }
  Assignment local(subset.size());
  for (std::size_t v = 0; v < subset.size(); ++v) local[v] = x[subset[v]];
  out.current = rp.objective(local);
  ExactOptions opts = exact;
  opts.limit = std::max(opts.limit, subset.size());
  ExactResult res = solve_exact(rp, opts);
  out.optimal = res.optimal;
  out.improved = res.objective;
  out.x = std::move(res.x);
  return out;
}

// Applies an outcome to x if it raises the objective by more than min_gain and
// leaves the subset and its neighbors feasible.
bool splice(const ResponseInstance& inst, Assignment& x, std::span<const NodeId> subset,
            const SubsetOutcome& outcome, double min_gain) {
  if (!outcome.boundary_feasible || outcome.x.empty()) return false;
  if (!(outcome.improved - outcome.current > min_gain)) return false;
  bool changed = false;
  for (std::size_t v = 0; v < subset.size(); ++v) changed |= x[subset[v]] != outcome.x[v];
  if (!changed) return false;

  Assignment previous(subset.size());
  for (std::size_t v = 0; v < subset.size(); ++v) {
    previous[v] = x[subset[v]];
    x[subset[v]] = outcome.x[v];
  }
  auto violated = [&](NodeId i) { return x[i] && constraint_violation(inst, x, i) > kConstraintTol; };
  bool ok = true;
  for (NodeId i : subset) {
    if (violated(i)) ok = false;
    for (const Neighbor& nb : inst.graph.neighbors(i)) {
      if (ok && violated(nb.node)) ok = false;
    }
    if (!ok) break;
  }
  if (!ok) {
    for (std::size_t v = 0; v < subset.size(); ++v) x[subset[v]] = previous[v];
    return false;
  }
  return true;
}

}  // namespace

Solution localized_refine(const ResponseInstance& inst, const Solution& sol, const RefinePlan& plan,
                          std::size_t passes, Execution exec, RefineStats* stats,
                          const ExactOptions& exact) {
  if (sol.x.size() != inst.num_nodes()) throw ValidationError("solution has wrong length");
  Assignment x = sol.x;
  double objective = evaluate_objective(inst, x);
  RefineStats local;

  std::vector<std::vector<std::size_t>> by_color(plan.num_colors);
  for (std::size_t s = 0; s < plan.subsets.size(); ++s) by_color[plan.color[s]].push_back(s);

  for (std::size_t pass = 0; pass < passes; ++pass) {
    for (const auto& members : by_color) {
      // well above the rounding error of a full evaluation, so accepted moves
      // show up as increases of the evaluated objective
      const double min_gain = 1e-10 * std::max(1.0, std::abs(objective));
      const std::size_t splices_before = local.splices;
      std::vector<SubsetOutcome> outcomes(members.size());
      if (exec == Execution::parallel) {
        const auto count = static_cast<std::int64_t>(members.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::int64_t k = 0; k < count; ++k) {
          outcomes[k] = solve_subset(inst, x, plan.subsets[members[k]], exact);
        }
        for (std::size_t k = 0; k < members.size(); ++k) {
          if (splice(inst, x, plan.subsets[members[k]], outcomes[k], min_gain)) ++local.splices;
        }
      } else {
        for (std::size_t k = 0; k < members.size(); ++k) {
          outcomes[k] = solve_subset(inst, x, plan.subsets[members[k]], exact);
          if (splice(inst, x, plan.subsets[members[k]], outcomes[k], min_gain)) ++local.splices;
        }
      }
      for (const SubsetOutcome& o : outcomes) {
        ++local.subproblems;
        if (!o.boundary_feasible) ++local.boundary_infeasible;
        if (!o.optimal) ++local.budget_hits;
      }
      if (local.splices != splices_before) objective = evaluate_objective(inst, x);
      local.trace.push_back(objective);
    }
  }
  if (stats) *stats = std::move(local);
  return is_feasible(inst, std::move(x));
}

}  // namespace optresp
