#include "optresp/vcycle.hpp"

#include <chrono>

#include "optresp/rng.hpp"

namespace optresp {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Budget {
 public:
  Budget(Clock::time_point start, double seconds) : start_(start), seconds_(seconds) {}
  bool limited() const { return seconds_ > 0.0; }
  double remaining() const {
    if (!limited()) return 0.0;
    // 0 means unlimited downstream, so never hand out exactly zero
    return std::max(seconds_ - since(start_), 1e-6);
  }
  bool exhausted() const { return limited() && since(start_) >= seconds_; }

 private:
  Clock::time_point start_;
  double seconds_;
};

// Gauss-Seidel followed by rebuilt-plan refinement passes.
Solution smooth_and_refine(const ResponseInstance& inst, Solution sol, const VCycleConfig& cfg,
                           std::uint64_t level_seed, const Budget& budget, LevelStats& stats,
                           bool& budget_hit) {
  sol = gauss_seidel_sweep(inst, sol, cfg.gs_sweeps);
  stats.objective_smoothed = sol.objective;
  for (std::size_t pass = 0; pass < cfg.refine_passes; ++pass) {
    if (budget.exhausted()) {
      budget_hit = true;
      break;
    }
    const RefinePlan plan = build_refine_plan(inst, sol.x, cfg.subset_cap, mix_seed(level_seed, pass));
    ExactOptions exact;
    exact.limit = std::max(cfg.exact_limit, cfg.subset_cap);
    RefineStats rs;
    sol = localized_refine(inst, sol, plan, 1, cfg.exec, &rs, exact);
    stats.refine_trace.insert(stats.refine_trace.end(), rs.trace.begin(), rs.trace.end());
    stats.subproblems += rs.subproblems;
  }
  stats.objective_refined = sol.objective;
  return sol;
}

}  // namespace

void VCycleConfig::validate() const {
  algdist.validate();
  if (!(theta > 0.0 && theta < 1.0)) throw ValidationError("theta must lie in (0, 1)");
  if (subset_cap < 2) throw ValidationError("subset_cap must be at least 2");
  if (coarsest_size < subset_cap) throw ValidationError("coarsest_size must be at least subset_cap");
  if (!(time_budget >= 0.0)) throw ValidationError("time budget must be non-negative");
  if (max_levels == 0) throw ValidationError("max_levels must be positive");
}

CoarseningOptions coarsening_options(const VCycleConfig& cfg) {
  CoarseningOptions copts;
  copts.algdist = cfg.algdist;
  copts.theta = cfg.theta;
  copts.order = cfg.order;
  copts.scalars = cfg.scalars;
  copts.exec = cfg.exec;
  return copts;
}

std::vector<HierarchyLevel> build_hierarchy(const ResponseInstance& inst, const VCycleConfig& cfg) {
  cfg.validate();
  const CoarseningOptions copts = coarsening_options(cfg);
  std::vector<HierarchyLevel> hierarchy;
  const ResponseInstance* current = &inst;
  while (current->num_nodes() > cfg.coarsest_size && hierarchy.size() + 1 < cfg.max_levels) {
    auto level = coarsen(*current, copts, mix_seed(cfg.seed, hierarchy.size()));
    if (!level) break;
    hierarchy.push_back(std::move(*level));
    current = &hierarchy.back().coarse;
  }
  return hierarchy;
}

SolveReport ms_solve(const ResponseInstance& inst, const VCycleConfig& cfg) {
  cfg.validate();
  validate(inst, true);
  const auto start = Clock::now();
  const Budget budget(start, cfg.time_budget);

  SolveReport report;
  report.method = "multilevel";
  auto mark = [&](double objective) { report.trace.push_back({since(start), objective}); };

  // descent
  std::vector<HierarchyLevel> hierarchy = build_hierarchy(inst, cfg);
  const ResponseInstance* current = hierarchy.empty() ? &inst : &hierarchy.back().coarse;
  report.coarsen_seconds = since(start);

  report.levels.resize(hierarchy.size() + 1);
  for (std::size_t l = 0; l <= hierarchy.size(); ++l) {
    const ResponseInstance& lvl = l == 0 ? inst : hierarchy[l - 1].coarse;
    LevelStats& s = report.levels[l];
    s.level = l;
    s.num_nodes = lvl.num_nodes();
    s.num_edges = lvl.graph.num_edges();
    if (l < hierarchy.size()) {
      s.coarse_size = hierarchy[l].coarse_size;
      s.theta_used = hierarchy[l].theta_used;
      s.theta_retries = hierarchy[l].theta_retries;
    }
  }

  // coarsest level
  const auto t_coarsest = Clock::now();
  Solution sol;
  LevelStats& bottom = report.levels.back();
  if (current->num_nodes() <= cfg.exact_limit) {
    ExactOptions opts;
    opts.limit = cfg.exact_limit;
    opts.time_budget = budget.remaining();
    ExactSolve exact = solve_exact(*current, opts);
    sol = std::move(exact.solution);
    report.coarsest_optimal = exact.optimal;
    if (!exact.optimal) report.budget_exhausted = true;
    bottom.objective_interpolated = bottom.objective_smoothed = bottom.objective_refined = sol.objective;
  } else {
    // coarsening stalled above the exact limit: start from all closed
    bool hit = false;
    sol = is_feasible(*current, Assignment(current->num_nodes(), 0));
    bottom.objective_interpolated = sol.objective;
    sol = smooth_and_refine(*current, std::move(sol), cfg, mix_seed(cfg.seed ^ 0x5bd1e995u, hierarchy.size()),
                            budget, bottom, hit);
    report.budget_exhausted |= hit;
  }
  bottom.seconds = since(t_coarsest);
  report.subproblems += bottom.subproblems;
  report.coarsest_seconds = bottom.seconds;
  mark(sol.objective);

  // ascent
  const auto t_up = Clock::now();
  for (std::size_t l = hierarchy.size(); l-- > 0;) {
    const auto t_level = Clock::now();
    const ResponseInstance& fine = l == 0 ? inst : hierarchy[l - 1].coarse;
    LevelStats& s = report.levels[l];
    sol = interpolate(fine, hierarchy[l], sol);
    s.objective_interpolated = sol.objective;
    mark(sol.objective);
    bool hit = false;
    sol = smooth_and_refine(fine, std::move(sol), cfg, mix_seed(cfg.seed ^ 0x5bd1e995u, l), budget, s, hit);
    report.budget_exhausted |= hit;
    report.subproblems += s.subproblems;
    s.seconds = since(t_level);
    mark(sol.objective);
  }
  report.uncoarsen_seconds = since(t_up);

  if (!sol.feasible) throw Error("internal error: multilevel solve produced an infeasible solution");
  report.solution = std::move(sol);
  report.iterations = 1;
  report.total_seconds = since(start);
  return report;
}

}  // namespace optresp
