#include "optresp/subsolver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>

namespace optresp {

BoundaryCondition BoundaryCondition::all_free(std::size_t n) {
  return BoundaryCondition{std::vector<std::int8_t>(n, -1)};
}

BoundaryCondition BoundaryCondition::around(std::span<const std::uint8_t> x,
                                            std::span<const NodeId> subset) {
  BoundaryCondition bc;
  bc.value.assign(x.begin(), x.end());
  for (NodeId i : subset) bc.value[i] = -1;
  return bc;
}

std::vector<NodeId> BoundaryCondition::free_nodes() const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < value.size(); ++i) {
    if (value[i] < 0) out.push_back(i);
  }
  return out;
}

double ReducedProblem::objective(std::span<const std::uint8_t> x) const {
  double total = 0.0;
  for (const Edge& e : edges) {
    if (x[e.u] && x[e.v]) total += e.w;
  }
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (x[v]) total += linear[v];
  }
  return total;
}

bool ReducedProblem::feasible(std::span<const std::uint8_t> x) const {
  for (const ExposureConstraint& c : constraints) {
    if (c.owner != ExposureConstraint::kBoundaryOwner && !x[static_cast<std::size_t>(c.owner)]) continue;
    double prod = c.scale;
    for (auto [var, q] : c.terms) {
      if (x[var]) prod *= 1.0 - q;
    }
    if (1.0 - prod - c.bound > kConstraintTol) return false;
  }
  return true;
}

namespace {

// local(j) gives the variable index of node j or -1; fixed_open(j) tells
// whether a non-free node is fixed at 1.
template <class Local, class FixedOpen>
ReducedProblem build_reduced(const ResponseInstance& inst, std::vector<NodeId> free_nodes,
                             Local local, FixedOpen fixed_open) {
  ReducedProblem rp;
  rp.free_nodes = std::move(free_nodes);
  const std::size_t m = rp.free_nodes.size();
  rp.linear.resize(m);
  std::vector<NodeId> boundary;

  for (std::uint32_t v = 0; v < m; ++v) {
    const NodeId i = rp.free_nodes[v];
    ExposureConstraint c;
    c.owner = static_cast<std::int32_t>(v);
    c.node = i;
    c.bound = inst.b[i];
    double lin = inst.a[i];
    for (const Neighbor& nb : inst.graph.neighbors(i)) {
      const std::int32_t u = local(nb.node);
      if (u >= 0) {
        if (static_cast<std::uint32_t>(u) > v) rp.edges.push_back({v, static_cast<NodeId>(u), nb.weight});
        c.terms.emplace_back(static_cast<std::uint32_t>(u), inst.transmission(nb));
      } else if (fixed_open(nb.node)) {
        lin += nb.weight;
        c.scale *= 1.0 - inst.transmission(nb);
        boundary.push_back(nb.node);
      }
    }
    rp.linear[v] = lin;
    // x - scale * prod <= 1 always, so b >= 1 never binds
    if (c.bound < 1.0) rp.constraints.push_back(std::move(c));
  }

  std::sort(boundary.begin(), boundary.end());
  boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
  for (NodeId j : boundary) {
    if (inst.b[j] >= 1.0) continue;
    ExposureConstraint c;
    c.node = j;
    c.bound = inst.b[j];
    for (const Neighbor& nb : inst.graph.neighbors(j)) {
      const std::int32_t u = local(nb.node);
      if (u >= 0) {
        c.terms.emplace_back(static_cast<std::uint32_t>(u), inst.transmission(nb));
      } else if (fixed_open(nb.node)) {
        c.scale *= 1.0 - inst.transmission(nb);
      }
    }
    if (1.0 - c.scale - c.bound > kConstraintTol) rp.boundary_feasible = false;
    rp.constraints.push_back(std::move(c));
  }
  return rp;
}

}  // namespace

ReducedProblem reduce_with_boundary(const ResponseInstance& inst, const BoundaryCondition& bc) {
  const std::size_t n = inst.num_nodes();
  if (bc.value.size() != n) throw ValidationError("boundary condition has wrong length");
  std::vector<std::int32_t> local(n, -1);
  std::vector<NodeId> free_nodes;
  for (NodeId i = 0; i < n; ++i) {
    if (bc.value[i] < 0) {
      local[i] = static_cast<std::int32_t>(free_nodes.size());
      free_nodes.push_back(i);
    }
  }
  ReducedProblem rp = build_reduced(
      inst, std::move(free_nodes), [&](NodeId j) { return local[j]; },
      [&](NodeId j) { return bc.value[j] == 1; });

  Assignment fixed_x(n, 0);
  for (NodeId i = 0; i < n; ++i) fixed_x[i] = bc.value[i] == 1 ? 1 : 0;
  for (const Edge& e : inst.graph.edges()) {
    if (fixed_x[e.u] && fixed_x[e.v]) rp.offset += e.w;
  }
  for (NodeId i = 0; i < n; ++i) {
    if (fixed_x[i]) rp.offset += inst.a[i];
  }
  // open fixed nodes away from the free set: their constraint is settled
  for (NodeId i = 0; i < n; ++i) {
    if (fixed_x[i] && constraint_violation(inst, fixed_x, i) > kConstraintTol) {
      rp.boundary_feasible = false;
      break;
    }
  }
  return rp;
}

ReducedProblem reduce_subset(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                             std::span<const NodeId> sorted_subset) {
  auto local = [&](NodeId j) -> std::int32_t {
    auto it = std::lower_bound(sorted_subset.begin(), sorted_subset.end(), j);
    return (it != sorted_subset.end() && *it == j)
               ? static_cast<std::int32_t>(it - sorted_subset.begin())
               : -1;
  };
  return build_reduced(inst, std::vector<NodeId>(sorted_subset.begin(), sorted_subset.end()), local,
                       [&](NodeId j) { return x[j] != 0; });
}

namespace {

using Clock = std::chrono::steady_clock;

double tie_tolerance(double v) { return 1e-12 * std::max(1.0, std::abs(v)); }

class Deadline {
 public:
  explicit Deadline(double seconds)
      : limited_(seconds > 0.0),
        end_(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(limited_ ? seconds : 0.0))) {}

  // polls the clock every 1024 calls
  bool expired() {
    if (!limited_ || (++ticks_ & 1023u) != 0) return false;
    return Clock::now() >= end_;
  }

 private:
  bool limited_;
  Clock::time_point end_;
  std::uint32_t ticks_ = 0;
};

/// Search state over a reduced problem: a partial assignment (-1 undecided)
/// and, per constraint, scale times the factors of its open terms. Undecided
/// variables are treated as closed, which is the most permissive completion.
class SearchState {
 public:
  explicit SearchState(const ReducedProblem& rp) : rp_(rp), m_(rp.num_vars()) {
    adj_.resize(m_);
    for (const Edge& e : rp.edges) {
      adj_[e.u].emplace_back(e.v, e.w);
      adj_[e.v].emplace_back(e.u, e.w);
    }
    var_cons_.resize(m_);
    own_.assign(m_, -1);
    for (std::uint32_t c = 0; c < rp.constraints.size(); ++c) {
      const auto& con = rp.constraints[c];
      if (con.owner != ExposureConstraint::kBoundaryOwner) own_[static_cast<std::size_t>(con.owner)] = static_cast<std::int32_t>(c);
      for (auto [var, q] : con.terms) var_cons_[var].emplace_back(c, 1.0 - q);
    }
    reset();
  }

  void reset() {
    val_.assign(m_, -1);
    prod_.resize(rp_.constraints.size());
    for (std::size_t c = 0; c < prod_.size(); ++c) prod_[c] = rp_.constraints[c].scale;
    obj_ = 0.0;
    undo_.clear();
    undo_obj_.clear();
  }

  std::size_t num_vars() const { return m_; }
  std::int8_t value(std::size_t v) const { return val_[v]; }
  double objective() const { return obj_; }

  std::size_t mark() const { return undo_.size(); }

  void set_closed(std::uint32_t v) {
    val_[v] = 0;
    undo_.push_back({v, kVarMarker});
  }

  /// Opens v; returns false when a constraint is violated as a result (the
  /// change is still recorded and must be undone).
  bool set_open(std::uint32_t v) {
    val_[v] = 1;
    undo_.push_back({v, kVarMarker});
    undo_obj_.push_back(obj_);
    obj_ += rp_.linear[v];
    for (auto [u, w] : adj_[v]) {
      if (val_[u] == 1) obj_ += w;
    }
    bool ok = true;
    for (auto [c, factor] : var_cons_[v]) {
      undo_.push_back({c, prod_[c]});
      prod_[c] *= factor;
      if (ok && binding(c) && excess(c) > kConstraintTol) ok = false;
    }
    if (ok && own_[v] >= 0 && excess(static_cast<std::uint32_t>(own_[v])) > kConstraintTol) ok = false;
    return ok;
  }

  void undo_to(std::size_t mark) {
    while (undo_.size() > mark) {
      auto [id, saved] = undo_.back();
      undo_.pop_back();
      if (saved == kVarMarker) {
        if (val_[id] == 1) {
          obj_ = undo_obj_.back();
          undo_obj_.pop_back();
        }
        val_[id] = -1;
      } else {
        prod_[id] = saved;
      }
    }
  }

  /// Upper bound on any completion: current objective plus every positive
  /// linear term and edge weight still reachable. Undecided variables that
  /// cannot open under the current open set are excluded.
  double upper_bound(std::vector<std::uint8_t>& openable) const {
    openable.assign(m_, 0);
    double ub = obj_;
    for (std::uint32_t u = 0; u < m_; ++u) {
      if (val_[u] != -1 || !can_open(u)) continue;
      openable[u] = 1;
      ub += std::max(0.0, rp_.linear[u]);
    }
    for (const Edge& e : rp_.edges) {
      const bool reach_u = val_[e.u] == 1 || openable[e.u];
      const bool reach_v = val_[e.v] == 1 || openable[e.v];
      if (reach_u && reach_v && (val_[e.u] == -1 || val_[e.v] == -1)) ub += e.w;
    }
    return ub;
  }

  bool can_open(std::uint32_t u) const {
    if (own_[u] >= 0 && excess(static_cast<std::uint32_t>(own_[u])) > kConstraintTol) return false;
    for (auto [c, factor] : var_cons_[u]) {
      if (binding(c) && 1.0 - prod_[c] * factor - rp_.constraints[c].bound > kConstraintTol) return false;
    }
    return true;
  }

  Assignment assignment() const {
    Assignment x(m_);
    for (std::size_t v = 0; v < m_; ++v) x[v] = val_[v] == 1 ? 1 : 0;
    return x;
  }

 private:
  static constexpr double kVarMarker = std::numeric_limits<double>::lowest();

  bool binding(std::uint32_t c) const {
    const auto owner = rp_.constraints[c].owner;
    return owner == ExposureConstraint::kBoundaryOwner || val_[static_cast<std::size_t>(owner)] == 1;
  }
  double excess(std::uint32_t c) const { return 1.0 - prod_[c] - rp_.constraints[c].bound; }

  const ReducedProblem& rp_;
  std::size_t m_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj_;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> var_cons_;
  std::vector<std::int32_t> own_;
  std::vector<std::int8_t> val_;
  std::vector<double> prod_;
  double obj_ = 0.0;
  std::vector<std::pair<std::uint32_t, double>> undo_;
  std::vector<double> undo_obj_;
};

class Enumerator {
 public:
  Enumerator(const ReducedProblem& rp, Deadline& deadline) : state_(rp), deadline_(deadline) {}

  ExactResult run() {
    best_ = greedy_value();
    dfs(0);
    ExactResult res;
    res.x = std::move(best_x_);
    res.optimal = !timed_out_;
    res.nodes = nodes_;
    res.method = ExactMethod::enumerate;
    return res;
  }

 private:
  // open in index order whenever that is feasible and does not lose objective
  double greedy_value() {
    state_.reset();
    for (std::uint32_t v = 0; v < state_.num_vars(); ++v) {
      const std::size_t mark = state_.mark();
      const double before = state_.objective();
      if (!state_.set_open(v) || state_.objective() < before) {
        state_.undo_to(mark);
        state_.set_closed(v);
      }
    }
    const double value = state_.objective();
    state_.reset();
    return value;
  }

  // variables in index order, 0 before 1, so the first leaf reaching the best
  // value is the lexicographically smallest optimum; branches whose bound
  // falls short of the best value cannot change the answer and are cut
  void dfs(std::uint32_t v) {
    ++nodes_;
    if (timed_out_ || (timed_out_ = deadline_.expired())) return;
    if (v == state_.num_vars()) {
      const double obj = state_.objective();
      if (obj > best_ + tie_tolerance(best_) || (best_x_.empty() && obj >= best_ - tie_tolerance(best_))) {
        best_ = std::max(best_, obj);
        best_x_ = state_.assignment();
      }
      return;
    }
    const std::size_t mark = state_.mark();
    state_.set_closed(v);
    if (state_.upper_bound(openable_) >= best_ - tie_tolerance(best_)) dfs(v + 1);
    state_.undo_to(mark);
    if (state_.set_open(v) && state_.upper_bound(openable_) >= best_ - tie_tolerance(best_)) dfs(v + 1);
    state_.undo_to(mark);
  }

  SearchState state_;
  Deadline& deadline_;
  std::vector<std::uint8_t> openable_;
  double best_ = 0.0;
  Assignment best_x_;
  std::uint64_t nodes_ = 0;
  bool timed_out_ = false;
};

class BranchAndBound {
 public:
  BranchAndBound(const ReducedProblem& rp, Deadline& deadline)
      : rp_(rp), state_(rp), deadline_(deadline), m_(rp.num_vars()) {
    std::vector<double> incident(m_, 0.0);
    for (const Edge& e : rp.edges) {
      incident[e.u] += e.w;
      incident[e.v] += e.w;
    }
    order_.resize(m_);
    for (std::uint32_t v = 0; v < m_; ++v) order_[v] = v;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return incident[a] > incident[b]; });
  }

  ExactResult run() {
    greedy_incumbent();
    const bool proved = best_first();
    ExactResult res;
    res.nodes = nodes_;
    res.method = ExactMethod::branch_and_bound;
    if (!proved) {
      res.x = incumbent_x_;
      res.optimal = false;
      return res;
    }
    // the best-first pass fixes the optimal value; a lexicographic dive then
    // recovers the smallest optimal assignment
    state_.reset();
    target_ = incumbent_;
    found_.clear();
    if (lex_dfs(0) && !found_.empty()) {
      res.x = found_;
    } else {
      res.x = incumbent_x_;
    }
    res.nodes = nodes_;
    return res;
  }

 private:
  struct Node {
    double bound;
    std::uint32_t depth;
    std::uint64_t bits;  // value of order_[k] in bit k
  };
  struct NodeLess {
    bool operator()(const Node& a, const Node& b) const {
      return a.bound != b.bound ? a.bound < b.bound : a.depth < b.depth;
    }
  };

  void greedy_incumbent() {
    state_.reset();
    for (std::uint32_t v : order_) {
      const std::size_t mark = state_.mark();
      const double before = state_.objective();
      if (!state_.set_open(v) || state_.objective() < before) {
        state_.undo_to(mark);
        state_.set_closed(v);
      }
    }
    incumbent_ = state_.objective();
    incumbent_x_ = state_.assignment();
  }

  bool rebuild(const Node& node) {
    state_.reset();
    for (std::uint32_t k = 0; k < node.depth; ++k) {
      if ((node.bits >> k) & 1u) {
        if (!state_.set_open(order_[k])) return false;
      } else {
        state_.set_closed(order_[k]);
      }
    }
    return true;
  }

  void consider_complete() {
    if (state_.objective() > incumbent_ + tie_tolerance(incumbent_)) {
      incumbent_ = state_.objective();
      incumbent_x_ = state_.assignment();
    }
  }

  bool best_first() {
    std::priority_queue<Node, std::vector<Node>, NodeLess> open;
    state_.reset();
    open.push({state_.upper_bound(openable_), 0, 0});
    while (!open.empty()) {
      if (deadline_.expired()) return false;
      const Node node = open.top();
      open.pop();
      ++nodes_;
      if (node.bound <= incumbent_ + tie_tolerance(incumbent_)) break;
      rebuild(node);
      if (node.depth == m_) {
        consider_complete();
        continue;
      }
      const std::uint32_t var = order_[node.depth];
      for (int value = 1; value >= 0; --value) {
        const std::size_t mark = state_.mark();
        const bool ok = value ? state_.set_open(var) : (state_.set_closed(var), true);
        if (ok) {
          const Node child{0.0, node.depth + 1, node.bits | (static_cast<std::uint64_t>(value) << node.depth)};
          if (child.depth == m_) {
            consider_complete();
          } else {
            const double ub = state_.upper_bound(openable_);
            if (ub > incumbent_ + tie_tolerance(incumbent_)) open.push({ub, child.depth, child.bits});
          }
        }
        state_.undo_to(mark);
      }
    }
    return true;
  }

  bool lex_dfs(std::uint32_t v) {
    ++nodes_;
    if (deadline_.expired()) return false;
    if (v == m_) {
      if (state_.objective() >= target_ - tie_tolerance(target_)) found_ = state_.assignment();
      return true;
    }
    for (int value = 0; value <= 1 && found_.empty(); ++value) {
      const std::size_t mark = state_.mark();
      const bool ok = value ? state_.set_open(v) : (state_.set_closed(v), true);
      if (ok && state_.upper_bound(openable_) >= target_ - tie_tolerance(target_)) {
        if (!lex_dfs(v + 1)) return false;
      }
      state_.undo_to(mark);
    }
    return true;
  }

  const ReducedProblem& rp_;
  SearchState state_;
  Deadline& deadline_;
  std::size_t m_;
  std::vector<std::uint32_t> order_;
  std::vector<std::uint8_t> openable_;
  double incumbent_ = 0.0;
  Assignment incumbent_x_;
  double target_ = 0.0;
  Assignment found_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ExactResult solve_exact(const ReducedProblem& problem, const ExactOptions& opts) {
  const std::size_t m = problem.num_vars();
  if (!problem.boundary_feasible) throw ValidationError("subproblem is boundary-infeasible");
  if (m > opts.limit || m > 64) {
    throw ValidationError("exact solve of " + std::to_string(m) + " variables exceeds the limit of " +
                          std::to_string(std::min<std::size_t>(opts.limit, 64)));
  }
  Deadline deadline(opts.time_budget);
  const bool enumerate =
      opts.method == ExactMethod::enumerate ||
      (opts.method == ExactMethod::automatic && m <= opts.enumeration_limit);
  ExactResult res = enumerate ? Enumerator(problem, deadline).run() : BranchAndBound(problem, deadline).run();
  if (res.x.empty()) res.x.assign(m, 0);
  res.objective = problem.objective(res.x);
  return res;
}

ExactSolve solve_exact(const ResponseInstance& inst, const ExactOptions& opts) {
  const ReducedProblem rp = reduce_with_boundary(inst, BoundaryCondition::all_free(inst.num_nodes()));
  ExactResult res = solve_exact(rp, opts);
  Assignment x(inst.num_nodes(), 0);
  for (std::size_t v = 0; v < rp.num_vars(); ++v) x[rp.free_nodes[v]] = res.x[v];
  return {is_feasible(inst, std::move(x)), res.optimal, res.nodes};
}

}  // namespace optresp
