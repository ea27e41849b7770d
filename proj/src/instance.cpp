#include "optresp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optresp {

namespace {

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw ValidationError(std::string(what) + " has length " + std::to_string(got) +
                          ", expected " + std::to_string(want));
  }
}

void check_unit_interval(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) {
      throw ValidationError(std::string(what) + "[" + std::to_string(i) + "] = " +
                            std::to_string(v[i]) + " is outside [0, 1]");
    }
  }
}

}  // namespace

void validate(const ResponseInstance& inst, bool allow_negative_a) {
  const std::size_t n = inst.num_nodes();
  check_length(inst.p.size(), inst.graph.num_edges(), "p");
  check_length(inst.phi.size(), n, "phi");
  check_length(inst.b.size(), n, "b");
  check_length(inst.a.size(), n, "a");
  check_unit_interval(inst.p, "p");
  check_unit_interval(inst.phi, "phi");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(inst.b[i] >= 0.0) || !std::isfinite(inst.b[i])) {
      throw ValidationError("b[" + std::to_string(i) + "] must be a finite value >= 0");
    }
    if (!std::isfinite(inst.a[i]) || (!allow_negative_a && inst.a[i] < 0.0)) {
      throw ValidationError("a[" + std::to_string(i) + "] must be finite and >= 0");
    }
  }
}

ResponseInstance make_instance(WeightedGraph g, std::vector<double> phi, std::vector<double> b,
                               std::vector<double> a) {
  ResponseInstance inst;
  inst.p = p_from_weights(g);
  inst.graph = std::move(g);
  inst.phi = std::move(phi);
  inst.b = std::move(b);
  inst.a = a.empty() ? std::vector<double>(inst.graph.num_nodes(), 0.0) : std::move(a);
  inst.p_from_weights = true;
  validate(inst, true);
  return inst;
}

ResponseInstance make_instance(WeightedGraph g, const NodeAttributes& attrs) {
  return make_instance(std::move(g), attrs.phi, attrs.b, attrs.a);
}

NodeAttributes attributes_of(const ResponseInstance& inst) { return {inst.phi, inst.b, inst.a}; }

void apply_degree_penalty(ResponseInstance& inst, double scale) {
  for (NodeId i = 0; i < inst.num_nodes(); ++i) inst.a[i] -= scale * inst.graph.weighted_degree(i);
}

std::size_t Solution::num_closed() const {
  return static_cast<std::size_t>(std::count(x.begin(), x.end(), std::uint8_t{0}));
}

double evaluate_objective(const ResponseInstance& inst, std::span<const std::uint8_t> x) {
  check_length(x.size(), inst.num_nodes(), "x");
  double total = 0.0;
  for (const Edge& e : inst.graph.edges()) {
    if (x[e.u] && x[e.v]) total += e.w;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i]) total += inst.a[i];
  }
  return total;
}

double non_infection_probability(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                                 NodeId i) {
  double prod = 1.0;
  for (const Neighbor& nb : inst.graph.neighbors(i)) {
    if (x[nb.node]) prod *= 1.0 - inst.transmission(nb);
  }
  return prod;
}

double constraint_violation(const ResponseInstance& inst, std::span<const std::uint8_t> x,
                            NodeId i) {
  const double lhs = static_cast<double>(x[i]) - non_infection_probability(inst, x, i);
  return std::max(0.0, lhs - inst.b[i]);
}

Solution is_feasible(const ResponseInstance& inst, Assignment x) {
  Solution sol;
  sol.objective = evaluate_objective(inst, x);
  for (NodeId i = 0; i < inst.num_nodes(); ++i) {
    if (x[i] && constraint_violation(inst, x, i) > kConstraintTol) sol.violated.push_back(i);
  }
  sol.feasible = sol.violated.empty();
  sol.x = std::move(x);
  return sol;
}

ExposureTracker::ExposureTracker(const ResponseInstance& inst, Assignment x)
    : inst_(&inst), x_(std::move(x)), survival_(inst.num_nodes(), 1.0) {
  check_length(x_.size(), inst.num_nodes(), "x");
  for (NodeId i = 0; i < inst.num_nodes(); ++i) survival_[i] = recompute_survival(i);
  objective_ = evaluate_objective(inst, x_);
}

double ExposureTracker::recompute_survival(NodeId i) const {
  return non_infection_probability(*inst_, x_, i);
}

double ExposureTracker::violation(NodeId i) const {
  return x_[i] ? std::max(0.0, open_excess(i)) : 0.0;
}

double ExposureTracker::open_gain(NodeId i) const {
  double gain = inst_->a[i];
  for (const Neighbor& nb : inst_->graph.neighbors(i)) {
    if (x_[nb.node]) gain += nb.weight;
  }
  return gain;
}

bool ExposureTracker::can_open(NodeId i) const {
  if (open_excess(i) > kConstraintTol) return false;
  for (const Neighbor& nb : inst_->graph.neighbors(i)) {
    if (!x_[nb.node]) continue;
    // transmission from i into nb.node uses phi_i on the same edge
    const double q = inst_->p[nb.edge] * inst_->phi[i];
    const double s = survival_[nb.node] * (1.0 - q);
    if (1.0 - s - inst_->b[nb.node] > kConstraintTol) return false;
  }
  return true;
}

void ExposureTracker::open(NodeId i) {
  if (x_[i]) return;
  objective_ += open_gain(i);
  x_[i] = 1;
  for (const Neighbor& nb : inst_->graph.neighbors(i)) {
    survival_[nb.node] *= 1.0 - inst_->p[nb.edge] * inst_->phi[i];
  }
}

void ExposureTracker::close(NodeId i) {
  if (!x_[i]) return;
  x_[i] = 0;
  objective_ -= open_gain(i);
  for (const Neighbor& nb : inst_->graph.neighbors(i)) survival_[nb.node] = recompute_survival(nb.node);
}

bool ExposureTracker::feasible() const {
  for (NodeId i = 0; i < inst_->num_nodes(); ++i) {
    if (x_[i] && open_excess(i) > kConstraintTol) return false;
  }
  return true;
}

Solution ExposureTracker::solution() const { return is_feasible(*inst_, x_); }

}  // namespace optresp
