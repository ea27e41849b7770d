#include <algorithm>

#include "doctest.h"
#include "optresp/generators.hpp"
#include "optresp/rng.hpp"
#include "optresp/subsolver.hpp"
#include "oracles.hpp"

using namespace optresp;

namespace {

ResponseInstance random_small(Rng& rng, std::size_t n) {
  const std::size_t m_max = n * (n - 1) / 2;
  std::vector<Edge> edges;
  const double density = rng.uniform(0.1, 0.9);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(density)) edges.push_back({u, v, rng.uniform(0.1, 1.0)});
    }
  }
  if (edges.empty() && m_max > 0) edges.push_back({0, 1, 0.5});
  std::vector<double> phi(n), b(n), a(n);
  for (std::size_t i = 0; i < n; ++i) {
    phi[i] = rng.uniform();
    b[i] = rng.uniform(0.0, rng.uniform(0.1, 1.0));
    a[i] = rng.bernoulli(0.3) ? rng.uniform(0.0, 0.5) : 0.0;
  }
  auto inst = make_instance(WeightedGraph(n, edges), phi, b, a);
  if (rng.bernoulli(0.3)) {
    // explicit p instead of weight-derived
    for (auto& p : inst.p) p = rng.uniform();
    inst.p_from_weights = false;
  }
  return inst;
}

Assignment full_x(const ReducedProblem& rp, const BoundaryCondition& bc, const Assignment& xs) {
  Assignment x(bc.value.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = bc.is_free(i) ? 0 : bc.value[i];
  for (std::size_t v = 0; v < rp.num_vars(); ++v) x[rp.free_nodes[v]] = xs[v];
  return x;
}

}  // namespace

TEST_CASE("reduction without fixed nodes is the identity") {
  Rng rng(1);
  const auto inst = random_small(rng, 8);
  const auto rp = reduce_with_boundary(inst, BoundaryCondition::all_free(8));
  CHECK(rp.num_vars() == 8);
  CHECK(rp.offset == 0.0);
  CHECK(rp.linear == inst.a);
  CHECK(rp.edges.size() == inst.graph.num_edges());
  for (const auto& c : rp.constraints) CHECK(c.scale == 1.0);
}

TEST_CASE("reduction with every node fixed") {
  Rng rng(2);
  const auto inst = random_small(rng, 8);
  Assignment x(8, 0);
  for (auto& v : x) v = rng.bernoulli(0.5);
  const auto rp = reduce_with_boundary(inst, BoundaryCondition::around(x, {}));
  CHECK(rp.num_vars() == 0);
  CHECK(rp.offset == doctest::Approx(oracle::objective(inst, x)));
}

TEST_CASE("path with a free middle node") {
  const std::vector<Edge> e{{0, 1, 1.5}, {1, 2, 2.5}};
  auto inst = make_instance(WeightedGraph(3, e), {0.6, 0.3, 0.8}, {1, 0.2, 1}, {0, 0.25, 0});
  inst.p = {0.5, 0.4};
  inst.p_from_weights = false;
  const std::vector<NodeId> s{1};
  const auto rp = reduce_with_boundary(inst, BoundaryCondition::around(Assignment{1, 0, 1}, s));
  REQUIRE(rp.num_vars() == 1);
  CHECK(rp.linear[0] == doctest::Approx(0.25 + 1.5 + 2.5));
  const auto own = std::find_if(rp.constraints.begin(), rp.constraints.end(),
                                [](const ExposureConstraint& c) { return c.owner == 0; });
  REQUIRE(own != rp.constraints.end());
  CHECK(own->scale == doctest::Approx((1 - 0.5 * 0.6) * (1 - 0.4 * 0.8)));
  CHECK(own->terms.empty());
}

TEST_CASE("reduced problems agree with the full instance") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 3 + rng.below(14);
    const auto inst = random_small(rng, n);
    Assignment x(n, 0);
    for (auto& v : x) v = rng.bernoulli(0.4);
    std::vector<NodeId> subset;
    for (NodeId i = 0; i < n; ++i) {
      if (rng.bernoulli(0.4)) subset.push_back(i);
    }
    const auto bc = BoundaryCondition::around(x, subset);
    const auto rp = reduce_with_boundary(inst, bc);
    CHECK(rp.free_nodes == subset);

    auto base = x;
    for (NodeId i : subset) base[i] = 0;
    CHECK(rp.boundary_feasible == oracle::feasible(inst, base, kConstraintTol));
    if (!rp.boundary_feasible) continue;

    for (int k = 0; k < 10; ++k) {
      Assignment xs(rp.num_vars());
      for (auto& v : xs) v = rng.bernoulli(0.5);
      const auto fx = full_x(rp, bc, xs);
      CHECK(rp.objective(xs) + rp.offset == doctest::Approx(oracle::objective(inst, fx)).epsilon(1e-12));
      CHECK(rp.feasible(xs) == oracle::feasible(inst, fx, kConstraintTol));
    }

    const auto sub = reduce_subset(inst, x, subset);
    CHECK(sub.free_nodes == rp.free_nodes);
    CHECK(sub.linear == rp.linear);
    CHECK(sub.constraints.size() == rp.constraints.size());
  }
}

TEST_CASE("exact solver hand examples") {
  SUBCASE("single free node") {
    const auto inst = make_instance(WeightedGraph(1, std::span<const Edge>{}), {0.0}, {0.0}, {2.0});
    const auto r = solve_exact(inst);
    CHECK(r.solution.x == Assignment{1});
    CHECK(r.solution.objective == 2.0);
    CHECK(r.optimal);
  }
  SUBCASE("mutually exclusive pair picks all-closed") {
    const std::vector<Edge> e{{0, 1, 1.0}};
    const auto inst = make_instance(WeightedGraph(2, e), {1, 1}, {0, 0});
    const auto r = solve_exact(inst);
    CHECK(r.solution.x == Assignment{0, 0});
    CHECK(r.solution.objective == 0.0);
  }
}

TEST_CASE("exact solver matches brute force") {
  Rng rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.below(14);
    const auto inst = random_small(rng, std::max<std::size_t>(n, 2));
    const auto truth = oracle::brute_force(inst);
    for (auto method : {ExactMethod::enumerate, ExactMethod::branch_and_bound}) {
      ExactOptions opts;
      opts.method = method;
      const auto r = solve_exact(inst, opts);
      CHECK(r.solution.feasible);
      CHECK(oracle::feasible(inst, r.solution.x, kConstraintTol));
      CHECK(r.solution.objective == doctest::Approx(truth.best).epsilon(1e-12));
      if (method == ExactMethod::enumerate) CHECK(r.solution.x == truth.x);
    }
  }
}

TEST_CASE("branch and bound agrees with enumeration up to 20 variables") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    ErdosRenyiParams prm;
    prm.n = 16 + rng.below(5);
    prm.edge_prob = rng.uniform(0.1, 0.4);
    const auto inst = erdos_renyi_instance(prm, trial);
    ExactOptions e;
    e.method = ExactMethod::enumerate;
    ExactOptions b;
    b.method = ExactMethod::branch_and_bound;
    const auto re = solve_exact(inst, e);
    const auto rb = solve_exact(inst, b);
    CHECK(rb.solution.objective == doctest::Approx(re.solution.objective).epsilon(1e-12));
    CHECK(rb.solution.x == re.solution.x);
  }
}

TEST_CASE("boundary-fixed solves match brute force over the free nodes") {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + rng.below(12);
    const auto inst = random_small(rng, n);
    Assignment x(n, 0);
    for (auto& v : x) v = rng.bernoulli(0.3);
    std::vector<NodeId> subset;
    for (NodeId i = 0; i < n; ++i) {
      if (rng.bernoulli(0.5)) subset.push_back(i);
    }
    const auto bc = BoundaryCondition::around(x, subset);
    const auto rp = reduce_with_boundary(inst, bc);
    if (!rp.boundary_feasible) {
      CHECK_THROWS_AS(solve_exact(rp), ValidationError);
      continue;
    }
    double best = -1.0;
    Assignment xs(rp.num_vars());
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << rp.num_vars()); ++m) {
      for (std::size_t v = 0; v < xs.size(); ++v) xs[v] = (m >> v) & 1u;
      const auto fx = full_x(rp, bc, xs);
      if (!oracle::feasible(inst, fx, kConstraintTol)) continue;
      best = std::max(best, oracle::objective(inst, fx));
    }
    const auto r = solve_exact(rp);
    CHECK(r.objective + rp.offset == doctest::Approx(best).epsilon(1e-12));
    CHECK(rp.feasible(r.x));
  }
}

TEST_CASE("size limit and time budget") {
  ErdosRenyiParams prm;
  prm.n = 30;
  prm.edge_prob = 0.3;
  const auto inst = erdos_renyi_instance(prm, 1);
  ExactOptions small;
  small.limit = 20;
  CHECK_THROWS_AS(solve_exact(inst, small), ValidationError);

  prm.n = 40;
  const auto big = erdos_renyi_instance(prm, 2);
  ExactOptions quick;
  quick.time_budget = 1e-6;
  const auto r = solve_exact(big, quick);
  CHECK(r.solution.feasible);
  CHECK(oracle::feasible(big, r.solution.x, kConstraintTol));
}
