#include "doctest.h"
#include "optresp/generators.hpp"
#include "optresp/instance.hpp"
#include "optresp/rng.hpp"
#include "oracles.hpp"

using namespace optresp;

namespace {

ResponseInstance single_edge(double w, double p, double phi, double b) {
  std::vector<Edge> e{{0, 1, w}};
  auto inst = make_instance(WeightedGraph(2, e), {phi, phi}, {b, b});
  inst.p = {p};
  inst.p_from_weights = false;
  return inst;
}

Assignment random_x(Rng& rng, std::size_t n, double prob = 0.5) {
  Assignment x(n);
  for (auto& v : x) v = rng.bernoulli(prob);
  return x;
}

}  // namespace

TEST_CASE("objective hand examples") {
  const auto e = single_edge(3.0, 1.0, 0.0, 0.0);
  CHECK(evaluate_objective(e, Assignment{1, 1}) == 3.0);
  CHECK(evaluate_objective(e, Assignment{1, 0}) == 0.0);

  std::vector<Edge> tri{{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 4.0}};
  const auto t = make_instance(WeightedGraph(3, tri), {0, 0, 0}, {0, 0, 0}, {5, 0, 0});
  CHECK(evaluate_objective(t, Assignment{1, 1, 0}) == 6.0);
  CHECK(evaluate_objective(t, Assignment{0, 0, 0}) == 0.0);
}

TEST_CASE("non-infection probability and violation") {
  const auto iso = make_instance(WeightedGraph(1, std::span<const Edge>{}), {0.5}, {0.0});
  CHECK(non_infection_probability(iso, Assignment{1}, 0) == 1.0);
  CHECK(constraint_violation(iso, Assignment{1}, 0) == 0.0);

  const auto half = single_edge(1.0, 0.5, 1.0, 0.0);
  CHECK(non_infection_probability(half, Assignment{1, 1}, 0) == 0.5);
  CHECK(non_infection_probability(half, Assignment{1, 0}, 0) == 1.0);
  CHECK(constraint_violation(half, Assignment{0, 1}, 0) == 0.0);

  const auto strong = single_edge(1.0, 0.8, 1.0, 0.5);
  CHECK(constraint_violation(strong, Assignment{1, 1}, 0) == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("feasibility hand examples") {
  std::vector<Edge> star{{0, 1, 1}, {0, 2, 1}, {0, 3, 1}};
  const auto s = make_instance(WeightedGraph(4, star), {1, 1, 1, 1}, {0, 0, 0, 0});
  const auto all_open = is_feasible(s, Assignment(4, 1));
  CHECK_FALSE(all_open.feasible);
  CHECK(std::find(all_open.violated.begin(), all_open.violated.end(), 0u) != all_open.violated.end());
  CHECK(constraint_violation(s, Assignment(4, 1), 0) == 1.0);
  CHECK(is_feasible(s, Assignment(4, 0)).feasible);

  const auto loose = make_instance(WeightedGraph(4, star), {1, 1, 1, 1}, {1, 1, 1, 1});
  CHECK(is_feasible(loose, Assignment(4, 1)).feasible);
}

TEST_CASE("evaluation matches the oracle on random instances") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    ErdosRenyiParams prm;
    prm.n = 5 + rng.below(40);
    prm.edge_prob = rng.uniform(0.05, 0.5);
    ResponseInstance inst;
    try {
      inst = erdos_renyi_instance(prm, rng.below(1u << 30));
    } catch (const ValidationError&) {
      continue;
    }
    for (auto& a : inst.a) a = rng.uniform(-1.0, 1.0);
    const auto x = random_x(rng, inst.num_nodes());
    CHECK(evaluate_objective(inst, x) == doctest::Approx(oracle::objective(inst, x)).epsilon(1e-12));
    const auto sol = is_feasible(inst, x);
    CHECK(sol.feasible == oracle::feasible(inst, x, kConstraintTol));
    const auto s = oracle::survival(inst, x);
    for (NodeId i = 0; i < inst.num_nodes(); ++i) {
      CHECK(non_infection_probability(inst, x, i) == doctest::Approx(s[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("exposure tracker stays consistent through random flips") {
  Rng rng(23);
  ErdosRenyiParams prm;
  prm.n = 40;
  prm.edge_prob = 0.15;
  const auto inst = erdos_renyi_instance(prm, 99);
  ExposureTracker t(inst, Assignment(inst.num_nodes(), 0));
  CHECK(t.objective() == 0.0);
  for (int step = 0; step < 2000; ++step) {
    const auto i = static_cast<NodeId>(rng.below(inst.num_nodes()));
    if (t.is_open(i)) {
      const double before = t.objective();
      const double g = t.open_gain(i);
      t.close(i);
      CHECK(t.objective() == doctest::Approx(before - g).epsilon(1e-9));
    } else {
      auto x = t.x();
      x[i] = 1;
      // only meaningful from a feasible state
      if (oracle::feasible(inst, t.x(), kConstraintTol)) {
        CHECK(t.can_open(i) == oracle::feasible(inst, x, kConstraintTol));
      }
      const double before = t.objective();
      const double g = t.open_gain(i);
      t.open(i);
      CHECK(t.objective() == doctest::Approx(before + g).epsilon(1e-9));
    }
    if (step % 100 == 0) {
      const auto s = oracle::survival(inst, t.x());
      for (NodeId j = 0; j < inst.num_nodes(); ++j) {
        CHECK(t.survival(j) == doctest::Approx(s[j]).epsilon(1e-9));
      }
      CHECK(t.objective() == doctest::Approx(oracle::objective(inst, t.x())).epsilon(1e-9));
      CHECK(t.feasible() == oracle::feasible(inst, t.x(), kConstraintTol));
    }
  }
}

TEST_CASE("generator") {
  ErdosRenyiParams two;
  two.n = 2;
  two.edge_prob = 1.0;
  const auto a = erdos_renyi_instance(two, 5);
  const auto b = erdos_renyi_instance(two, 5);
  REQUIRE(a.graph.num_edges() == 1);
  CHECK(a.graph.edge(0).w == b.graph.edge(0).w);
  CHECK(a.phi == b.phi);
  CHECK(a.b == b.b);
  CHECK(a.p == std::vector<double>{1.0});

  SUBCASE("values lie in their ranges") {
    ErdosRenyiParams prm;
    const auto inst = erdos_renyi_instance(prm, 1);
    CHECK(inst.num_nodes() == 20);
    validate(inst);
    for (const auto& e : inst.graph.edges()) {
      CHECK(e.w >= 0.1);
      CHECK(e.w < 1.0);
    }
    for (double v : inst.a) CHECK(v == 0.0);
  }
  SUBCASE("edge density is near edge_prob") {
    ErdosRenyiParams prm;
    prm.n = 300;
    prm.edge_prob = 0.1;
    const auto inst = erdos_renyi_instance(prm, 3);
    const double expected = 0.1 * 300 * 299 / 2;
    CHECK(std::abs(static_cast<double>(inst.graph.num_edges()) - expected) < 5 * std::sqrt(expected));
  }
  SUBCASE("different seeds differ") {
    ErdosRenyiParams prm;
    int same = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const auto x = erdos_renyi_instance(prm, 2 * s);
      const auto y = erdos_renyi_instance(prm, 2 * s + 1);
      if (x.phi == y.phi && x.b == y.b && x.graph.num_edges() == y.graph.num_edges()) ++same;
    }
    CHECK(same == 0);
  }
  SUBCASE("bad parameters") {
    ErdosRenyiParams bad;
    bad.edge_prob = 1.5;
    CHECK_THROWS_AS(erdos_renyi_instance(bad, 1), ValidationError);
    bad.edge_prob = 0.0;
    CHECK_THROWS_AS(erdos_renyi_instance(bad, 1), ValidationError);
    ErdosRenyiParams range;
    range.phi = {0.5, 1.5};
    CHECK_THROWS_AS(erdos_renyi_instance(range, 1), ValidationError);
  }
}

TEST_CASE("validation and degree penalty") {
  std::vector<Edge> e{{0, 1, 2.0}, {1, 2, 1.0}};
  auto inst = make_instance(WeightedGraph(3, e), {0.5, 0.5, 0.5}, {0.1, 0.1, 0.1});
  validate(inst);
  CHECK(inst.p == std::vector<double>{0.5, 1.0});

  auto bad = inst;
  bad.phi[1] = 1.5;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = inst;
  bad.b[0] = -0.1;
  CHECK_THROWS_AS(validate(bad), ValidationError);
  bad = inst;
  bad.p.pop_back();
  CHECK_THROWS_AS(validate(bad), ValidationError);
  CHECK_THROWS_AS(make_instance(WeightedGraph(3, e), {0.5, 0.5}, {0.1, 0.1, 0.1}), ValidationError);

  apply_degree_penalty(inst, 0.5);
  CHECK(inst.a == std::vector<double>{-1.0, -1.5, -0.5});
  CHECK_THROWS_AS(validate(inst), ValidationError);
  validate(inst, true);

  const auto attrs = attributes_of(inst);
  CHECK(attrs.a == inst.a);
  CHECK(attrs.phi == inst.phi);
}

TEST_CASE("solution bookkeeping") {
  std::vector<Edge> e{{0, 1, 1.0}};
  const auto inst = make_instance(WeightedGraph(3, e), {1, 1, 1}, {0, 0, 0});
  const auto s = is_feasible(inst, Assignment{1, 1, 0});
  CHECK_FALSE(s.feasible);
  CHECK(s.violated == std::vector<NodeId>{0, 1});
  CHECK(s.objective == 1.0);
  CHECK(s.num_closed() == 1);
}
