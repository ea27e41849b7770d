#include "doctest.h"
#include "optresp/baseline.hpp"
#include "optresp/epidemic.hpp"
#include "optresp/generators.hpp"
#include "optresp/subsolver.hpp"
#include "optresp/vcycle.hpp"
#include "oracles.hpp"

using namespace optresp;

namespace {

ResponseInstance outbreak_instance(std::size_t n, double avg_degree, std::uint64_t seed) {
  ErdosRenyiParams prm;
  prm.n = n;
  prm.edge_prob = std::min(1.0, avg_degree / static_cast<double>(n));
  auto inst = erdos_renyi_instance(prm, seed);
  inst.phi = spread_iterate(inst, seed_outbreak(n, 0.05, {0.8, 1.0}, seed + 1), 5);
  return inst;
}

}  // namespace

TEST_CASE("single node matches the exact solver") {
  for (double a : {0.0, 0.5}) {
    const auto inst = make_instance(WeightedGraph(1, std::span<const Edge>{}), {0.5}, {0.1}, {a});
    ILSConfig cfg;
    cfg.max_iterations = 10;
    const auto r = ils_solve(inst, cfg);
    CHECK(r.solution.objective == solve_exact(inst).solution.objective);
    CHECK(r.method == "ils");
  }
}

TEST_CASE("never exceeds the optimum on small instances") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    ErdosRenyiParams prm;
    prm.n = 12;
    const auto inst = erdos_renyi_instance(prm, s);
    ILSConfig cfg;
    cfg.max_iterations = 200;
    cfg.seed = s;
    const auto r = ils_solve(inst, cfg);
    CHECK(oracle::feasible(inst, r.solution.x));
    CHECK(r.solution.objective <= oracle::brute_force(inst).best + 1e-12);
  }
}

TEST_CASE("feasible, reproducible and with a monotone trace") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const auto inst = outbreak_instance(500, 5, s);
    ILSConfig cfg;
    cfg.max_iterations = 100;
    cfg.seed = s;
    const auto r = ils_solve(inst, cfg);
    CHECK(r.solution.feasible);
    CHECK(oracle::feasible(inst, r.solution.x));
    CHECK(r.iterations == 100);
    REQUIRE(!r.trace.empty());
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      CHECK(r.trace[k].objective > r.trace[k - 1].objective);
      CHECK(r.trace[k].seconds >= r.trace[k - 1].seconds);
    }
    CHECK(r.trace.back().objective == r.solution.objective);

    const auto again = ils_solve(inst, cfg);
    CHECK(again.solution.x == r.solution.x);
    CHECK(again.trace.size() == r.trace.size());
    for (std::size_t k = 0; k < r.trace.size(); ++k) CHECK(again.trace[k].objective == r.trace[k].objective);

    auto other = cfg;
    other.seed = s + 1000;
    CHECK(ils_solve(inst, other).solution.objective >= 0.0);
  }
}

TEST_CASE("time budget bounds the run") {
  const auto inst = outbreak_instance(2000, 6, 4);
  ILSConfig cfg;
  cfg.max_iterations = 0;
  cfg.time_budget = 0.2;
  const auto r = ils_solve(inst, cfg);
  CHECK(r.iterations >= 1);
  CHECK(r.total_seconds < 1.0);
  CHECK(r.budget_exhausted);
  CHECK(oracle::feasible(inst, r.solution.x));
}

TEST_CASE("configuration checks") {
  ILSConfig cfg;
  cfg.validate();
  auto bad = cfg;
  bad.perturb_fraction = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.perturb_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.max_iterations = 0;
  bad.time_budget = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}
