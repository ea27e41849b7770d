#include <cmath>
#include <limits>

#include "doctest.h"
#include "optresp/algdist.hpp"
#include "optresp/rng.hpp"
#include "oracles.hpp"

using namespace optresp;

namespace {

WeightedGraph random_graph(Rng& rng, std::size_t n, double density) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (rng.bernoulli(density)) edges.push_back({u, v, rng.uniform(0.1, 2.0)});
    }
  }
  return WeightedGraph(n, edges);
}

double dense_rho(const WeightedGraph& g, const AlgDistParams& prm, const std::vector<double>& vectors,
                 EdgeId e) {
  const std::size_t n = g.num_nodes();
  const auto h = oracle::jor_matrix(g, prm.omega);
  double acc = 0.0;
  for (std::size_t r = 0; r < prm.num_vectors; ++r) {
    std::vector<double> chi(vectors.begin() + r * n, vectors.begin() + (r + 1) * n);
    for (std::size_t k = 0; k < prm.num_iters; ++k) chi = oracle::multiply(h, chi);
    const double d = std::abs(chi[g.edge(e).u] - chi[g.edge(e).v]);
    if (std::isinf(prm.norm_p)) {
      acc = std::max(acc, d);
    } else {
      acc += std::pow(d, prm.norm_p);
    }
  }
  return std::isinf(prm.norm_p) ? acc : std::pow(acc, 1.0 / prm.norm_p);
}

}  // namespace

TEST_CASE("JOR hand examples") {
  const std::vector<Edge> one{{0, 1, 1.0}};
  const WeightedGraph edge(2, one);
  const std::vector<double> chi{1.0, 0.0};
  const auto out = jor_iterate(edge, chi, 0.5);
  CHECK(out == std::vector<double>{0.5, 0.5});

  const std::vector<Edge> tri{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  const WeightedGraph t(3, tri);
  const std::vector<double> c3{1.0, 0.0, 0.0};
  CHECK(jor_iterate(t, c3, 0.5) == std::vector<double>{0.5, 0.25, 0.25});

  Rng rng(1);
  const auto g = random_graph(rng, 30, 0.2);
  const std::vector<double> constant(30, 0.37);
  const auto fixed = jor_iterate(g, constant, 0.5);
  for (double v : fixed) CHECK(v == doctest::Approx(0.37).epsilon(1e-15));
}

TEST_CASE("constant test vectors give zero distance") {
  Rng rng(2);
  const auto g = random_graph(rng, 40, 0.15);
  AlgDistParams prm;
  prm.num_vectors = 3;
  std::vector<double> vectors;
  for (double c : {0.25, -0.5, 0.0}) vectors.insert(vectors.end(), 40, c);
  const auto d = algebraic_distances_from(g, prm, vectors);
  for (double r : d.rho) CHECK(r == 0.0);
  CHECK(d.coupling(0) == 1.0 / kMinDistance);
}

TEST_CASE("matches dense matrix powers") {
  Rng rng(3);
  const double inf = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng.below(49);
    const auto g = random_graph(rng, n, rng.uniform(0.05, 0.5));
    if (g.num_edges() == 0) continue;
    AlgDistParams prm;
    prm.omega = rng.uniform(0.1, 0.9);
    prm.num_vectors = 1 + rng.below(10);
    prm.num_iters = 1 + rng.below(30);
    const double norms[] = {1.0, 2.0, 3.0, inf};
    prm.norm_p = norms[rng.below(4)];
    std::vector<double> vectors(n * prm.num_vectors);
    for (auto& v : vectors) v = rng.uniform(-0.5, 0.5);
    const auto d = algebraic_distances_from(g, prm, vectors);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const double want = dense_rho(g, prm, vectors, e);
      INFO(d.rho[e], " vs ", want);
      // entries are O(1), so differences carry ~1e-16 absolute round-off
      CHECK(oracle::close_rel(d.rho[e], want, 1e-9, 1e-14));
    }
  }
}

TEST_CASE("two-node distance shrinks every iteration") {
  const std::vector<Edge> one{{0, 1, 1.0}};
  const WeightedGraph g(2, one);
  for (double omega : {0.2, 0.5, 0.8}) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= 20; ++k) {
      AlgDistParams prm;
      prm.omega = omega;
      prm.num_vectors = 1;
      prm.num_iters = k;
      const double rho = algebraic_distances_from(g, prm, {0.5, -0.5}).rho[0];
      // the difference scales by |1 - 2 omega| each step
      CHECK(rho == doctest::Approx(std::pow(std::abs(1.0 - 2.0 * omega), static_cast<double>(k))));
      CHECK(rho <= prev);
      prev = rho;
    }
  }
}

TEST_CASE("single vector with p = 2 is the plain difference") {
  Rng rng(4);
  const auto g = random_graph(rng, 20, 0.3);
  AlgDistParams prm;
  prm.num_vectors = 1;
  prm.num_iters = 3;
  std::vector<double> v(20);
  for (auto& x : v) x = rng.uniform(-0.5, 0.5);
  const auto d = algebraic_distances_from(g, prm, v);
  auto chi = v;
  for (int k = 0; k < 3; ++k) chi = jor_iterate(g, chi, prm.omega);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    CHECK(d.rho[e] == doctest::Approx(std::abs(chi[g.edge(e).u] - chi[g.edge(e).v])).epsilon(1e-14));
  }
}

TEST_CASE("symmetric positions give equal distances") {
  // 4-cycle with uniform weights; a vector symmetric under the swap 1<->3
  const std::vector<Edge> cyc{{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}};
  const WeightedGraph g(4, cyc);
  AlgDistParams prm;
  prm.num_vectors = 1;
  const auto d = algebraic_distances_from(g, prm, {0.4, -0.1, 0.3, -0.1});
  CHECK(d.rho[g.find_edge(0, 1)] == d.rho[g.find_edge(0, 3)]);
  CHECK(d.rho[g.find_edge(1, 2)] == d.rho[g.find_edge(2, 3)]);
}

TEST_CASE("seeded vectors, determinism and execution modes") {
  Rng rng(5);
  const auto g = random_graph(rng, 300, 0.02);
  AlgDistParams prm;
  const auto a = algebraic_distances(g, prm, 42, Execution::parallel);
  const auto b = algebraic_distances(g, prm, 42, Execution::sequential);
  CHECK(a.rho == b.rho);
  CHECK(a.rho != algebraic_distances(g, prm, 43).rho);

  Rng draw(42);
  std::vector<double> vectors(300 * prm.num_vectors);
  for (auto& v : vectors) v = draw.uniform(-0.5, 0.5);
  CHECK(algebraic_distances_from(g, prm, vectors).rho == a.rho);
}

TEST_CASE("isolated nodes keep their value") {
  const std::vector<Edge> one{{0, 1, 1.0}};
  const WeightedGraph g(3, one);
  CHECK(jor_iterate(g, std::vector<double>{1.0, 0.0, 0.3}, 0.5)[2] == 0.3);
}

TEST_CASE("parameter validation") {
  AlgDistParams prm;
  prm.validate();
  prm.omega = 1.0;
  CHECK_THROWS_AS(prm.validate(), ValidationError);
  prm = {};
  prm.num_vectors = 0;
  CHECK_THROWS_AS(prm.validate(), ValidationError);
  prm = {};
  prm.num_iters = 0;
  CHECK_THROWS_AS(prm.validate(), ValidationError);
  prm = {};
  prm.norm_p = 0.5;
  CHECK_THROWS_AS(prm.validate(), ValidationError);
  prm = {};
  prm.norm_p = std::numeric_limits<double>::infinity();
  prm.validate();
}
