#include <sstream>

#include "doctest.h"
#include "optresp/graph.hpp"
#include "optresp/graph_io.hpp"
#include "optresp/rng.hpp"

using namespace optresp;

namespace {

WeightedGraph make(std::size_t n, std::vector<Edge> edges) {
  return WeightedGraph(n, edges);
}

EdgeListFile parse(const std::string& text, bool directed = false) {
  std::istringstream in(text);
  return parse_edge_list(in, directed);
}

}  // namespace

TEST_CASE("construction canonicalizes, merges and drops self-loops") {
  const auto g = make(4, {{2, 1, 1.5}, {1, 2, 0.5}, {0, 0, 3.0}, {3, 0, 1.0}});
  CHECK(g.num_nodes() == 4);
  REQUIRE(g.num_edges() == 2);
  CHECK(g.self_loops_dropped() == 1);
  CHECK(g.edge(0).u == 0);
  CHECK(g.edge(0).v == 3);
  CHECK(g.edge(1).u == 1);
  CHECK(g.edge(1).v == 2);
  CHECK(g.edge(1).w == 2.0);
  CHECK(g.total_weight() == 3.0);
  CHECK(g.weighted_degree(1) == 2.0);
  CHECK(g.find_edge(2, 1) == 1);
  CHECK(g.find_edge(0, 1) == kInvalidNode);
  CHECK(g.average_degree() == doctest::Approx(1.0));
}

TEST_CASE("adjacency is symmetric, sorted, and shares edge ids") {
  Rng rng(3);
  std::vector<Edge> edges;
  for (int k = 0; k < 200; ++k) {
    edges.push_back({static_cast<NodeId>(rng.below(30)), static_cast<NodeId>(rng.below(30)),
                     rng.uniform(0.1, 2.0)});
  }
  const auto g = make(30, edges);
  std::size_t incidences = 0;
  for (NodeId i = 0; i < 30; ++i) {
    NodeId prev = 0;
    bool first = true;
    for (const auto& nb : g.neighbors(i)) {
      CHECK((first || nb.node > prev));
      first = false;
      prev = nb.node;
      const auto& e = g.edge(nb.edge);
      CHECK(((e.u == i && e.v == nb.node) || (e.v == i && e.u == nb.node)));
      CHECK(e.w == nb.weight);
      ++incidences;
    }
  }
  CHECK(incidences == 2 * g.num_edges());
}

TEST_CASE("bad edges are rejected") {
  CHECK_THROWS_AS(make(2, {{0, 2, 1.0}}), ValidationError);
  CHECK_THROWS_AS(make(2, {{0, 1, 0.0}}), ValidationError);
  CHECK_THROWS_AS(make(2, {{0, 1, -1.0}}), ValidationError);
  CHECK_THROWS_AS(make(2, {{0, 1, std::nan("")}}), ValidationError);
}

TEST_CASE("edge list parsing") {
  SUBCASE("default weights give a path") {
    const auto f = parse("0 1\n1 2\n");
    CHECK(f.graph.num_nodes() == 3);
    CHECK(f.graph.num_edges() == 2);
    for (const auto& e : f.graph.edges()) CHECK(e.w == 1.0);
  }
  SUBCASE("both orientations merge into one edge") {
    const auto f = parse("0 1 2.0\n1 0 3.0\n");
    REQUIRE(f.graph.num_edges() == 1);
    CHECK(f.graph.edge(0).w == 5.0);
    const auto d = parse("0 1 2.0\n1 0 3.0\n", true);
    CHECK(d.graph.edge(0).w == 5.0);
  }
  SUBCASE("sparse ids are compacted in increasing order") {
    const auto f = parse("# comment\n100 7\n7 42 0.5\n");
    CHECK(f.graph.num_nodes() == 3);
    CHECK(f.original_ids == std::vector<std::int64_t>{7, 42, 100});
    CHECK(f.graph.find_edge(0, 2) != kInvalidNode);
    CHECK(f.graph.edge(f.graph.find_edge(0, 1)).w == 0.5);
  }
  SUBCASE("nodes directive keeps ids and isolated nodes") {
    const auto f = parse("# nodes 5\n3 1\n");
    CHECK(f.graph.num_nodes() == 5);
    CHECK(f.graph.find_edge(1, 3) != kInvalidNode);
    CHECK_THROWS_AS(parse("# nodes 2\n0 5\n"), LoadError);
  }
  SUBCASE("self loops are counted") {
    const auto f = parse("0 0\n0 1\n");
    CHECK(f.self_loops_dropped == 1);
  }
  SUBCASE("malformed lines carry a line number") {
    try {
      parse("0 1\n0 x\n");
      FAIL("expected LoadError");
    } catch (const LoadError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse("0 1 -2\n"), ValidationError);
    CHECK_THROWS_AS(parse("0\n"), LoadError);
  }
}

TEST_CASE("edge list round trip is exact") {
  Rng rng(11);
  std::vector<Edge> edges;
  for (int k = 0; k < 60; ++k) {
    edges.push_back({static_cast<NodeId>(rng.below(25)), static_cast<NodeId>(rng.below(25)),
                     rng.uniform(1e-3, 10.0)});
  }
  const auto g = make(25, edges);
  std::ostringstream out;
  write_edge_list(out, g);
  const auto back = parse(out.str());
  REQUIRE(back.graph.num_nodes() == g.num_nodes());
  REQUIRE(back.graph.num_edges() == g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    CHECK(back.graph.edge(e).u == g.edge(e).u);
    CHECK(back.graph.edge(e).v == g.edge(e).v);
    CHECK(back.graph.edge(e).w == g.edge(e).w);
  }
}

TEST_CASE("attribute parsing") {
  std::istringstream ok("1 0.5 0.2\n0 1 0 0.25\n");
  const auto a = parse_attributes(ok, 2);
  CHECK(a.phi == std::vector<double>{1.0, 0.5});
  CHECK(a.b == std::vector<double>{0.0, 0.2});
  CHECK(a.a == std::vector<double>{0.25, 0.0});
  std::istringstream missing("0 0.5 0.2\n");
  CHECK_THROWS_AS(parse_attributes(missing, 2), LoadError);
  std::istringstream dup("0 0.5 0.2\n0 0.5 0.2\n1 0 0\n");
  CHECK_THROWS_AS(parse_attributes(dup, 2), LoadError);
  std::istringstream range("0 0.5 0.2\n5 0 0\n");
  CHECK_THROWS_AS(parse_attributes(range, 2), LoadError);

  std::ostringstream out;
  write_attributes(out, a);
  std::istringstream again(out.str());
  const auto b = parse_attributes(again, 2);
  CHECK(b.phi == a.phi);
  CHECK(b.b == a.b);
  CHECK(b.a == a.a);
}

TEST_CASE("format_double round trips") {
  Rng rng(5);
  for (int k = 0; k < 1000; ++k) {
    const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("largest component") {
  SUBCASE("two triangles and an isolated node keep the first triangle") {
    const auto g = make(7, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}});
    const auto c = largest_component(g);
    CHECK(c.graph.num_nodes() == 3);
    CHECK(c.new_to_old == std::vector<NodeId>{0, 1, 2});
    CHECK(c.old_to_new[4] == kInvalidNode);
  }
  SUBCASE("connected graph maps to itself") {
    const auto g = make(3, {{0, 1, 1}, {1, 2, 2}});
    const auto c = largest_component(g);
    CHECK(c.new_to_old == std::vector<NodeId>{0, 1, 2});
    CHECK(c.graph.num_edges() == 2);
  }
  SUBCASE("five-path beats a separate edge") {
    const auto f = parse("0 1\n1 2\n2 3\n3 4\n10 11\n");
    const auto c = largest_component(f.graph);
    CHECK(c.graph.num_nodes() == 5);
    CHECK(c.graph.num_edges() == 4);
  }
  SUBCASE("labels are numbered by smallest member") {
    const auto g = make(5, {{3, 4, 1}, {0, 2, 1}});
    std::size_t count = 0;
    const auto lab = component_labels(g, &count);
    CHECK(count == 3);
    CHECK(lab == std::vector<NodeId>{0, 1, 0, 2, 2});
  }
}

TEST_CASE("laplacian") {
  SUBCASE("single edge") {
    const auto l = laplacian(make(2, {{0, 1, 2.0}}));
    CHECK(l.at(0, 0) == 2.0);
    CHECK(l.at(1, 1) == 2.0);
    CHECK(l.at(0, 1) == -2.0);
  }
  SUBCASE("triangle") {
    const auto l = laplacian(make(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}));
    for (NodeId i = 0; i < 3; ++i) CHECK(l.at(i, i) == 2.0);
  }
  SUBCASE("star") {
    const auto l = laplacian(make(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}}));
    CHECK(l.at(0, 0) == 3.0);
    for (NodeId i = 1; i < 4; ++i) {
      CHECK(l.at(i, i) == 1.0);
      CHECK(l.row_sum(i) == 0.0);
    }
    CHECK(l.at(1, 2) == 0.0);
  }
}

TEST_CASE("transmission probabilities from weights") {
  CHECK(p_from_weights(make(3, {{0, 1, 4}, {1, 2, 4}})) == std::vector<double>{1.0, 1.0});
  CHECK(p_from_weights(make(3, {{0, 1, 1}, {1, 2, 2}})) == std::vector<double>{1.0, 0.5});
  CHECK(p_from_weights(make(2, {{0, 1, 0.3}})) == std::vector<double>{1.0});
  CHECK(p_from_weights(make(3, {})).empty());
}
