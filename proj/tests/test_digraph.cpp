#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "orrforge/digraph.hpp"
#include "orrforge/group.hpp"

using namespace orrforge;

TEST_CASE("cayley digraph construction") {
  SECTION("directed 5-cycle") {
    FiniteGroup c5 = cyclic(5);
    auto g = cayley(c5, std::vector<Elt>{1});
    for (int x = 0; x < 5; ++x) {
      CHECK(g.graph.out_degree(x) == 1);
      CHECK(g.graph.arc(x, (x + 1) % 5));
    }
  }
  SECTION("C2^2 with both generators gives digons") {
    FiniteGroup v = elementary_abelian(2);
    auto g = cayley(v, std::vector<Elt>{1, 2});
    for (int x = 0; x < 4; ++x) CHECK(g.graph.out_degree(x) == 2);
    CHECK(g.graph.arc(0, 1));
    CHECK(g.graph.arc(1, 0));
    CHECK_FALSE(g.conn.antisymmetric());
  }
  SECTION("Cay(Q8, {i, j}) is oriented with out-degree 2") {
    FiniteGroup q8 = quaternion8();
    // i^-1 = -i and j^-1 = -j are not members
    CHECK(q8.inv(2) == 3);
    CHECK(q8.inv(4) == 5);
    auto g = cayley(q8, std::vector<Elt>{2, 4});
    CHECK(g.conn.antisymmetric());
    for (int x = 0; x < 8; ++x) {
      CHECK(g.graph.out_degree(x) == 2);
      g.graph.for_out(x, [&](int y) { CHECK_FALSE(g.graph.arc(y, x)); });  // no digons
    }
  }
}

TEST_CASE("orientation and connectivity flags") {
  FiniteGroup c2 = cyclic(2);
  ConnectionSet empty(c2);
  CHECK(is_oriented(empty));
  CHECK_FALSE(is_connected_as_cayley(empty));

  FiniteGroup c6 = cyclic(6);
  ConnectionSet withInv(c6, std::vector<Elt>{1, 3});
  CHECK_FALSE(is_oriented(withInv));  // 3 is an involution

  FiniteGroup v = elementary_abelian(3);
  ConnectionSet gens(v, std::vector<Elt>{1, 2, 4});
  CHECK_FALSE(is_oriented(gens));      // all involutions
  CHECK(is_connected_as_cayley(gens)); // a basis generates
  CHECK(gens.inverse_closed());
}

TEST_CASE("flags are recomputed from members") {
  FiniteGroup c4 = cyclic(4);
  ConnectionSet s(c4, std::vector<Elt>{1});
  CHECK(s.antisymmetric());
  s.members.set(3);  // now contains the inverse pair
  CHECK_FALSE(s.antisymmetric());
  CHECK(s.inverse_closed());
}

TEST_CASE("induced subdigraphs") {
  FiniteGroup c8 = cyclic(8);
  auto g = cayley(c8, std::vector<Elt>{1, 2});
  SECTION("single vertex induces no arcs") {
    auto sub = induced_subdigraph(g.graph, DynBitset::from(8, {3}));
    CHECK(sub.graph.n() == 1);
    CHECK(sub.graph.m() == 0);
  }
  SECTION("induced on the connection set of C8, S = {a, a^2}") {
    auto sub = induced_subdigraph(g.graph, DynBitset::from(8, {1, 2}));
    CHECK(sub.graph.m() == 1);
    CHECK(sub.graph.arc(0, 1));  // (a, a^2) is the unique arc
    CHECK(weakly_connected(sub.graph));
  }
}

TEST_CASE("weak connectivity and components") {
  Digraph path = Digraph::from_arcs(3, {{0, 1}, {1, 2}});
  CHECK(weakly_connected(path));
  Digraph two = Digraph::from_arcs(2, {});
  CHECK(component_count(two) == 2);
  Digraph mix = Digraph::from_arcs(5, {{0, 1}, {3, 4}});
  CHECK(component_count(mix) == 3);
}

TEST_CASE("mutual inneighbours") {
  SECTION("directed 5-cycle has none") {
    FiniteGroup c5 = cyclic(5);
    Subset via(c5, std::vector<Elt>{1});
    for (int u = 0; u < 5; ++u)
      for (int v = 0; v < 5; ++v)
        if (u != v) CHECK(mutual_inneighbours(c5, u, v, via).size() == 0);
  }
  SECTION("agrees with a direct scan on a random instance") {
    FiniteGroup g = direct_product(cyclic(4), cyclic(3));
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      Subset via(g);
      for (int x = 1; x < g.order(); ++x)
        if (rng() & 1) via.bits.set(x);
      int u = int(rng() % g.order());
      int v = int(rng() % g.order());
      if (u == v) continue;
      auto got = mutual_inneighbours(g, u, v, via);
      for (int w = 0; w < g.order(); ++w) {
        bool expect = via.contains(g.mul(u, g.inv(w))) && via.contains(g.mul(v, g.inv(w)));
        CHECK(got.contains(w) == expect);
      }
    }
  }
}

TEST_CASE("right translations preserve arcs") {
  for (auto G : {quaternion8(), direct_product(cyclic(4), cyclic(2)), cyclic(12)}) {
    std::mt19937_64 rng(0x5EED + G.order());
    Subset s(G);
    for (int x = 1; x < G.order(); ++x)
      if (rng() % 3 == 0) s.bits.set(x);
    auto g = cayley(G, ConnectionSet(G, s.bits));
    for (int t = 0; t < G.order(); ++t)
      for (int x = 0; x < G.order(); ++x)
        g.graph.for_out(x, [&](int y) { CHECK(g.graph.arc(G.mul(x, t), G.mul(y, t))); });
  }
}

TEST_CASE("antisymmetry is equivalent to having no digons") {
  FiniteGroup G = direct_product(cyclic(4), cyclic(4));
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    ConnectionSet s(G);
    for (int x = 1; x < G.order(); ++x)
      if (rng() % 4 == 0) s.members.set(x);
    auto g = cayley(G, s);
    bool digon = false;
    for (int u = 0; u < G.order(); ++u)
      g.graph.for_out(u, [&](int v) {
        if (g.graph.arc(v, u)) digon = true;
      });
    CHECK(s.antisymmetric() == !digon);
    // degree constancy
    for (int u = 0; u < G.order(); ++u) {
      CHECK(g.graph.out_degree(u) == s.size());
      CHECK(g.graph.in_degree(u) == s.size());
    }
  }
}

TEST_CASE("exports round-trip") {
  FiniteGroup q8 = quaternion8();
  auto g = cayley(q8, std::vector<Elt>{2, 4});
  std::string edges = to_edge_list(g.graph);
  Digraph back = parse_edge_list(edges);
  REQUIRE(back.n() == g.graph.n());
  for (int u = 0; u < back.n(); ++u) CHECK(back.out(u) == g.graph.out(u));

  std::string dot = to_dot(g.graph);
  CHECK(dot.find("digraph {") == 0);
  CHECK(dot.find("->") != std::string::npos);

  CHECK_THROWS_AS(parse_edge_list("2 1\n0 5\n"), parse_error);
}
