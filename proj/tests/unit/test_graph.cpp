#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "rigidmatch/errors.hpp"
#include "rigidmatch/graph.hpp"

using namespace rigidmatch;

namespace {

std::vector<Edge> edges_of(const MatchGraph& g) { return {g.edges().begin(), g.edges().end()}; }

std::vector<Edge> sorted(std::vector<Edge> e) {
  for (auto& x : e) x = Edge::of(x.u, x.v);
  std::sort(e.begin(), e.end());
  return e;
}

}  // namespace

TEST_CASE("squared cycle on six vertices") {
  const auto g = build_squared_cycle(6);
  const auto expect = sorted({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0},
                              {0, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 0}, {5, 1}});
  CHECK(edges_of(g) == expect);
  CHECK(complement_edges(g) == std::vector<Edge>{{0, 3}, {1, 4}, {2, 5}});
  CHECK_FALSE(is_chordal(g));
}

TEST_CASE("squared cycle on five vertices is complete") {
  const auto g = build_squared_cycle(5);
  CHECK(g.edges().size() == 10);
  CHECK(complement_edges(g).empty());
  CHECK(is_chordal(g));
}

TEST_CASE("squared cycle sizes and degrees") {
  for (std::size_t n = 5; n <= 40; ++n) {
    const auto g = build_squared_cycle(n);
    REQUIRE(g.edges().size() == 2 * n);
    for (std::size_t v = 0; v < n; ++v) REQUIRE(g.degree(v) == 4);
  }
  CHECK_THROWS_AS(build_squared_cycle(4), Error);
  try {
    build_squared_cycle(3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::degenerate_size);
  }
}

TEST_CASE("squared cycle along a traversal order") {
  const auto order = seeded_cycle_order(9, 3);
  CHECK(order == seeded_cycle_order(9, 3));
  const auto g = build_squared_cycle(order);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(g.has_edge(order[i], order[(i + 1) % 9]));
    CHECK(g.has_edge(order[i], order[(i + 2) % 9]));
  }
  CHECK_THROWS_AS(build_squared_cycle(std::vector<std::size_t>{0, 1, 2, 3, 3}), Error);
}

TEST_CASE("clique chain") {
  const auto chain = clique_chain(build_squared_cycle(5));
  const std::vector<Triple> expect{{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {3, 4, 0}, {4, 0, 1}};
  CHECK(chain.cliques == expect);
  for (std::size_t n = 5; n <= 30; ++n) {
    const auto g = build_squared_cycle(n);
    const auto c = clique_chain(g);
    REQUIRE(c.size() == n);
    std::set<Edge> covered;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = c.cliques[i];
      const auto& b = c.cliques[c.next(i)];
      REQUIRE(a[1] == b[0]);
      REQUIRE(a[2] == b[1]);
      REQUIRE(c.separators[i] == std::array<std::size_t, 2>{a[1], a[2]});
      covered.insert(Edge::of(a[0], a[1]));
      covered.insert(Edge::of(a[0], a[2]));
      covered.insert(Edge::of(a[1], a[2]));
    }
    for (const Edge& e : g.edges()) REQUIRE(covered.count(e) == 1);
  }
}

TEST_CASE("edge ownership partitions the squared cycle") {
  for (std::size_t n = 5; n <= 30; ++n) {
    const auto g = build_squared_cycle(n);
    const auto c = clique_chain(g);
    const auto own = chain_edge_ownership(c);
    REQUIRE(ownership_partitions_edges(g, c, own));
    for (const auto& pairs : own.per_clique) REQUIRE(pairs.size() == 2);
  }
  const auto g = build_squared_cycle(6);
  const auto c = clique_chain(g);
  auto own = chain_edge_ownership(c);
  own.per_clique[0].push_back({1, 2});
  CHECK_FALSE(ownership_partitions_edges(g, c, own));
}

TEST_CASE("three-trees") {
  CHECK(build_three_tree(3).edges().size() == 3);
  CHECK(build_three_tree(6).edges().size() == 12);
  CHECK(is_chordal(build_three_tree(7)));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 3 + seed % 20;
    const auto g = build_three_tree(n, seed);
    REQUIRE(g.edges().size() == 3 * n - 6);
    REQUIRE(is_chordal(g));
    for (std::size_t v = 3; v < n; ++v) {
      std::size_t lower = 0;
      for (std::size_t w : g.neighbors(v)) lower += w < v;
      REQUIRE(lower == 3);
    }
  }
  CHECK(edges_of(build_three_tree(12, 4)) == edges_of(build_three_tree(12, 4)));
}

TEST_CASE("chordality checker on small graphs") {
  CHECK_FALSE(is_chordal(MatchGraph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, GraphKind::generic)));
  CHECK(is_chordal(MatchGraph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 2}}, GraphKind::generic)));
  CHECK(is_chordal(MatchGraph(3, {}, GraphKind::generic)));
}

TEST_CASE("graph validation and json") {
  CHECK_THROWS_AS(MatchGraph(3, {{1, 1}}, GraphKind::generic), Error);
  CHECK_THROWS_AS(MatchGraph(3, {{0, 3}}, GraphKind::generic), Error);
  CHECK_THROWS_AS(MatchGraph(3, {{0, 1}, {1, 0}}, GraphKind::generic), Error);
  const auto g = build_squared_cycle(seeded_cycle_order(8, 1));
  const auto back = graph_from_json(to_json(g));
  CHECK(back.n() == 8);
  CHECK(back.kind() == GraphKind::squared_cycle);
  CHECK(edges_of(back) == edges_of(g));
  CHECK(std::equal(back.cycle_order().begin(), back.cycle_order().end(), g.cycle_order().begin()));
  CHECK(graph_kind_from_string("three_tree") == GraphKind::three_tree);
  CHECK_THROWS_AS(graph_kind_from_string("ring"), Error);
}
