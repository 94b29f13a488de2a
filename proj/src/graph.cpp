#include "rigidmatch/graph.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "rigidmatch/errors.hpp"

namespace rigidmatch {

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::squared_cycle: return "squared_cycle";
    case GraphKind::three_tree: return "three_tree";
    case GraphKind::generic: return "generic";
  }
  return "generic";
}

GraphKind graph_kind_from_string(const std::string& name) {
  if (name == "squared_cycle") return GraphKind::squared_cycle;
  if (name == "three_tree") return GraphKind::three_tree;
  if (name == "generic") return GraphKind::generic;
  throw Error(ErrorCode::invalid_graph, "unknown graph kind '" + name + "'");
}

MatchGraph::MatchGraph(std::size_t n, std::vector<Edge> edges, GraphKind kind,
                       std::vector<std::size_t> cycle_order)
    : n_(n), edges_(std::move(edges)), kind_(kind), cycle_order_(std::move(cycle_order)),
      adjacency_(n) {
  for (Edge& e : edges_) {
    if (e.u == e.v) throw Error(ErrorCode::invalid_graph, "self-loop on vertex " + std::to_string(e.u));
    e = Edge::of(e.u, e.v);
    if (e.v >= n_) {
      throw Error(ErrorCode::invalid_graph, "edge endpoint " + std::to_string(e.v) +
                                                " out of range for n=" + std::to_string(n_));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw Error(ErrorCode::invalid_graph, "duplicate edge");
  }
  for (const Edge& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool MatchGraph::has_edge(std::size_t a, std::size_t b) const {
  if (a == b || a >= n_ || b >= n_) return false;
  return std::binary_search(edges_.begin(), edges_.end(), Edge::of(a, b));
}

MatchGraph build_squared_cycle(std::span<const std::size_t> order) {
  const std::size_t n = order.size();
  if (n < 5) {
    throw Error(ErrorCode::degenerate_size,
                "squared cycle needs at least 5 vertices (got " + std::to_string(n) +
                    "); use the brute-force engine for smaller templates");
  }
  std::vector<std::size_t> check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (check[i] != i) throw Error(ErrorCode::invalid_parameters, "cycle order is not a permutation");
  }

  std::vector<Edge> edges;
  edges.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back(Edge::of(order[i], order[(i + 1) % n]));
    edges.push_back(Edge::of(order[i], order[(i + 2) % n]));
  }
  return MatchGraph(n, std::move(edges), GraphKind::squared_cycle,
                    std::vector<std::size_t>(order.begin(), order.end()));
}

MatchGraph build_squared_cycle(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return build_squared_cycle(order);
}

std::vector<std::size_t> seeded_cycle_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

MatchGraph build_three_tree(std::size_t n, std::uint64_t seed) {
  if (n < 3) {
    throw Error(ErrorCode::degenerate_size,
                "3-tree needs at least 3 vertices (got " + std::to_string(n) + ")");
  }
  std::vector<Edge> edges = {{0, 1}, {0, 2}, {1, 2}};
  std::vector<Triple> triangles = {{0, 1, 2}};
  std::mt19937_64 rng(seed);
  for (std::size_t v = 3; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> pick(0, triangles.size() - 1);
    const Triple t = triangles[pick(rng)];
    for (std::size_t a : t) edges.push_back(Edge::of(a, v));
    triangles.push_back({t[0], t[1], v});
    triangles.push_back({t[0], t[2], v});
    triangles.push_back({t[1], t[2], v});
  }
  return MatchGraph(n, std::move(edges), GraphKind::three_tree);
}

bool is_chordal(const MatchGraph& g) {
  const std::size_t n = g.n();
  if (n == 0) return true;

  // Maximum cardinality search: visit[k] is the k-th vertex numbered.
  std::vector<std::size_t> weight(n, 0);
  std::vector<bool> numbered(n, false);
  std::vector<std::size_t> visit;
  std::vector<std::size_t> position(n, 0);
  visit.reserve(n);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!numbered[v] && (best == n || weight[v] > weight[best])) best = v;
    }
    numbered[best] = true;
    position[best] = visit.size();
    visit.push_back(best);
    for (std::size_t w : g.neighbors(best)) {
      if (!numbered[w]) ++weight[w];
    }
  }

  // The reverse visit order is a perfect elimination ordering iff, for every
  // vertex, its earlier-visited neighbours minus the latest of them are all
  // adjacent to that latest one.
  for (std::size_t v : visit) {
    std::vector<std::size_t> earlier;
    for (std::size_t w : g.neighbors(v)) {
      if (position[w] < position[v]) earlier.push_back(w);
    }
    if (earlier.size() < 2) continue;
    const std::size_t parent = *std::max_element(
        earlier.begin(), earlier.end(),
        [&](std::size_t a, std::size_t b) { return position[a] < position[b]; });
    for (std::size_t w : earlier) {
      if (w != parent && !g.has_edge(w, parent)) return false;
    }
  }
  return true;
}

std::vector<Edge> complement_edges(const MatchGraph& g) {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < g.n(); ++i) {
    for (std::size_t j = i + 1; j < g.n(); ++j) {
      if (!g.has_edge(i, j)) out.push_back({i, j});
    }
  }
  return out;
}

nlohmann::json to_json(const MatchGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  nlohmann::json doc = {{"n", g.n()}, {"kind", to_string(g.kind())}, {"edges", edges}};
  if (!g.cycle_order().empty()) {
    doc["cycle_order"] = std::vector<std::size_t>(g.cycle_order().begin(), g.cycle_order().end());
  }
  return doc;
}

MatchGraph graph_from_json(const nlohmann::json& doc) {
  try {
    const auto n = doc.at("n").get<std::size_t>();
    const GraphKind kind = graph_kind_from_string(doc.at("kind").get<std::string>());
    std::vector<Edge> edges;
    for (const auto& e : doc.at("edges")) {
      edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    }
    std::vector<std::size_t> order;
    if (doc.contains("cycle_order")) order = doc["cycle_order"].get<std::vector<std::size_t>>();
    return MatchGraph(n, std::move(edges), kind, std::move(order));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_graph, std::string("malformed graph JSON: ") + e.what());
  }
}

CliqueChain clique_chain(const MatchGraph& g) {
  if (g.kind() != GraphKind::squared_cycle) {
    throw Error(ErrorCode::invalid_graph,
                std::string("clique chain needs a squared cycle, got ") + to_string(g.kind()));
  }
  const auto order = g.cycle_order();
  const std::size_t n = order.size();
  if (n < 5) throw Error(ErrorCode::degenerate_size, "clique chain needs n >= 5");

  CliqueChain chain;
  chain.cliques.reserve(n);
  chain.separators.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    chain.cliques.push_back({order[i], order[(i + 1) % n], order[(i + 2) % n]});
    chain.separators.push_back({order[(i + 1) % n], order[(i + 2) % n]});
  }
  return chain;
}

EdgeOwnership chain_edge_ownership(const CliqueChain& chain) {
  EdgeOwnership own;
  own.per_clique.assign(chain.size(), {SlotPair{0, 1}, SlotPair{0, 2}});
  return own;
}

bool ownership_partitions_edges(const MatchGraph& g, const CliqueChain& chain,
                                const EdgeOwnership& ownership) {
  if (ownership.per_clique.size() != chain.size()) return false;
  std::multiset<Edge> owned;
  for (std::size_t c = 0; c < chain.size(); ++c) {
    for (const SlotPair& sp : ownership.per_clique[c]) {
      if (sp.first > 2 || sp.second > 2 || sp.first == sp.second) return false;
      owned.insert(Edge::of(chain.cliques[c][sp.first], chain.cliques[c][sp.second]));
    }
  }
  if (owned.size() != g.edges().size()) return false;
  auto it = owned.begin();
  for (const Edge& e : g.edges()) {
    if (*it != e) return false;
    ++it;
  }
  return true;
}

}  // namespace rigidmatch
