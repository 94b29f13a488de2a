#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace rigidmatch {

/// Unordered vertex pair, stored with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;

  static Edge of(std::size_t a, std::size_t b) { return a < b ? Edge{a, b} : Edge{b, a}; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class GraphKind { squared_cycle, three_tree, generic };

const char* to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& name);

/// Undirected simple graph over template indices 0..n-1.
class MatchGraph {
 public:
  /// Edges are normalized and sorted; self-loops, duplicates and out-of-range
  /// endpoints are rejected. `cycle_order` is the Hamiltonian traversal for
  /// squared cycles and empty otherwise.
  MatchGraph(std::size_t n, std::vector<Edge> edges, GraphKind kind,
             std::vector<std::size_t> cycle_order = {});

  std::size_t n() const noexcept { return n_; }
  GraphKind kind() const noexcept { return kind_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const std::size_t> cycle_order() const noexcept { return cycle_order_; }

  bool has_edge(std::size_t a, std::size_t b) const;
  std::span<const std::size_t> neighbors(std::size_t v) const { return adjacency_[v]; }
  std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  GraphKind kind_;
  std::vector<std::size_t> cycle_order_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Cycle through the vertices in index order plus every distance-two chord.
/// Needs n >= 5; smaller templates have no three-clique cycle structure.
MatchGraph build_squared_cycle(std::size_t n);

/// Same construction along an arbitrary traversal order (a permutation of 0..n-1).
MatchGraph build_squared_cycle(std::span<const std::size_t> order);

/// Seeded random permutation of 0..n-1, for traversal-order experiments.
std::vector<std::size_t> seeded_cycle_order(std::size_t n, std::uint64_t seed);

/// K3 on {0,1,2}; every later vertex is joined to a uniformly chosen existing
/// triangle. Vertex v's lower-indexed neighbours are its attachment triple.
MatchGraph build_three_tree(std::size_t n, std::uint64_t seed = 0);

/// Maximum cardinality search followed by a perfect elimination ordering check.
bool is_chordal(const MatchGraph& g);

/// All unordered pairs that are not edges, sorted.
std::vector<Edge> complement_edges(const MatchGraph& g);

nlohmann::json to_json(const MatchGraph& g);
MatchGraph graph_from_json(const nlohmann::json& doc);

using Triple = std::array<std::size_t, 3>;

/// Cyclic sequence of overlapping triples (o[i], o[i+1], o[i+2]) over the
/// traversal order o. Clique i and clique i+1 share separators[i].
struct CliqueChain {
  std::vector<Triple> cliques;
  std::vector<std::array<std::size_t, 2>> separators;

  std::size_t size() const noexcept { return cliques.size(); }
  std::size_t next(std::size_t i) const { return (i + 1) % cliques.size(); }
  std::size_t prev(std::size_t i) const { return (i + cliques.size() - 1) % cliques.size(); }
};

CliqueChain clique_chain(const MatchGraph& g);

/// Pair of member slots (0..2) inside a clique triple.
struct SlotPair {
  std::uint8_t first = 0;
  std::uint8_t second = 0;

  friend bool operator==(const SlotPair&, const SlotPair&) = default;
};

/// Which edge potentials each clique multiplies into its table. Every graph
/// edge belongs to exactly one clique.
struct EdgeOwnership {
  std::vector<std::vector<SlotPair>> per_clique;
};

/// Clique i owns its (first, second) and (first, third) member pairs, which
/// assigns each of the 2n squared-cycle edges to one clique.
EdgeOwnership chain_edge_ownership(const CliqueChain& chain);

/// True if the owned pairs of `ownership` are exactly the edges of `g`, each once.
bool ownership_partitions_edges(const MatchGraph& g, const CliqueChain& chain,
                                const EdgeOwnership& ownership);

}  // namespace rigidmatch
