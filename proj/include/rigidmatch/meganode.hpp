#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rigidmatch/geometry.hpp"
#include "rigidmatch/graph.hpp"
#include "rigidmatch/potentials.hpp"

namespace rigidmatch {

/// Pairwise reformulation of a clique chain: each clique becomes one variable
/// over m^3 joint states, and consecutive cliques I, I+1 are joined by an
/// explicit (m^3 x m^3) potential that equals clique I's table on states that
/// agree on the shared pair and rho elsewhere.
///
/// Clique tables are first rescaled so their smallest entry is 1; with that
/// scaling rho = 1 / prod_C max(table_C) is at most every compatible entry.
/// Exists to validate the clique-chain engine on tiny instances only.
struct MeganodeModel {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Triple> cliques;
  /// Rescaled clique tables (min entry 1), one per clique.
  std::vector<std::vector<double>> node_tables;
  /// pair[i] couples node i (row) and node i+1 (column), (m^3)^2 entries.
  std::vector<std::vector<double>> pair;
  double rho = 0.0;

  std::size_t states() const noexcept { return m * m * m; }
  double pair_value(std::size_t i, std::size_t row, std::size_t col) const {
    return pair[i][row * states() + col];
  }
};

/// Throws resource_exhausted when the m^3 state space exceeds `state_cap`.
MeganodeModel build_meganode_model(const CliqueChain& chain, std::span<const CliqueTable> tables,
                                   std::size_t state_cap = 1000);

/// Max-product messages of the pairwise model. forward[i] is the message from
/// node i to node i+1 (a function of node i+1's state); backward[i] is the
/// message from node i to node i-1. Each is rescaled to max 1.
struct MeganodeMessages {
  MeganodeMessages(std::size_t n, std::size_t states);

  std::vector<std::vector<double>> forward;
  std::vector<std::vector<double>> backward;
  std::size_t iteration = 0;
};

/// One synchronous sweep of generic pairwise max-product, maximizing over the
/// full (m^3)^2 pair tables.
void meganode_iterate(const MeganodeModel& model, MeganodeMessages& msgs);

struct MeganodeMap {
  /// Joint state index (a*m^2 + b*m + c) per node.
  std::vector<std::size_t> states;
  double score = 0.0;
  /// True when every consecutive pair of node states agrees on the shared pair.
  bool consistent = false;
};

/// Exhaustive MAP over all (m^3)^n node configurations, compatible or not.
MeganodeMap meganode_brute_force_map(const MeganodeModel& model,
                                     std::uint64_t guard = 50'000'000);

/// Variable assignment read off a consistent mega-node configuration.
Assignment meganode_assignment(const MeganodeModel& model, const MeganodeMap& map,
                               std::size_t template_size);

}  // namespace rigidmatch
