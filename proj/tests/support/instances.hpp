#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "rigidmatch/bp.hpp"
#include "rigidmatch/geometry.hpp"
#include "rigidmatch/graph.hpp"
#include "rigidmatch/potentials.hpp"

namespace testsupport {

inline std::vector<rigidmatch::Point> uniform_points(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<rigidmatch::Point> pts(count);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

inline std::vector<rigidmatch::Point> general_position_points(std::size_t count,
                                                               std::mt19937_64& rng,
                                                               double area_tol = 1e-9) {
  while (true) {
    auto pts = uniform_points(count, rng);
    if (rigidmatch::in_general_position(pts, area_tol)) return pts;
  }
}

// Unrelated template and scene, both uniform in the unit square: the model has
// no planted answer, so every clique table is a generic random table.
struct RandomProblem {
  rigidmatch::PointPattern tmpl;
  rigidmatch::PointPattern scene;
};

inline RandomProblem random_problem(std::size_t n, std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto t = uniform_points(n, rng);
  auto s = uniform_points(m, rng);
  return {rigidmatch::PointPattern(std::move(t)), rigidmatch::PointPattern(std::move(s))};
}

struct ChainModel {
  rigidmatch::MatchGraph graph;
  rigidmatch::CliqueChain chain;
  std::vector<rigidmatch::CliqueTable> tables;
};

inline ChainModel chain_model(const rigidmatch::PointPattern& tmpl,
                              const rigidmatch::PointPattern& scene,
                              const rigidmatch::PotentialParams& params = {}) {
  auto g = rigidmatch::build_squared_cycle(tmpl.size());
  auto chain = rigidmatch::clique_chain(g);
  auto tables = rigidmatch::build_clique_tables(tmpl, scene, chain,
                                                rigidmatch::chain_edge_ownership(chain), params);
  return {std::move(g), std::move(chain), std::move(tables)};
}

inline std::vector<rigidmatch::Factor> as_factors(const std::vector<rigidmatch::CliqueTable>& tables) {
  std::vector<rigidmatch::Factor> out;
  for (const auto& t : tables) out.push_back(rigidmatch::to_factor(t));
  return out;
}

}  // namespace testsupport
