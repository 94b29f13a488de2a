#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "rigidmatch/geometry.hpp"

namespace rigidmatch {

struct MatchResult {
  std::string engine;
  Assignment assignment;
  /// Per template index, every scene index considered a possible MAP estimate.
  std::vector<std::vector<std::size_t>> tie_sets;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double wall_time_s = 0.0;
  std::size_t collisions = 0;
  /// BP only: whether all three cliques containing each vertex agree on its argmax.
  bool clique_agreement = true;
  /// Set when a request for one engine was served by the brute-force engine.
  std::string note;
};

inline constexpr int kResultSchemaVersion = 1;

/// JSON document for a single match; `include_timing` controls wall_time_s.
nlohmann::json to_json(const MatchResult& r, bool include_timing = true);

}  // namespace rigidmatch
