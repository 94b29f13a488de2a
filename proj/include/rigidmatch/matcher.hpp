#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "rigidmatch/bp.hpp"
#include "rigidmatch/junction_tree.hpp"
#include "rigidmatch/match_result.hpp"
#include "rigidmatch/potentials.hpp"

namespace rigidmatch {

enum class Engine { bp, jt, oracle };

const char* to_string(Engine engine);
Engine engine_from_string(const std::string& name);

struct MatchOptions {
  Engine engine = Engine::bp;
  PotentialParams potentials;
  std::optional<ConvergenceConfig> convergence;
  Schedule schedule = Schedule::synchronous;
  /// Seed for the 3-tree attachment choices of the junction-tree engine.
  std::uint64_t three_tree_seed = 0;
  JtOptions jt;
  std::ostream* trace = nullptr;
};

/// Runs the requested engine. Templates below the engine's minimum size
/// (5 for bp, 4 for jt) are matched by the brute-force oracle instead, with
/// `note` recording the substitution.
MatchResult match(const PointPattern& tmpl, const PointPattern& scene,
                  const MatchOptions& options = {});

}  // namespace rigidmatch
