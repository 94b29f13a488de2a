#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <vector>

#include "rigidmatch/geometry.hpp"
#include "rigidmatch/graph.hpp"
#include "rigidmatch/match_result.hpp"
#include "rigidmatch/potentials.hpp"

namespace rigidmatch {

/// One 4-clique of a 3-tree: the three attachment vertices (ascending) and
/// the vertex attached to them.
struct JtNode {
  std::array<std::size_t, 4> vars{};
  std::size_t parent = kNoParent;
  std::array<std::size_t, 3> separator{};
  std::vector<std::size_t> children;

  static constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();
};

struct JunctionTree {
  std::size_t n = 0;
  std::vector<JtNode> nodes;
  std::size_t root = 0;
};

/// One node per vertex v >= 3 holding v and its attachment triangle. A node's
/// parent is the node that created its attachment triangle (the one whose
/// attached vertex is the triangle's largest member), or the root when the
/// triangle is the initial {0,1,2}.
JunctionTree build_junction_tree(const MatchGraph& g);

/// Tree shape and running-intersection checks.
bool is_valid_junction_tree(const JunctionTree& jt);

/// Owned-edge tables of the 3-tree model: the root owns all six edges of its
/// clique, every other node owns the three edges of its attached vertex.
std::vector<Factor> jt_factors(const PointPattern& tmpl, const PointPattern& scene,
                               const JunctionTree& jt, const PotentialParams& params);

struct JtOptions {
  std::size_t memory_cap_bytes = std::size_t{2} << 30;
  /// Relative band on normalized max-marginals used to build tie sets.
  double tie_tolerance = 1e-9;
};

/// Bytes of clique tables and max-marginals the exact pass needs.
std::size_t jt_required_bytes(const JunctionTree& jt, std::size_t m);

/// Exact MAP of the 3-tree model by an upward max-product pass, a downward
/// pass for max-marginals and a root-first traceback. Theta(n m^4) time and memory.
MatchResult jt_map(const PointPattern& tmpl, const PointPattern& scene, const JunctionTree& jt,
                   const PotentialParams& params, const JtOptions& options = {});

}  // namespace rigidmatch
