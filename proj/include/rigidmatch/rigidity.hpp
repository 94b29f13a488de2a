#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rigidmatch/geometry.hpp"
#include "rigidmatch/graph.hpp"

namespace rigidmatch {

/// Edge lengths of a squared cycle, aligned with `g.edges()`.
std::vector<double> edge_lengths(const MatchGraph& g, const PointPattern& embedding);

/// Every planar embedding of a squared cycle whose edge lengths match
/// `lengths` (aligned with `g.edges()`) to within `tol`, expressed in the
/// anchor frame: traversal vertex 0 at the origin, vertex 1 on the positive
/// x-axis and the last vertex in the upper half plane. Remaining vertices are
/// placed one at a time by intersecting the circles around their two
/// predecessors, branching on both intersection points; branches that violate
/// the closing edges are dropped.
std::vector<std::vector<Point>> anchored_realizations(const MatchGraph& g,
                                                      std::span<const double> lengths,
                                                      double tol = 1e-7);

}  // namespace rigidmatch
