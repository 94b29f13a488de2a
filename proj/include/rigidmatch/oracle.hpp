#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rigidmatch/geometry.hpp"
#include "rigidmatch/match_result.hpp"
#include "rigidmatch/potentials.hpp"

namespace rigidmatch {

/// Enumerate every map, or only the injective ones (diagnostics).
enum class MapSpace { all_maps, injective };

inline constexpr std::uint64_t kOracleGuard = 100'000'000;

struct OracleResult {
  Assignment assignment;
  double score = 0.0;
};

/// Exhaustive argmax of the product of `factors` over all m^n maps. Maps are
/// visited in lexicographic order and only a strictly better score replaces
/// the incumbent, so ties resolve to the lexicographically lowest map.
OracleResult brute_force_map(std::span<const Factor> factors, std::size_t n, std::size_t m,
                             MapSpace space = MapSpace::all_maps,
                             std::uint64_t guard = kOracleGuard);

struct ObjectiveResult {
  Assignment assignment;
  double residual = 0.0;
};

/// Exhaustive argmin of the distance-matrix residual, lowest map on ties.
ObjectiveResult brute_force_objective(const PointPattern& tmpl, const PointPattern& scene,
                                      MapSpace space = MapSpace::all_maps,
                                      std::uint64_t guard = kOracleGuard);

/// Brute-force MAP over the complete graph's edge potentials, packaged as a
/// match result. Serves templates too small for the cycle construction.
MatchResult oracle_match(const PointPattern& tmpl, const PointPattern& scene,
                         const PotentialParams& params, std::uint64_t guard = kOracleGuard);

}  // namespace rigidmatch
