#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rigidmatch/geometry.hpp"
#include "rigidmatch/graph.hpp"

namespace rigidmatch {

enum class PotentialMode { gaussian, delta };

/// Where the dynamic-range floor is applied.
///  - per_edge: every edge potential is clamped before the product (default).
///  - per_clique: the product of a clique's owned edges is clamped once.
///  - none: raw potentials; tables may contain zeros in delta mode.
enum class ClampMode { per_edge, per_clique, none };

const char* to_string(PotentialMode mode);
PotentialMode potential_mode_from_string(const std::string& name);
const char* to_string(ClampMode mode);
ClampMode clamp_mode_from_string(const std::string& name);

struct PotentialParams {
  double sigma = 0.4;
  PotentialMode mode = PotentialMode::gaussian;
  /// Delta-mode support half-width; unset means 1e-9 times the template diameter.
  std::optional<double> delta_tol;
  double dynamic_range = 1000.0;
  ClampMode clamp = ClampMode::per_edge;

  void validate() const;
  double resolved_delta_tol(const PointPattern& tmpl) const;
};

inline constexpr double kSyntheticSigma = 0.4;
inline constexpr double kPixelSigma = 150.0;
inline constexpr double kDefaultDynamicRange = 1000.0;

/// f(dt - ds): exp(-(dt-ds)^2 / (2 sigma^2)) or the indicator |dt-ds| <= tol.
double edge_potential(double template_dist, double scene_dist, const PotentialParams& params,
                      double delta_tol = 0.0);

/// 1/d + (1 - 1/d) v; maps [0,1] onto [1/d, 1].
double clamp(double v, double dynamic_range);

/// m x m x m table over the scene assignments of one clique's three members,
/// stored row-major in clique member order.
struct CliqueTable {
  Triple clique{};
  std::size_t m = 0;
  std::vector<double> values;

  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return values[(a * m + b) * m + c];
  }
};

/// Clique potentials for every clique of `chain`, built from the edges each
/// clique owns. Costs Theta(n m^3).
std::vector<CliqueTable> build_clique_tables(const PointPattern& tmpl, const PointPattern& scene,
                                             const CliqueChain& chain,
                                             const EdgeOwnership& ownership,
                                             const PotentialParams& params);

/// Max entry over min entry; infinity when a table contains zeros.
double dynamic_range_of(std::span<const double> values);

/// Table over an arbitrary ordered variable list, each variable taking m
/// states; the first variable is the slowest-varying index.
struct Factor {
  std::vector<std::size_t> vars;
  std::size_t m = 0;
  std::vector<double> values;
};

Factor to_factor(const CliqueTable& table);

/// Pairwise edge factors for every edge of `g`, clamped per `params`.
std::vector<Factor> edge_factors(const PointPattern& tmpl, const PointPattern& scene,
                                 const MatchGraph& g, const PotentialParams& params);

}  // namespace rigidmatch
