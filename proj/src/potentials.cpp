#include "rigidmatch/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rigidmatch/errors.hpp"

namespace rigidmatch {

const char* to_string(PotentialMode mode) {
  return mode == PotentialMode::gaussian ? "gaussian" : "delta";
}

PotentialMode potential_mode_from_string(const std::string& name) {
  if (name == "gaussian") return PotentialMode::gaussian;
  if (name == "delta") return PotentialMode::delta;
  throw Error(ErrorCode::invalid_parameters, "unknown potential mode '" + name + "'");
}

const char* to_string(ClampMode mode) {
  switch (mode) {
    case ClampMode::per_edge: return "per_edge";
    case ClampMode::per_clique: return "per_clique";
    case ClampMode::none: return "none";
  }
  return "per_edge";
}

ClampMode clamp_mode_from_string(const std::string& name) {
  if (name == "per_edge") return ClampMode::per_edge;
  if (name == "per_clique") return ClampMode::per_clique;
  if (name == "none") return ClampMode::none;
  throw Error(ErrorCode::invalid_parameters, "unknown clamp mode '" + name + "'");
}

void PotentialParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::invalid_parameters, "sigma must be finite and positive");
  }
  if (!(dynamic_range >= 1.0 + 1e-9) || std::isnan(dynamic_range)) {
    throw Error(ErrorCode::invalid_parameters, "dynamic range must exceed 1");
  }
  if (delta_tol && (!(*delta_tol >= 0.0) || !std::isfinite(*delta_tol))) {
    throw Error(ErrorCode::invalid_parameters, "delta tolerance must be finite and >= 0");
  }
}

double PotentialParams::resolved_delta_tol(const PointPattern& tmpl) const {
  return delta_tol ? *delta_tol : 1e-9 * diameter(tmpl);
}

double edge_potential(double template_dist, double scene_dist, const PotentialParams& params,
                      double delta_tol) {
  const double diff = template_dist - scene_dist;
  if (params.mode == PotentialMode::delta) return std::abs(diff) <= delta_tol ? 1.0 : 0.0;
  return std::exp(-(diff * diff) / (2.0 * params.sigma * params.sigma));
}

double clamp(double v, double dynamic_range) {
  const double floor = 1.0 / dynamic_range;
  return floor + (1.0 - floor) * v;
}

double dynamic_range_of(std::span<const double> values) {
  if (values.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo <= 0.0) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

namespace {

// m x m matrix of (possibly clamped) potentials for one template distance.
std::vector<double> pair_potentials(double template_dist, const DistanceMatrix& scene_d,
                                    const PotentialParams& params, double delta_tol,
                                    bool clamp_each) {
  const std::size_t m = scene_d.dim();
  std::vector<double> out(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double v = edge_potential(template_dist, scene_d(a, b), params, delta_tol);
      out[a * m + b] = clamp_each ? clamp(v, params.dynamic_range) : v;
    }
  }
  return out;
}

}  // namespace

std::vector<CliqueTable> build_clique_tables(const PointPattern& tmpl, const PointPattern& scene,
                                             const CliqueChain& chain,
                                             const EdgeOwnership& ownership,
                                             const PotentialParams& params) {
  params.validate();
  if (ownership.per_clique.size() != chain.size()) {
    throw Error(ErrorCode::invalid_input, "edge ownership does not match the clique chain");
  }
  for (const Triple& c : chain.cliques) {
    for (std::size_t v : c) {
      if (v >= tmpl.size()) {
        throw Error(ErrorCode::invalid_input, "clique member " + std::to_string(v) +
                                                  " outside a template of size " +
                                                  std::to_string(tmpl.size()));
      }
    }
  }

  const DistanceMatrix td = distance_matrix(tmpl);
  const DistanceMatrix sd = distance_matrix(scene);
  const std::size_t m = scene.size();
  const double tol = params.resolved_delta_tol(tmpl);
  const bool clamp_each = params.clamp == ClampMode::per_edge;

  std::vector<CliqueTable> tables;
  tables.reserve(chain.size());
  for (std::size_t ci = 0; ci < chain.size(); ++ci) {
    const Triple& members = chain.cliques[ci];
    CliqueTable table{members, m, std::vector<double>(m * m * m, 1.0)};

    for (const SlotPair& sp : ownership.per_clique[ci]) {
      const std::vector<double> pair =
          pair_potentials(td(members[sp.first], members[sp.second]), sd, params, tol, clamp_each);
      std::array<std::size_t, 3> x{};
      std::size_t idx = 0;
      for (x[0] = 0; x[0] < m; ++x[0]) {
        for (x[1] = 0; x[1] < m; ++x[1]) {
          for (x[2] = 0; x[2] < m; ++x[2], ++idx) {
            table.values[idx] *= pair[x[sp.first] * m + x[sp.second]];
          }
        }
      }
    }
    if (params.clamp == ClampMode::per_clique) {
      for (double& v : table.values) v = clamp(v, params.dynamic_range);
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

Factor to_factor(const CliqueTable& table) {
  return Factor{{table.clique[0], table.clique[1], table.clique[2]}, table.m, table.values};
}

std::vector<Factor> edge_factors(const PointPattern& tmpl, const PointPattern& scene,
                                 const MatchGraph& g, const PotentialParams& params) {
  params.validate();
  if (g.n() != tmpl.size()) {
    throw Error(ErrorCode::invalid_input, "graph size does not match the template");
  }
  const DistanceMatrix td = distance_matrix(tmpl);
  const DistanceMatrix sd = distance_matrix(scene);
  const double tol = params.resolved_delta_tol(tmpl);
  std::vector<Factor> out;
  out.reserve(g.edges().size());
  for (const Edge& e : g.edges()) {
    out.push_back(Factor{{e.u, e.v},
                         scene.size(),
                         pair_potentials(td(e.u, e.v), sd, params, tol,
                                         params.clamp != ClampMode::none)});
  }
  return out;
}

}  // namespace rigidmatch
