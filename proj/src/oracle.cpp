#include "rigidmatch/oracle.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "rigidmatch/errors.hpp"
#include "rigidmatch/graph.hpp"

namespace rigidmatch {
namespace {

void check_guard(std::size_t n, std::size_t m, std::uint64_t guard) {
  const double count = std::pow(static_cast<double>(m), static_cast<double>(n));
  if (count > static_cast<double>(guard)) {
    throw Error(ErrorCode::resource_exhausted,
                "brute force over " + std::to_string(m) + "^" + std::to_string(n) +
                    " maps exceeds the guard of " + std::to_string(guard));
  }
}

// Calls visit(map) for every map in lexicographic order.
template <typename Visit>
void for_each_map(std::size_t n, std::size_t m, MapSpace space, Visit&& visit) {
  if (space == MapSpace::injective && m < n) {
    throw Error(ErrorCode::invalid_parameters, "no injective map exists when m < n");
  }
  std::vector<std::size_t> cur(n, 0);
  std::vector<std::size_t> uses(m, 0);
  if (n > 0) uses[0] = n;
  while (true) {
    bool injective = true;
    if (space == MapSpace::injective) {
      for (std::size_t u : uses) {
        if (u > 1) {
          injective = false;
          break;
        }
      }
    }
    if (injective) visit(cur);

    std::size_t k = n;
    while (k > 0) {
      --uses[cur[k - 1]];
      if (++cur[k - 1] < m) {
        ++uses[cur[k - 1]];
        break;
      }
      cur[k - 1] = 0;
      ++uses[0];
      --k;
    }
    if (k == 0) break;
  }
}

}  // namespace

OracleResult brute_force_map(std::span<const Factor> factors, std::size_t n, std::size_t m,
                             MapSpace space, std::uint64_t guard) {
  if (n == 0 || m == 0) throw Error(ErrorCode::invalid_parameters, "oracle needs n >= 1 and m >= 1");
  check_guard(n, m, guard);

  std::vector<std::vector<std::size_t>> strides;
  for (const Factor& f : factors) {
    if (f.m != m) throw Error(ErrorCode::invalid_input, "factor state count differs from m");
    std::size_t size = 1;
    std::vector<std::size_t> st(f.vars.size());
    for (std::size_t k = f.vars.size(); k-- > 0;) {
      if (f.vars[k] >= n) throw Error(ErrorCode::invalid_input, "factor variable out of range");
      st[k] = size;
      size *= m;
    }
    if (f.values.size() != size) throw Error(ErrorCode::invalid_input, "factor table has the wrong size");
    strides.push_back(std::move(st));
  }

  OracleResult best;
  best.score = -std::numeric_limits<double>::infinity();
  for_each_map(n, m, space, [&](const std::vector<std::size_t>& x) {
    double score = 1.0;
    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
      std::size_t idx = 0;
      for (std::size_t k = 0; k < factors[fi].vars.size(); ++k) {
        idx += x[factors[fi].vars[k]] * strides[fi][k];
      }
      score *= factors[fi].values[idx];
    }
    if (score > best.score) {
      best.score = score;
      best.assignment.map = x;
    }
  });
  return best;
}

ObjectiveResult brute_force_objective(const PointPattern& tmpl, const PointPattern& scene,
                                      MapSpace space, std::uint64_t guard) {
  const std::size_t n = tmpl.size();
  const std::size_t m = scene.size();
  check_guard(n, m, guard);
  const DistanceMatrix td = distance_matrix(tmpl);
  const DistanceMatrix sd = distance_matrix(scene);

  ObjectiveResult best;
  best.residual = std::numeric_limits<double>::infinity();
  for_each_map(n, m, space, [&](const std::vector<std::size_t>& x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double d = td(i, j) - sd(x[i], x[j]);
        sum += 2.0 * d * d;
      }
    }
    if (sum < best.residual) {
      best.residual = sum;
      best.assignment.map = x;
    }
  });
  return best;
}

MatchResult oracle_match(const PointPattern& tmpl, const PointPattern& scene,
                         const PotentialParams& params, std::uint64_t guard) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = tmpl.size();
  std::vector<Edge> all;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) all.push_back({i, j});
  }
  const MatchGraph complete(n, std::move(all), GraphKind::generic);
  const auto factors = edge_factors(tmpl, scene, complete, params);
  OracleResult best = brute_force_map(factors, n, scene.size(), MapSpace::all_maps, guard);

  MatchResult result;
  result.engine = "oracle";
  result.residual = objective_residual(tmpl, scene, best.assignment);
  result.collisions = count_collisions(best.assignment);
  for (std::size_t s : best.assignment.map) result.tie_sets.push_back({s});
  result.assignment = std::move(best.assignment);
  result.iterations = 1;
  result.converged = true;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace rigidmatch
