#include "rigidmatch/junction_tree.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <set>

#include "rigidmatch/errors.hpp"

namespace rigidmatch {

JunctionTree build_junction_tree(const MatchGraph& g) {
  if (g.kind() != GraphKind::three_tree) {
    throw Error(ErrorCode::invalid_graph,
                std::string("junction tree needs a 3-tree, got ") + to_string(g.kind()));
  }
  if (g.n() < 4) throw Error(ErrorCode::degenerate_size, "junction tree needs n >= 4");

  JunctionTree jt;
  jt.n = g.n();
  jt.root = 0;
  for (std::size_t v = 3; v < g.n(); ++v) {
    std::vector<std::size_t> att;
    for (std::size_t w : g.neighbors(v)) {
      if (w < v) att.push_back(w);
    }
    if (att.size() != 3 || !g.has_edge(att[0], att[1]) || !g.has_edge(att[0], att[2]) ||
        !g.has_edge(att[1], att[2])) {
      throw Error(ErrorCode::invalid_graph,
                  "vertex " + std::to_string(v) + " is not attached to a triangle of earlier vertices");
    }
    JtNode node;
    node.vars = {att[0], att[1], att[2], v};
    node.separator = {att[0], att[1], att[2]};
    if (v > 3) node.parent = att[2] >= 3 ? att[2] - 3 : jt.root;
    jt.nodes.push_back(node);
  }
  if (jt.nodes.front().separator != std::array<std::size_t, 3>{0, 1, 2}) {
    throw Error(ErrorCode::invalid_graph, "vertex 3 must attach to the base triangle");
  }
  for (std::size_t k = 0; k < jt.nodes.size(); ++k) {
    if (jt.nodes[k].parent != JtNode::kNoParent) jt.nodes[jt.nodes[k].parent].children.push_back(k);
  }
  return jt;
}

bool is_valid_junction_tree(const JunctionTree& jt) {
  const std::size_t count = jt.nodes.size();
  if (count == 0 || jt.root >= count) return false;

  // Exactly one root, parents point to earlier nodes: connected and acyclic.
  for (std::size_t k = 0; k < count; ++k) {
    const JtNode& node = jt.nodes[k];
    if (k == jt.root) {
      if (node.parent != JtNode::kNoParent) return false;
      continue;
    }
    if (node.parent >= k) return false;
    const auto& pv = jt.nodes[node.parent].vars;
    for (std::size_t s : node.separator) {
      if (std::find(pv.begin(), pv.end(), s) == pv.end()) return false;
      if (std::find(node.vars.begin(), node.vars.end(), s) == node.vars.end()) return false;
    }
  }

  // Running intersection: the nodes containing any vertex form a connected subtree,
  // i.e. exactly one of them has a parent that does not contain the vertex.
  for (std::size_t v = 0; v < jt.n; ++v) {
    std::size_t tops = 0;
    for (std::size_t k = 0; k < count; ++k) {
      const auto& vars = jt.nodes[k].vars;
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) continue;
      const std::size_t p = jt.nodes[k].parent;
      if (p == JtNode::kNoParent) {
        ++tops;
        continue;
      }
      const auto& pv = jt.nodes[p].vars;
      if (std::find(pv.begin(), pv.end(), v) == pv.end()) ++tops;
    }
    if (tops != 1) return false;
  }
  return true;
}

namespace {

using Quad = std::array<std::size_t, 4>;

constexpr std::array<std::array<std::uint8_t, 2>, 6> kAllPairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<std::array<std::uint8_t, 2>, 3> kAttachPairs = {{{0, 3}, {1, 3}, {2, 3}}};

std::vector<double> pair_table(double template_dist, const DistanceMatrix& sd,
                               const PotentialParams& params, double delta_tol) {
  const std::size_t m = sd.dim();
  const bool clamp_each = params.clamp == ClampMode::per_edge;
  std::vector<double> pair(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double v = edge_potential(template_dist, sd(a, b), params, delta_tol);
      pair[a * m + b] = clamp_each ? clamp(v, params.dynamic_range) : v;
    }
  }
  return pair;
}

std::vector<double> node_table(const JtNode& node, bool is_root, const DistanceMatrix& td,
                               const DistanceMatrix& sd, const PotentialParams& params,
                               double delta_tol) {
  const std::size_t m = sd.dim();
  std::vector<std::array<std::uint8_t, 2>> owned;
  if (is_root) {
    owned.assign(kAllPairs.begin(), kAllPairs.end());
  } else {
    owned.assign(kAttachPairs.begin(), kAttachPairs.end());
  }
  std::vector<std::vector<double>> pairs;
  for (const auto& p : owned) pairs.push_back(pair_table(td(node.vars[p[0]], node.vars[p[1]]), sd, params, delta_tol));

  std::vector<double> table(m * m * m * m);
  const bool per_clique = params.clamp == ClampMode::per_clique;
  Quad x{};
  std::size_t idx = 0;
  for (x[0] = 0; x[0] < m; ++x[0])
    for (x[1] = 0; x[1] < m; ++x[1])
      for (x[2] = 0; x[2] < m; ++x[2])
        for (x[3] = 0; x[3] < m; ++x[3], ++idx) {
          double v = 1.0;
          for (std::size_t k = 0; k < owned.size(); ++k) v *= pairs[k][x[owned[k][0]] * m + x[owned[k][1]]];
          table[idx] = per_clique ? clamp(v, params.dynamic_range) : v;
        }
  return table;
}

// Strides that map a 4-index of `node` onto the index of a 3-variable table
// over `sep` (ascending vertices); the node variable outside `sep` gets 0.
Quad separator_strides(const JtNode& node, const std::array<std::size_t, 3>& sep, std::size_t m) {
  Quad strides{0, 0, 0, 0};
  const std::array<std::size_t, 3> weights = {m * m, m, 1};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto it = std::find(node.vars.begin(), node.vars.end(), sep[k]);
    strides[static_cast<std::size_t>(it - node.vars.begin())] = weights[k];
  }
  return strides;
}

void normalize_max(std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  if (top > 0.0) {
    for (double& x : v) x /= top;
  }
}

}  // namespace

std::vector<Factor> jt_factors(const PointPattern& tmpl, const PointPattern& scene,
                               const JunctionTree& jt, const PotentialParams& params) {
  params.validate();
  if (jt.n != tmpl.size()) throw Error(ErrorCode::invalid_input, "junction tree size does not match the template");
  const DistanceMatrix td = distance_matrix(tmpl);
  const DistanceMatrix sd = distance_matrix(scene);
  const double tol = params.resolved_delta_tol(tmpl);
  std::vector<Factor> out;
  for (std::size_t k = 0; k < jt.nodes.size(); ++k) {
    const JtNode& node = jt.nodes[k];
    out.push_back(Factor{{node.vars.begin(), node.vars.end()},
                         scene.size(),
                         node_table(node, k == jt.root, td, sd, params, tol)});
  }
  return out;
}

std::size_t jt_required_bytes(const JunctionTree& jt, std::size_t m) {
  const std::size_t cells = m * m * m * m;
  // one clique table per node plus separator messages and traceback tables.
  return jt.nodes.size() * (cells + 4 * m * m * m) * sizeof(double);
}

MatchResult jt_map(const PointPattern& tmpl, const PointPattern& scene, const JunctionTree& jt,
                   const PotentialParams& params, const JtOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::size_t m = scene.size();
  const std::size_t bytes = jt_required_bytes(jt, m);
  if (bytes > options.memory_cap_bytes) {
    throw Error(ErrorCode::resource_exhausted,
                "junction tree needs about " + std::to_string(bytes) + " bytes, cap is " +
                    std::to_string(options.memory_cap_bytes));
  }
  if (!is_valid_junction_tree(jt)) throw Error(ErrorCode::invalid_graph, "malformed junction tree");

  const std::vector<Factor> factors = jt_factors(tmpl, scene, jt, params);
  const std::size_t count = jt.nodes.size();
  const std::size_t m3 = m * m * m;

  std::vector<std::vector<Quad>> child_strides(count);
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t c : jt.nodes[k].children) {
      child_strides[k].push_back(separator_strides(jt.nodes[k], jt.nodes[c].separator, m));
    }
  }

  // Upward pass, children before parents (children have larger indices). A
  // node's separator is its first three variables, so the message to the
  // parent maximizes over the last one; best_last keeps that argmax.
  std::vector<std::vector<double>> to_parent(count);
  std::vector<std::vector<std::uint32_t>> best_last(count);
  std::size_t root_best = 0;
  for (std::size_t k = count; k-- > 0;) {
    const JtNode& node = jt.nodes[k];
    const auto& table = factors[k].values;
    const auto& cs = child_strides[k];
    std::vector<const double*> msgs;
    for (std::size_t c : node.children) msgs.push_back(to_parent[c].data());
    const bool is_root = k == jt.root;
    std::vector<double> out(is_root ? 0 : m3, 0.0);
    std::vector<std::uint32_t> arg(is_root ? 0 : m3, 0);
    double root_top = -1.0;

    std::size_t idx = 0;
    Quad x{};
    for (x[0] = 0; x[0] < m; ++x[0])
      for (x[1] = 0; x[1] < m; ++x[1])
        for (x[2] = 0; x[2] < m; ++x[2]) {
          const std::size_t sep = (x[0] * m + x[1]) * m + x[2];
          double best = -1.0;
          std::uint32_t best_d = 0;
          for (x[3] = 0; x[3] < m; ++x[3], ++idx) {
            double v = table[idx];
            for (std::size_t c = 0; c < msgs.size(); ++c) {
              const Quad& st = cs[c];
              v *= msgs[c][x[0] * st[0] + x[1] * st[1] + x[2] * st[2] + x[3] * st[3]];
            }
            if (v > best) {
              best = v;
              best_d = static_cast<std::uint32_t>(x[3]);
            }
            if (is_root && v > root_top) {
              root_top = v;
              root_best = idx;
            }
          }
          if (!is_root) {
            out[sep] = best;
            arg[sep] = best_d;
          }
        }
    if (!is_root) {
      normalize_max(out);
      to_parent[k] = std::move(out);
      best_last[k] = std::move(arg);
    }
  }

  // Downward pass: each node combines its table, the message from its parent
  // and all child messages. The message to child c excludes c's own message,
  // taken as a prefix times suffix product so zero entries need no division.
  // Max-marginals for tie sets are accumulated on the way.
  std::vector<std::vector<double>> from_parent(count);
  std::vector<std::array<std::vector<double>, 4>> slot_max(count);
  for (std::size_t k = 0; k < count; ++k) {
    const JtNode& node = jt.nodes[k];
    const auto& table = factors[k].values;
    const auto& cs = child_strides[k];
    const std::size_t nc = node.children.size();
    std::vector<const double*> msgs;
    for (std::size_t c : node.children) msgs.push_back(to_parent[c].data());
    const double* fp = node.parent != JtNode::kNoParent ? from_parent[k].data() : nullptr;
    const bool is_root = k == jt.root;

    std::vector<std::vector<double>> down(nc, std::vector<double>(m3, 0.0));
    auto& mm = slot_max[k];
    for (std::size_t s = 0; s < 4; ++s) {
      if (is_root || s == 3) mm[s].assign(m, 0.0);
    }
    std::vector<double> prefix(nc + 1), vals(nc);
    std::vector<std::size_t> sidx(nc);

    std::size_t idx = 0;
    Quad x{};
    for (x[0] = 0; x[0] < m; ++x[0])
      for (x[1] = 0; x[1] < m; ++x[1])
        for (x[2] = 0; x[2] < m; ++x[2]) {
          const double base_abc = fp ? fp[(x[0] * m + x[1]) * m + x[2]] : 1.0;
          for (x[3] = 0; x[3] < m; ++x[3], ++idx) {
            const double base = table[idx] * base_abc;
            prefix[0] = 1.0;
            for (std::size_t c = 0; c < nc; ++c) {
              const Quad& st = cs[c];
              sidx[c] = x[0] * st[0] + x[1] * st[1] + x[2] * st[2] + x[3] * st[3];
              vals[c] = msgs[c][sidx[c]];
              prefix[c + 1] = prefix[c] * vals[c];
            }
            double suffix = 1.0;
            for (std::size_t c = nc; c-- > 0;) {
              const double v = base * prefix[c] * suffix;
              if (v > down[c][sidx[c]]) down[c][sidx[c]] = v;
              suffix *= vals[c];
            }
            const double full = base * prefix[nc];
            if (is_root) {
              for (std::size_t s = 0; s < 3; ++s) mm[s][x[s]] = std::max(mm[s][x[s]], full);
            }
            mm[3][x[3]] = std::max(mm[3][x[3]], full);
          }
        }
    for (std::size_t c = 0; c < nc; ++c) {
      normalize_max(down[c]);
      from_parent[node.children[c]] = std::move(down[c]);
    }
  }

  // Traceback: root argmax, then each attached vertex given its separator.
  Assignment assignment;
  assignment.map.assign(jt.n, 0);
  {
    const auto& vars = jt.nodes[jt.root].vars;
    assignment.map[vars[0]] = root_best / m3;
    assignment.map[vars[1]] = (root_best / (m * m)) % m;
    assignment.map[vars[2]] = (root_best / m) % m;
    assignment.map[vars[3]] = root_best % m;
  }
  for (std::size_t k = 0; k < count; ++k) {
    if (k == jt.root) continue;
    const JtNode& node = jt.nodes[k];
    const std::size_t sep = (assignment.map[node.vars[0]] * m + assignment.map[node.vars[1]]) * m +
                            assignment.map[node.vars[2]];
    assignment.map[node.vars[3]] = best_last[k][sep];
  }

  // Tie sets from the max-marginal of the node where each vertex appears.
  std::vector<std::vector<std::size_t>> ties(jt.n);
  auto vertex_ties = [&](std::size_t node_index, std::size_t slot) {
    const std::size_t v = jt.nodes[node_index].vars[slot];
    const auto& mm = slot_max[node_index][slot];
    const double top = *std::max_element(mm.begin(), mm.end());
    for (std::size_t s = 0; s < m; ++s) {
      if (s == assignment.map[v] || mm[s] >= top * (1.0 - options.tie_tolerance)) ties[v].push_back(s);
    }
  };
  for (std::size_t slot = 0; slot < 4; ++slot) vertex_ties(jt.root, slot);
  for (std::size_t k = 0; k < count; ++k) {
    if (k != jt.root) vertex_ties(k, 3);
  }

  MatchResult result;
  result.engine = "jt";
  result.residual = objective_residual(tmpl, scene, assignment);
  result.collisions = count_collisions(assignment);
  result.assignment = std::move(assignment);
  result.tie_sets = std::move(ties);
  result.iterations = 1;
  result.converged = true;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace rigidmatch
