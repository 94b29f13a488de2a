#include "rigidmatch/meganode.hpp"

#include <algorithm>
#include <cmath>

#include "rigidmatch/errors.hpp"

namespace rigidmatch {

MeganodeModel build_meganode_model(const CliqueChain& chain, std::span<const CliqueTable> tables,
                                   std::size_t state_cap) {
  if (tables.size() != chain.size() || tables.empty()) {
    throw Error(ErrorCode::invalid_input, "mega-node model needs one table per clique");
  }
  MeganodeModel model;
  model.n = chain.size();
  model.m = tables.front().m;
  model.cliques = chain.cliques;
  const std::size_t s = model.states();
  if (s > state_cap) {
    throw Error(ErrorCode::resource_exhausted,
                "mega-node state space " + std::to_string(s) + " exceeds the cap of " +
                    std::to_string(state_cap));
  }

  double max_product = 1.0;
  for (const CliqueTable& t : tables) {
    if (t.m != model.m) throw Error(ErrorCode::invalid_input, "clique tables differ in m");
    const auto [lo, hi] = std::minmax_element(t.values.begin(), t.values.end());
    if (!(*lo > 0.0)) {
      throw Error(ErrorCode::invalid_input, "mega-node model needs strictly positive tables");
    }
    std::vector<double> scaled(t.values.size());
    for (std::size_t k = 0; k < scaled.size(); ++k) scaled[k] = t.values[k] / *lo;
    max_product *= *hi / *lo;
    model.node_tables.push_back(std::move(scaled));
  }
  model.rho = 1.0 / max_product;

  const std::size_t m = model.m;
  model.pair.assign(model.n, std::vector<double>(s * s, model.rho));
  for (std::size_t i = 0; i < model.n; ++i) {
    for (std::size_t row = 0; row < s; ++row) {
      // row = (a, b, c); compatible columns are (b, c, *).
      const std::size_t bc = row % (m * m);
      for (std::size_t d = 0; d < m; ++d) {
        model.pair[i][row * s + bc * m + d] = model.node_tables[i][row];
      }
    }
  }
  return model;
}

MeganodeMessages::MeganodeMessages(std::size_t n, std::size_t states)
    : forward(n, std::vector<double>(states, 1.0)), backward(n, std::vector<double>(states, 1.0)) {}

namespace {

void rescale(std::vector<double>& v) {
  const double top = *std::max_element(v.begin(), v.end());
  if (top > 0.0) {
    for (double& x : v) x /= top;
  }
}

}  // namespace

void meganode_iterate(const MeganodeModel& model, MeganodeMessages& msgs) {
  const std::size_t n = model.n;
  const std::size_t s = model.states();
  std::vector<std::vector<double>> fwd(n, std::vector<double>(s, 0.0));
  std::vector<std::vector<double>> bwd(n, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    const std::size_t next = (i + 1) % n;
    // node i -> node i+1 through pair[i]; incoming from node i-1.
    const auto& in_f = msgs.forward[prev];
    for (std::size_t x = 0; x < s; ++x) {
      for (std::size_t y = 0; y < s; ++y) {
        fwd[i][y] = std::max(fwd[i][y], model.pair_value(i, x, y) * in_f[x]);
      }
    }
    // node i -> node i-1 through pair[i-1]; incoming from node i+1.
    const auto& in_b = msgs.backward[next];
    for (std::size_t x = 0; x < s; ++x) {
      double best = 0.0;
      for (std::size_t y = 0; y < s; ++y) {
        best = std::max(best, model.pair_value(prev, x, y) * in_b[y]);
      }
      bwd[i][x] = best;
    }
    rescale(fwd[i]);
    rescale(bwd[i]);
  }
  msgs.forward.swap(fwd);
  msgs.backward.swap(bwd);
  ++msgs.iteration;
}

MeganodeMap meganode_brute_force_map(const MeganodeModel& model, std::uint64_t guard) {
  const std::size_t n = model.n;
  const std::size_t s = model.states();
  double total = 1.0;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<double>(s);
  if (total > static_cast<double>(guard)) {
    throw Error(ErrorCode::resource_exhausted,
                "mega-node enumeration of " + std::to_string(total) + " configurations exceeds the guard");
  }

  std::vector<std::size_t> cur(n, 0);
  MeganodeMap best;
  best.score = -1.0;
  while (true) {
    double score = 1.0;
    for (std::size_t i = 0; i < n; ++i) score *= model.pair_value(i, cur[i], cur[(i + 1) % n]);
    if (score > best.score) {
      best.score = score;
      best.states = cur;
    }
    std::size_t k = n;
    while (k > 0 && ++cur[k - 1] == s) {
      cur[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
  }

  const std::size_t mm = model.m * model.m;
  best.consistent = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (best.states[i] % mm != best.states[(i + 1) % n] / model.m) best.consistent = false;
  }
  return best;
}

Assignment meganode_assignment(const MeganodeModel& model, const MeganodeMap& map,
                               std::size_t template_size) {
  if (!map.consistent) {
    throw Error(ErrorCode::invalid_assignment, "mega-node configuration is not consistent");
  }
  Assignment a;
  a.map.assign(template_size, 0);
  const std::size_t m = model.m;
  for (std::size_t i = 0; i < model.n; ++i) {
    a.map[model.cliques[i][0]] = map.states[i] / (m * m);
  }
  return a;
}

}  // namespace rigidmatch
