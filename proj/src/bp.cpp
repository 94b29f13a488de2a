#include "rigidmatch/bp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "rigidmatch/errors.hpp"

namespace rigidmatch {

ConvergenceConfig ConvergenceConfig::for_scene_size(std::size_t m) {
  ConvergenceConfig cfg;
  cfg.mse_cutoff = m >= 30 ? 1e-9 : 1e-8;
  return cfg;
}

void ConvergenceConfig::validate() const {
  if (!(mse_cutoff > 0.0) || !std::isfinite(mse_cutoff)) {
    throw Error(ErrorCode::invalid_parameters, "MSE cutoff must be finite and positive");
  }
  if (min_iterations > max_iterations) {
    throw Error(ErrorCode::invalid_parameters, "min_iterations exceeds max_iterations");
  }
}

MessageState::MessageState(std::size_t n_, std::size_t m_)
    : n(n_), m(m_), forward(n_, std::vector<double>(m_ * m_, 1.0)),
      backward(n_, std::vector<double>(m_ * m_, 1.0)) {}

namespace {

void normalize_max(std::vector<double>& msg) {
  const double top = *std::max_element(msg.begin(), msg.end());
  if (top <= 0.0) return;
  const double inv = 1.0 / top;
  for (double& v : msg) v *= inv;
}

// out(b,c) = max_a T(a,b,c) * in(a,b)
void forward_message(const CliqueTable& t, const std::vector<double>& in,
                     std::vector<double>& out) {
  const std::size_t m = t.m;
  std::fill(out.begin(), out.end(), 0.0);
  const double* table = t.values.data();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double w = in[a * m + b];
      const double* row = table + (a * m + b) * m;
      double* dst = out.data() + b * m;
      for (std::size_t c = 0; c < m; ++c) dst[c] = std::max(dst[c], row[c] * w);
    }
  }
  normalize_max(out);
}

// out(a,b) = max_c T(a,b,c) * in(b,c)
void backward_message(const CliqueTable& t, const std::vector<double>& in,
                      std::vector<double>& out) {
  const std::size_t m = t.m;
  const double* table = t.values.data();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double* row = table + (a * m + b) * m;
      const double* src = in.data() + b * m;
      double best = 0.0;
      for (std::size_t c = 0; c < m; ++c) best = std::max(best, row[c] * src[c]);
      out[a * m + b] = best;
    }
  }
  normalize_max(out);
}

void check_shapes(const CliqueChain& chain, std::span<const CliqueTable> tables,
                  const MessageState& state) {
  if (tables.size() != chain.size() || state.n != chain.size()) {
    throw Error(ErrorCode::invalid_input, "clique tables, chain and messages disagree on n");
  }
  for (const CliqueTable& t : tables) {
    if (t.m != state.m || t.values.size() != t.m * t.m * t.m) {
      throw Error(ErrorCode::invalid_input, "clique table shape does not match the message state");
    }
  }
}

}  // namespace

void bp_iterate(const CliqueChain& chain, std::span<const CliqueTable> tables,
                MessageState& state, Schedule schedule) {
  check_shapes(chain, tables, state);
  const std::size_t n = chain.size();

  if (schedule == Schedule::synchronous) {
    std::vector<std::vector<double>> fwd(n, std::vector<double>(state.m * state.m));
    std::vector<std::vector<double>> bwd(n, std::vector<double>(state.m * state.m));
    for (std::size_t i = 0; i < n; ++i) {
      forward_message(tables[i], state.forward[chain.prev(i)], fwd[i]);
      backward_message(tables[i], state.backward[chain.next(i)], bwd[i]);
    }
    state.forward.swap(fwd);
    state.backward.swap(bwd);
  } else {
    std::vector<double> scratch(state.m * state.m);
    for (std::size_t i = 0; i < n; ++i) {
      forward_message(tables[i], state.forward[chain.prev(i)], scratch);
      state.forward[i].swap(scratch);
    }
    for (std::size_t k = n; k-- > 0;) {
      backward_message(tables[k], state.backward[chain.next(k)], scratch);
      state.backward[k].swap(scratch);
    }
  }
  ++state.iteration;
}

std::vector<std::vector<double>> beliefs(const CliqueChain& chain,
                                         std::span<const CliqueTable> tables,
                                         const MessageState& state) {
  check_shapes(chain, tables, state);
  const std::size_t m = state.m;
  std::vector<std::vector<double>> out(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& in_fwd = state.forward[chain.prev(i)];
    const auto& in_bwd = state.backward[chain.next(i)];
    std::vector<double>& b = out[i];
    b.resize(m * m * m);
    double sum = 0.0;
    std::size_t idx = 0;
    for (std::size_t x0 = 0; x0 < m; ++x0) {
      for (std::size_t x1 = 0; x1 < m; ++x1) {
        const double f = in_fwd[x0 * m + x1];
        for (std::size_t x2 = 0; x2 < m; ++x2, ++idx) {
          b[idx] = tables[i].values[idx] * f * in_bwd[x1 * m + x2];
          sum += b[idx];
        }
      }
    }
    if (sum > 0.0) {
      for (double& v : b) v /= sum;
    } else {
      std::fill(b.begin(), b.end(), 1.0 / static_cast<double>(b.size()));
    }
  }
  return out;
}

double belief_mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::invalid_input, "belief tables differ in shape");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

bool check_convergence(const std::vector<std::vector<double>>& prev,
                       const std::vector<std::vector<double>>& current,
                       const ConvergenceConfig& cfg, std::size_t iteration) {
  if (prev.size() != current.size()) {
    throw Error(ErrorCode::invalid_input, "belief sets differ in clique count");
  }
  if (iteration < cfg.min_iterations) return false;
  for (std::size_t i = 0; i < prev.size(); ++i) {
    if (!(belief_mse(prev[i], current[i]) < cfg.mse_cutoff)) return false;
  }
  return true;
}

namespace {

// max over the other two members of a clique belief, for the member at `slot`.
std::vector<double> max_marginal(const std::vector<double>& belief, std::size_t m,
                                 std::size_t slot) {
  std::vector<double> out(m, 0.0);
  std::size_t idx = 0;
  for (std::size_t x0 = 0; x0 < m; ++x0) {
    for (std::size_t x1 = 0; x1 < m; ++x1) {
      for (std::size_t x2 = 0; x2 < m; ++x2, ++idx) {
        const std::size_t x = slot == 0 ? x0 : (slot == 1 ? x1 : x2);
        out[x] = std::max(out[x], belief[idx]);
      }
    }
  }
  return out;
}

std::size_t argmax_lowest(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

Decoding decode(const CliqueChain& chain, std::span<const CliqueTable> tables,
                const MessageState& state, const ConvergenceConfig& cfg) {
  const auto bel = beliefs(chain, tables, state);
  const std::size_t n = chain.size();
  const std::size_t m = state.m;
  const double band = std::sqrt(cfg.mse_cutoff);

  Decoding out;
  out.assignment.map.assign(n, 0);
  out.tie_sets.assign(n, {});
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t v = chain.cliques[p][0];
    const std::vector<double> mm = max_marginal(bel[p], m, 0);
    const std::size_t best = argmax_lowest(mm);
    out.assignment.map[v] = best;
    for (std::size_t s = 0; s < m; ++s) {
      if (mm[best] - mm[s] < band) out.tie_sets[v].push_back(s);
    }
    if (argmax_lowest(max_marginal(bel[chain.prev(p)], m, 1)) != best ||
        argmax_lowest(max_marginal(bel[chain.prev(chain.prev(p))], m, 2)) != best) {
      out.clique_agreement = false;
    }
  }
  return out;
}

BpRun run_bp(const CliqueChain& chain, std::span<const CliqueTable> tables,
             const ConvergenceConfig& cfg, Schedule schedule, std::ostream* trace) {
  cfg.validate();
  if (tables.empty()) throw Error(ErrorCode::invalid_input, "no clique tables");
  BpRun run{MessageState(chain.size(), tables.front().m), false};
  run.state.prev_beliefs = beliefs(chain, tables, run.state);
  if (trace) *trace << "iteration,clique,mse\n";

  while (run.state.iteration < cfg.max_iterations) {
    bp_iterate(chain, tables, run.state, schedule);
    auto current = beliefs(chain, tables, run.state);
    if (trace) {
      for (std::size_t i = 0; i < current.size(); ++i) {
        *trace << run.state.iteration << ',' << i << ','
               << belief_mse(run.state.prev_beliefs[i], current[i]) << '\n';
      }
    }
    const bool done = check_convergence(run.state.prev_beliefs, current, cfg, run.state.iteration);
    run.state.prev_beliefs = std::move(current);
    if (done) {
      run.converged = true;
      break;
    }
  }
  return run;
}

MatchResult bp_match(const PointPattern& tmpl, const PointPattern& scene,
                     const BpOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const ConvergenceConfig cfg =
      options.convergence.value_or(ConvergenceConfig::for_scene_size(scene.size()));

  const MatchGraph graph = options.cycle_order.empty() ? build_squared_cycle(tmpl.size())
                                                       : build_squared_cycle(options.cycle_order);
  if (graph.n() != tmpl.size()) {
    throw Error(ErrorCode::invalid_parameters, "cycle order length does not match the template");
  }
  const CliqueChain chain = clique_chain(graph);
  const auto tables =
      build_clique_tables(tmpl, scene, chain, chain_edge_ownership(chain), options.potentials);
  const BpRun run = run_bp(chain, tables, cfg, options.schedule, options.trace);
  Decoding dec = decode(chain, tables, run.state, cfg);

  MatchResult result;
  result.engine = "bp";
  result.residual = objective_residual(tmpl, scene, dec.assignment);
  result.collisions = count_collisions(dec.assignment);
  result.assignment = std::move(dec.assignment);
  result.tie_sets = std::move(dec.tie_sets);
  result.clique_agreement = dec.clique_agreement;
  result.iterations = run.state.iteration;
  result.converged = run.converged;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace rigidmatch
