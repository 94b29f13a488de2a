#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rigidmatch/geometry.hpp"
#include "rigidmatch/graph.hpp"
#include "rigidmatch/match_result.hpp"
#include "rigidmatch/potentials.hpp"

namespace rigidmatch {

struct ConvergenceConfig {
  double mse_cutoff = 1e-8;
  std::size_t min_iterations = 5;
  std::size_t max_iterations = 100;

  /// 1e-8 below 30 scene points, 1e-9 from 30 on.
  static ConvergenceConfig for_scene_size(std::size_t m);

  void validate() const;
};

/// Synchronous updates every directed message from the previous sweep's
/// messages; sequential runs a forward pass then a backward pass, each
/// consuming messages produced earlier in the same pass.
enum class Schedule { synchronous, sequential };

/// Max-product messages around a clique chain.
///
/// forward[i] is the message from clique i to clique i+1 over the
/// separator (o[i+1], o[i+2]); backward[i] is the message from clique i to
/// clique i-1 over (o[i], o[i+1]). Both are m x m, first separator vertex
/// slowest, and rescaled so their largest entry is 1.
struct MessageState {
  MessageState(std::size_t n, std::size_t m);

  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<std::vector<double>> forward;
  std::vector<std::vector<double>> backward;
  std::size_t iteration = 0;
  std::vector<std::vector<double>> prev_beliefs;
};

/// One sweep over all 2n directed messages. Theta(n m^3).
void bp_iterate(const CliqueChain& chain, std::span<const CliqueTable> tables,
                MessageState& state, Schedule schedule = Schedule::synchronous);

/// Clique table times both incoming messages, normalized to sum 1.
std::vector<std::vector<double>> beliefs(const CliqueChain& chain,
                                         std::span<const CliqueTable> tables,
                                         const MessageState& state);

double belief_mse(std::span<const double> a, std::span<const double> b);

/// True iff every clique's belief MSE is strictly below the cutoff and at
/// least `min_iterations` sweeps have run.
bool check_convergence(const std::vector<std::vector<double>>& prev,
                       const std::vector<std::vector<double>>& current,
                       const ConvergenceConfig& cfg, std::size_t iteration);

struct Decoding {
  Assignment assignment;
  std::vector<std::vector<std::size_t>> tie_sets;
  bool clique_agreement = true;
};

/// Reads each vertex's max-belief from the clique whose first member it is.
/// The assignment is the exact argmax (lowest index on exact ties); the tie
/// set holds every index whose max-belief is within sqrt(cutoff) of it.
Decoding decode(const CliqueChain& chain, std::span<const CliqueTable> tables,
                const MessageState& state, const ConvergenceConfig& cfg);

struct BpRun {
  MessageState state;
  bool converged = false;
};

/// Iterates from all-ones messages until convergence or max_iterations.
/// With `trace` set, writes `iteration,clique,mse` CSV rows.
BpRun run_bp(const CliqueChain& chain, std::span<const CliqueTable> tables,
             const ConvergenceConfig& cfg, Schedule schedule = Schedule::synchronous,
             std::ostream* trace = nullptr);

struct BpOptions {
  PotentialParams potentials;
  /// Unset picks ConvergenceConfig::for_scene_size(m).
  std::optional<ConvergenceConfig> convergence;
  Schedule schedule = Schedule::synchronous;
  /// Traversal order for the squared cycle; empty means index order.
  std::vector<std::size_t> cycle_order;
  std::ostream* trace = nullptr;
};

/// Full pipeline: squared cycle, clique tables, message passing, decoding.
/// Needs at least 5 template points.
MatchResult bp_match(const PointPattern& tmpl, const PointPattern& scene,
                     const BpOptions& options = {});

}  // namespace rigidmatch
