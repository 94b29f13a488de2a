#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "rigidmatch/matcher.hpp"

namespace rigidmatch {

inline constexpr int kBenchmarkSchemaVersion = 1;

/// Synthetic accuracy/runtime grid: every (m, eps, trial) cell draws one
/// instance, and every selected engine matches that same instance.
struct BenchmarkSpec {
  std::size_t n = 10;
  std::vector<std::size_t> m_values = {10, 20, 30, 40};
  std::vector<double> eps_values = {0.0, 1.0 / 256, 2.0 / 256, 3.0 / 256, 4.0 / 256};
  std::size_t trials = 50;
  std::vector<Engine> engines = {Engine::bp, Engine::jt};
  PotentialMode mode = PotentialMode::gaussian;
  double sigma = kSyntheticSigma;
  double dynamic_range = kDefaultDynamicRange;
  /// Per-m MSE cutoff overrides; other m use ConvergenceConfig::for_scene_size.
  std::map<std::size_t, double> cutoffs;
  std::size_t min_iterations = 5;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
  ConvergenceConfig convergence_for(std::size_t m) const;

  static BenchmarkSpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

struct BenchmarkRow {
  std::string engine;
  std::size_t n = 0;
  std::size_t m = 0;
  double eps = 0.0;
  std::size_t trial = 0;
  double accuracy = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  double wall_time_s = 0.0;
  bool converged = false;
  bool reflected = false;
  /// "ok", or the error message when the engine failed on this trial.
  std::string status = "ok";
};

/// Instance seed for one grid cell; independent of the engine list and of
/// thread scheduling.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t m, std::size_t eps_index,
                         std::size_t trial);

/// Rows ordered by (m, eps, trial, engine order in the spec).
std::vector<BenchmarkRow> run_benchmark(const BenchmarkSpec& spec);

/// Header plus one RFC 4180 row per result. Timing values are written only
/// when `include_timing` is set, so default output is byte-reproducible.
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows,
                         bool include_timing = false);

struct SummaryCell {
  std::string engine;
  std::size_t m = 0;
  double eps = 0.0;
  std::size_t count = 0;
  double mean_accuracy = 0.0;
  /// Sample standard deviation over sqrt(count); 0 for a single trial.
  double se_accuracy = 0.0;
  double mean_residual = 0.0;
  double mean_iterations = 0.0;
  double converged_fraction = 0.0;
  double mean_wall_time_s = 0.0;
};

/// Mean and standard error per (engine, m, eps), skipping failed rows.
std::vector<SummaryCell> summarize(const std::vector<BenchmarkRow>& rows);

void write_summary_csv(std::ostream& out, const std::vector<SummaryCell>& cells,
                       bool include_timing = false);

/// Landmark-sequence benchmark over a directory of per-frame point files.
struct SequenceSpec {
  std::filesystem::path frames_dir;
  std::size_t baseline_gap = 0;
  std::vector<std::size_t> t_sizes = {15, 20, 25, 30};
  Engine engine = Engine::bp;
  double sigma = kPixelSigma;
  double dynamic_range = kDefaultDynamicRange;
  std::optional<ConvergenceConfig> convergence;
};

struct SequenceRow {
  std::size_t frame_a = 0;
  std::size_t frame_b = 0;
  std::size_t t_size = 0;
  double accuracy = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string status = "ok";
};

/// Frame files are `*.csv` or `*.json` whose stem ends in the frame number.
/// Pairs run from the first frame to the last frame minus the gap; a missing
/// frame yields one warning row per template size instead of results.
std::vector<SequenceRow> run_sequence(const SequenceSpec& spec);

void write_sequence_csv(std::ostream& out, const std::vector<SequenceRow>& rows);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& value);

}  // namespace rigidmatch
