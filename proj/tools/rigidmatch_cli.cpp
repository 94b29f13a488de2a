#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rigidmatch/errors.hpp"
#include "rigidmatch/harness.hpp"
#include "rigidmatch/point_io.hpp"

using namespace rigidmatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct ModelFlags {
  std::string engine = "bp";
  std::string mode = "gaussian";
  std::optional<double> sigma;
  double dynamic_range = kDefaultDynamicRange;
  std::string clamp = "per_edge";
  std::optional<double> mse_cutoff;
  std::size_t min_iters = 5;
  std::size_t max_iters = 100;
  std::string schedule = "synchronous";
  std::uint64_t seed = 0;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool with_engine = true) {
  if (with_engine) {
    cmd->add_option("--engine", f.engine, "bp, jt or oracle")
        ->check(CLI::IsMember({"bp", "jt", "oracle"}))
        ->capture_default_str();
  }
  cmd->add_option("--mode", f.mode, "gaussian or delta potentials")
      ->check(CLI::IsMember({"gaussian", "delta"}))
      ->capture_default_str();
  cmd->add_option("--sigma", f.sigma, "Gaussian width");
  cmd->add_option("--dynamic-range", f.dynamic_range, "potential floor is 1/d")->capture_default_str();
  cmd->add_option("--clamp", f.clamp, "per_edge, per_clique or none")
      ->check(CLI::IsMember({"per_edge", "per_clique", "none"}))
      ->capture_default_str();
  cmd->add_option("--mse-cutoff", f.mse_cutoff, "belief MSE convergence cutoff (default by scene size)");
  cmd->add_option("--min-iters", f.min_iters)->capture_default_str();
  cmd->add_option("--max-iters", f.max_iters)->capture_default_str();
  cmd->add_option("--schedule", f.schedule, "synchronous or sequential")
      ->check(CLI::IsMember({"synchronous", "sequential"}))
      ->capture_default_str();
}

ConvergenceConfig convergence_of(const ModelFlags& f, std::size_t m) {
  ConvergenceConfig c = ConvergenceConfig::for_scene_size(m);
  if (f.mse_cutoff) c.mse_cutoff = *f.mse_cutoff;
  c.min_iterations = f.min_iters;
  c.max_iterations = f.max_iters;
  return c;
}

PotentialParams potentials_of(const ModelFlags& f, double default_sigma) {
  PotentialParams p;
  p.mode = potential_mode_from_string(f.mode);
  p.sigma = f.sigma.value_or(default_sigma);
  p.dynamic_range = f.dynamic_range;
  p.clamp = clamp_mode_from_string(f.clamp);
  return p;
}

// Writes to `path`, or standard output when the path is empty or "-".
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_input, "cannot write " + path);
  write(out);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_match(const std::string& tmpl_path, const std::string& scene_path, const ModelFlags& f,
              const std::string& out_path, const std::string& trace_path, bool timing) {
  const PointPattern tmpl = read_points(tmpl_path);
  const PointPattern scene = read_points(scene_path);

  MatchOptions opt;
  opt.engine = engine_from_string(f.engine);
  opt.potentials = potentials_of(f, kSyntheticSigma);
  opt.convergence = convergence_of(f, scene.size());
  opt.schedule = f.schedule == "sequential" ? Schedule::sequential : Schedule::synchronous;
  opt.three_tree_seed = f.seed;

  std::ofstream trace;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw Error(ErrorCode::invalid_input, "cannot write " + trace_path);
    opt.trace = &trace;
  }
  const MatchResult r = match(tmpl, scene, opt);
  if (!r.note.empty()) std::cerr << "warning: " << r.note << '\n';
  emit(out_path, [&](std::ostream& os) { os << to_json(r, timing).dump(2) << '\n'; });
  if (!r.converged) {
    std::cerr << "warning: no convergence after " << r.iterations << " iterations\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_benchmark(BenchmarkSpec spec, const std::string& out_path, std::string summary_path,
                  bool timing) {
  const auto rows = run_benchmark(spec);
  emit(out_path, [&](std::ostream& os) { write_benchmark_csv(os, rows, timing); });
  const auto cells = summarize(rows);
  if (summary_path.empty() && !out_path.empty() && out_path != "-") summary_path = out_path + ".summary.csv";
  if (!summary_path.empty()) {
    emit(summary_path, [&](std::ostream& os) { write_summary_csv(os, cells, timing); });
  }
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.status != "ok";
  std::cerr << "engine      m   256*eps  accuracy (mean +- se)  iterations\n";
  for (const auto& c : cells) {
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %4zu %8.2f   %.3f +- %.3f          %.1f\n", c.engine.c_str(),
                  c.m, c.eps * 256.0, c.mean_accuracy, c.se_accuracy, c.mean_iterations);
    std::cerr << line;
  }
  if (failed) std::cerr << "warning: " << failed << " rows failed, see the status column\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-isometric point pattern matching"};
  app.require_subcommand(1);

  // match
  auto* match_cmd = app.add_subcommand("match", "Match a template file into a scene file; prints JSON");
  std::string tmpl_path, scene_path, out_path, trace_path;
  bool timing = false;
  ModelFlags mflags;
  match_cmd->add_option("template", tmpl_path, "template points (CSV or JSON)")->required();
  match_cmd->add_option("scene", scene_path, "scene points (CSV or JSON)")->required();
  add_model_flags(match_cmd, mflags);
  match_cmd->add_option("--seed", mflags.seed, "3-tree attachment seed for the jt engine");
  match_cmd->add_option("--out", out_path, "write the JSON here instead of standard output");
  match_cmd->add_option("--trace", trace_path, "write per-iteration belief MSE as CSV");
  match_cmd->add_flag("--timing", timing, "include wall-clock time in the output");

  // benchmark
  auto* bench_cmd = app.add_subcommand("benchmark", "Run the synthetic accuracy grid; writes CSV");
  std::string spec_path, m_list, eps_list, engine_list, summary_path, bench_out;
  ModelFlags bflags;
  std::size_t bn = 10, trials = 50, threads = 0;
  std::uint64_t bseed = 0;
  bool btiming = false;
  bench_cmd->add_option("--spec", spec_path, "JSON benchmark spec; flags given explicitly override it");
  bench_cmd->add_option("--n", bn, "template size")->capture_default_str();
  bench_cmd->add_option("--m", m_list, "comma-separated scene sizes (default 10,20,30,40)");
  bench_cmd->add_option("--eps", eps_list, "comma-separated noise levels (default 0..4/256)");
  bench_cmd->add_option("--engines", engine_list, "comma-separated engines (default bp,jt)");
  bench_cmd->add_option("--trials", trials)->capture_default_str();
  bench_cmd->add_option("--threads", threads, "0 uses every core")->capture_default_str();
  bench_cmd->add_option("--seed", bseed)->capture_default_str();
  add_model_flags(bench_cmd, bflags, false);
  bench_cmd->add_option("--out", bench_out, "row CSV path (default standard output)");
  bench_cmd->add_option("--summary", summary_path, "summary CSV path (default <out>.summary.csv)");
  bench_cmd->add_flag("--timing", btiming, "include wall-clock columns");

  // sequence
  auto* seq_cmd = app.add_subcommand("sequence", "Match landmark frames separated by a fixed gap");
  std::string frames_dir, t_list = "15,20,25,30", seq_out;
  std::size_t gap = 0;
  ModelFlags sflags;
  seq_cmd->add_option("frames", frames_dir, "directory of per-frame landmark files")->required();
  seq_cmd->add_option("--gap", gap, "frame baseline")->capture_default_str();
  seq_cmd->add_option("--t-sizes", t_list, "comma-separated template sizes")->capture_default_str();
  add_model_flags(seq_cmd, sflags);
  seq_cmd->add_option("--out", seq_out, "CSV path (default standard output)");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic template/scene pair");
  std::size_t gn = 10, gm = 20;
  double geps = 0.0;
  std::uint64_t gseed = 0;
  std::string gdir = ".";
  gen_cmd->add_option("--n", gn)->capture_default_str();
  gen_cmd->add_option("--m", gm)->capture_default_str();
  gen_cmd->add_option("--eps", geps)->capture_default_str();
  gen_cmd->add_option("--seed", gseed)->capture_default_str();
  gen_cmd->add_option("--out-dir", gdir)->capture_default_str();

  // graph
  auto* graph_cmd = app.add_subcommand("graph", "Print a matching graph as JSON");
  std::size_t graph_n = 10;
  std::string graph_kind = "squared_cycle";
  std::uint64_t graph_seed = 0;
  graph_cmd->add_option("--n", graph_n)->capture_default_str();
  graph_cmd->add_option("--kind", graph_kind)
      ->check(CLI::IsMember({"squared_cycle", "three_tree"}))
      ->capture_default_str();
  graph_cmd->add_option("--seed", graph_seed, "traversal (squared cycle) or attachment (3-tree) seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*match_cmd) return cmd_match(tmpl_path, scene_path, mflags, out_path, trace_path, timing);

    if (*bench_cmd) {
      BenchmarkSpec spec;
      if (!spec_path.empty()) {
        std::ifstream in(spec_path);
        if (!in) throw Error(ErrorCode::invalid_input, "cannot open " + spec_path);
        std::stringstream text;
        text << in.rdbuf();
        nlohmann::json doc;
        try {
          doc = nlohmann::json::parse(text.str());
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorCode::invalid_input, spec_path + ": " + e.what());
        }
        spec = BenchmarkSpec::from_json(doc);
      }
      auto given = [&](const char* flag) { return bench_cmd->count(flag) > 0; };
      if (given("--n")) spec.n = bn;
      if (given("--trials")) spec.trials = trials;
      if (given("--threads")) spec.threads = threads;
      if (given("--seed")) spec.seed = bseed;
      if (given("--m")) {
        spec.m_values.clear();
        for (const auto& s : split_list(m_list)) spec.m_values.push_back(std::stoul(s));
      }
      if (given("--eps")) {
        spec.eps_values.clear();
        for (const auto& s : split_list(eps_list)) spec.eps_values.push_back(std::stod(s));
      }
      if (given("--engines")) {
        spec.engines.clear();
        for (const auto& s : split_list(engine_list)) spec.engines.push_back(engine_from_string(s));
      }
      if (given("--mode")) spec.mode = potential_mode_from_string(bflags.mode);
      if (bflags.sigma) spec.sigma = *bflags.sigma;
      if (given("--dynamic-range")) spec.dynamic_range = bflags.dynamic_range;
      if (given("--min-iters")) spec.min_iterations = bflags.min_iters;
      if (given("--max-iters")) spec.max_iterations = bflags.max_iters;
      if (bflags.mse_cutoff) {
        for (std::size_t m : spec.m_values) spec.cutoffs[m] = *bflags.mse_cutoff;
      }
      return cmd_benchmark(spec, bench_out, summary_path, btiming);
    }

    if (*seq_cmd) {
      SequenceSpec spec;
      spec.frames_dir = frames_dir;
      spec.baseline_gap = gap;
      spec.t_sizes.clear();
      for (const auto& s : split_list(t_list)) spec.t_sizes.push_back(std::stoul(s));
      spec.engine = engine_from_string(sflags.engine);
      spec.sigma = sflags.sigma.value_or(kPixelSigma);
      spec.dynamic_range = sflags.dynamic_range;
      if (sflags.mse_cutoff || seq_cmd->count("--min-iters") || seq_cmd->count("--max-iters")) {
        spec.convergence = convergence_of(sflags, 30);
      }
      const auto rows = run_sequence(spec);
      std::size_t valid = 0;
      for (const auto& r : rows) valid += r.status == "ok";
      std::cerr << rows.size() / spec.t_sizes.size() << " frame pairs, " << valid << " matched rows\n";
      emit(seq_out, [&](std::ostream& os) { write_sequence_csv(os, rows); });
      return kExitOk;
    }

    if (*gen_cmd) {
      const Instance inst = generate_instance(gn, gm, geps, gseed);
      std::filesystem::create_directories(gdir);
      write_points_csv(std::filesystem::path(gdir) / "template.csv", inst.tmpl);
      write_points_csv(std::filesystem::path(gdir) / "scene.csv", inst.scene);
      nlohmann::json truth = {{"schema_version", kResultSchemaVersion},
                              {"truth", inst.truth.map},
                              {"angle", inst.transform.angle},
                              {"translation", {inst.transform.translation.x, inst.transform.translation.y}},
                              {"reflect", inst.transform.reflect}};
      std::ofstream(std::filesystem::path(gdir) / "truth.json") << truth.dump(2) << '\n';
      return kExitOk;
    }

    if (*graph_cmd) {
      const MatchGraph g = graph_kind == "three_tree"
                               ? build_three_tree(graph_n, graph_seed)
                               : (graph_cmd->count("--seed") ? build_squared_cycle(seeded_cycle_order(graph_n, graph_seed))
                                                             : build_squared_cycle(graph_n));
      std::cout << to_json(g).dump(2) << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
