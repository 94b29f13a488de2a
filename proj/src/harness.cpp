#include "rigidmatch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <optional>
#include <ostream>
#include <thread>

#include "rigidmatch/errors.hpp"
#include "rigidmatch/point_io.hpp"

namespace rigidmatch {

void BenchmarkSpec::validate() const {
  if (trials < 1) throw Error(ErrorCode::invalid_parameters, "trials must be >= 1");
  if (n < 3) throw Error(ErrorCode::invalid_parameters, "benchmark n must be >= 3");
  if (m_values.empty() || eps_values.empty() || engines.empty()) {
    throw Error(ErrorCode::invalid_parameters, "benchmark needs m values, eps values and engines");
  }
  for (std::size_t m : m_values) {
    if (m < n) throw Error(ErrorCode::invalid_parameters, "every m must be >= n");
  }
  for (double e : eps_values) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw Error(ErrorCode::invalid_parameters, "eps must be >= 0");
  }
  PotentialParams p;
  p.sigma = sigma;
  p.dynamic_range = dynamic_range;
  p.validate();
  for (std::size_t m : m_values) convergence_for(m).validate();
}

ConvergenceConfig BenchmarkSpec::convergence_for(std::size_t m) const {
  ConvergenceConfig cfg = ConvergenceConfig::for_scene_size(m);
  if (const auto it = cutoffs.find(m); it != cutoffs.end()) cfg.mse_cutoff = it->second;
  cfg.min_iterations = min_iterations;
  cfg.max_iterations = max_iterations;
  return cfg;
}

BenchmarkSpec BenchmarkSpec::from_json(const nlohmann::json& doc) {
  BenchmarkSpec spec;
  try {
    if (doc.contains("n")) spec.n = doc["n"].get<std::size_t>();
    if (doc.contains("m_values")) spec.m_values = doc["m_values"].get<std::vector<std::size_t>>();
    if (doc.contains("eps_values")) spec.eps_values = doc["eps_values"].get<std::vector<double>>();
    if (doc.contains("trials")) spec.trials = doc["trials"].get<std::size_t>();
    if (doc.contains("engines")) {
      spec.engines.clear();
      for (const auto& e : doc["engines"]) spec.engines.push_back(engine_from_string(e.get<std::string>()));
    }
    if (doc.contains("mode")) spec.mode = potential_mode_from_string(doc["mode"].get<std::string>());
    if (doc.contains("sigma")) spec.sigma = doc["sigma"].get<double>();
    if (doc.contains("dynamic_range")) spec.dynamic_range = doc["dynamic_range"].get<double>();
    if (doc.contains("cutoffs")) {
      for (const auto& [key, value] : doc["cutoffs"].items()) {
        spec.cutoffs[std::stoul(key)] = value.get<double>();
      }
    }
    if (doc.contains("min_iterations")) spec.min_iterations = doc["min_iterations"].get<std::size_t>();
    if (doc.contains("max_iterations")) spec.max_iterations = doc["max_iterations"].get<std::size_t>();
    if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("threads")) spec.threads = doc["threads"].get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_input, std::string("malformed benchmark spec: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::invalid_input, "benchmark spec cutoff keys must be scene sizes");
  }
  return spec;
}

nlohmann::json BenchmarkSpec::to_json() const {
  nlohmann::json engines_json = nlohmann::json::array();
  for (Engine e : engines) engines_json.push_back(to_string(e));
  nlohmann::json cut = nlohmann::json::object();
  for (const auto& [m, c] : cutoffs) cut[std::to_string(m)] = c;
  return {{"schema_version", kBenchmarkSchemaVersion},
          {"n", n},
          {"m_values", m_values},
          {"eps_values", eps_values},
          {"trials", trials},
          {"engines", engines_json},
          {"mode", to_string(mode)},
          {"sigma", sigma},
          {"dynamic_range", dynamic_range},
          {"cutoffs", cut},
          {"min_iterations", min_iterations},
          {"max_iterations", max_iterations},
          {"seed", seed}};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::size_t worker_count(std::size_t requested, std::size_t tasks) {
  std::size_t w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(w, tasks));
}

// Runs fn(i) for i in [0, count) on a pool of `workers` threads.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(drain);
  drain();
  for (std::thread& t : pool) t.join();
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::size_t m, std::size_t eps_index,
                         std::size_t trial) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(m));
  h = splitmix64(h ^ static_cast<std::uint64_t>(eps_index));
  return splitmix64(h ^ static_cast<std::uint64_t>(trial));
}

std::vector<BenchmarkRow> run_benchmark(const BenchmarkSpec& spec) {
  spec.validate();
  struct Task {
    std::size_t m;
    std::size_t eps_index;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (std::size_t m : spec.m_values) {
    for (std::size_t e = 0; e < spec.eps_values.size(); ++e) {
      for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back({m, e, t});
    }
  }

  const std::size_t per_task = spec.engines.size();
  std::vector<BenchmarkRow> rows(tasks.size() * per_task);
  parallel_for(tasks.size(), worker_count(spec.threads, tasks.size()), [&](std::size_t i) {
    const Task& task = tasks[i];
    const double eps = spec.eps_values[task.eps_index];
    const Instance inst =
        generate_instance(spec.n, task.m, eps, trial_seed(spec.seed, task.m, task.eps_index, task.trial));
    for (std::size_t k = 0; k < per_task; ++k) {
      BenchmarkRow& row = rows[i * per_task + k];
      row.engine = to_string(spec.engines[k]);
      row.n = spec.n;
      row.m = task.m;
      row.eps = eps;
      row.trial = task.trial;
      row.reflected = inst.transform.reflect;

      MatchOptions opts;
      opts.engine = spec.engines[k];
      opts.potentials.mode = spec.mode;
      opts.potentials.sigma = spec.sigma;
      opts.potentials.dynamic_range = spec.dynamic_range;
      opts.convergence = spec.convergence_for(task.m);
      try {
        const MatchResult r = match(inst.tmpl, inst.scene, opts);
        row.accuracy = matching_accuracy(r.assignment, inst.truth);
        row.residual = r.residual;
        row.iterations = r.iterations;
        row.wall_time_s = r.wall_time_s;
        row.converged = r.converged;
      } catch (const Error& e) {
        row.status = std::string(to_string(e.code())) + ": " + e.what();
      } catch (const std::bad_alloc&) {
        row.status = "resource exhausted: out of memory";
      }
    }
  });
  return rows;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows,
                         bool include_timing) {
  out << "schema_version,engine,n,m,eps,trial,accuracy,residual,iterations,wall_time_s,"
         "converged,reflected,status\r\n";
  for (const BenchmarkRow& r : rows) {
    out << kBenchmarkSchemaVersion << ',' << csv_field(r.engine) << ',' << r.n << ',' << r.m << ','
        << format_real(r.eps) << ',' << r.trial << ',' << format_real(r.accuracy) << ','
        << format_real(r.residual) << ',' << r.iterations << ','
        << (include_timing ? format_real(r.wall_time_s) : std::string()) << ','
        << (r.converged ? 1 : 0) << ',' << (r.reflected ? 1 : 0) << ',' << csv_field(r.status)
        << "\r\n";
  }
}

std::vector<SummaryCell> summarize(const std::vector<BenchmarkRow>& rows) {
  std::vector<SummaryCell> cells;
  std::vector<std::vector<double>> accuracies;
  for (const BenchmarkRow& r : rows) {
    if (r.status != "ok") continue;
    auto it = std::find_if(cells.begin(), cells.end(), [&](const SummaryCell& c) {
      return c.engine == r.engine && c.m == r.m && c.eps == r.eps;
    });
    if (it == cells.end()) {
      cells.push_back({r.engine, r.m, r.eps});
      accuracies.emplace_back();
      it = cells.end() - 1;
    }
    SummaryCell& c = *it;
    ++c.count;
    c.mean_accuracy += r.accuracy;
    c.mean_residual += r.residual;
    c.mean_iterations += static_cast<double>(r.iterations);
    c.converged_fraction += r.converged ? 1.0 : 0.0;
    c.mean_wall_time_s += r.wall_time_s;
    accuracies[static_cast<std::size_t>(it - cells.begin())].push_back(r.accuracy);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    SummaryCell& c = cells[i];
    const double k = static_cast<double>(c.count);
    c.mean_accuracy /= k;
    c.mean_residual /= k;
    c.mean_iterations /= k;
    c.converged_fraction /= k;
    c.mean_wall_time_s /= k;
    if (c.count > 1) {
      double ss = 0.0;
      for (double a : accuracies[i]) ss += (a - c.mean_accuracy) * (a - c.mean_accuracy);
      c.se_accuracy = std::sqrt(ss / (k - 1.0)) / std::sqrt(k);
    }
  }
  return cells;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryCell>& cells,
                       bool include_timing) {
  out << "schema_version,engine,m,eps,count,mean_accuracy,se_accuracy,mean_residual,"
         "mean_iterations,converged_fraction,mean_wall_time_s\r\n";
  for (const SummaryCell& c : cells) {
    out << kBenchmarkSchemaVersion << ',' << csv_field(c.engine) << ',' << c.m << ','
        << format_real(c.eps) << ',' << c.count << ',' << format_real(c.mean_accuracy) << ','
        << format_real(c.se_accuracy) << ',' << format_real(c.mean_residual) << ','
        << format_real(c.mean_iterations) << ',' << format_real(c.converged_fraction) << ','
        << (include_timing ? format_real(c.mean_wall_time_s) : std::string()) << "\r\n";
  }
}

namespace {

// Trailing decimal digits of a file stem, e.g. "frame_012" -> 12.
std::optional<std::size_t> frame_number(const std::filesystem::path& p) {
  const std::string stem = p.stem().string();
  std::size_t end = stem.size();
  std::size_t begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
  if (begin == end) return std::nullopt;
  return static_cast<std::size_t>(std::stoull(stem.substr(begin)));
}

}  // namespace

std::vector<SequenceRow> run_sequence(const SequenceSpec& spec) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(spec.frames_dir)) {
    throw Error(ErrorCode::invalid_input, "frames directory " + spec.frames_dir.string() + " not found");
  }
  if (spec.t_sizes.empty()) throw Error(ErrorCode::invalid_parameters, "no template sizes given");

  std::map<std::size_t, fs::path> frames;
  for (const auto& entry : fs::directory_iterator(spec.frames_dir)) {
    const auto ext = entry.path().extension();
    if (!entry.is_regular_file() || (ext != ".csv" && ext != ".json")) continue;
    if (const auto num = frame_number(entry.path())) frames[*num] = entry.path();
  }
  if (frames.empty()) throw Error(ErrorCode::invalid_input, "no frame files in " + spec.frames_dir.string());

  const std::size_t first = frames.begin()->first;
  const std::size_t last = frames.rbegin()->first;
  std::vector<SequenceRow> rows;
  for (std::size_t a = first; a + spec.baseline_gap <= last; ++a) {
    const std::size_t b = a + spec.baseline_gap;
    auto warn = [&](const std::string& message) {
      for (std::size_t t : spec.t_sizes) {
        SequenceRow row;
        row.frame_a = a;
        row.frame_b = b;
        row.t_size = t;
        row.status = message;
        rows.push_back(row);
      }
    };
    if (!frames.contains(a) || !frames.contains(b)) {
      warn("missing frame " + std::to_string(frames.contains(a) ? b : a));
      continue;
    }
    std::optional<PointPattern> fa;
    std::optional<PointPattern> fb;
    try {
      fa = read_points(frames[a]);
      fb = read_points(frames[b]);
    } catch (const Error& e) {
      warn(e.what());
      continue;
    }
    for (std::size_t t : spec.t_sizes) {
      SequenceRow row;
      row.frame_a = a;
      row.frame_b = b;
      row.t_size = t;
      try {
        if (t > fa->size() || fb->size() < fa->size()) {
          throw Error(ErrorCode::invalid_parameters,
                      "template size " + std::to_string(t) + " exceeds the landmarks available");
        }
        MatchOptions opts;
        opts.engine = spec.engine;
        opts.potentials.sigma = spec.sigma;
        opts.potentials.dynamic_range = spec.dynamic_range;
        opts.convergence = spec.convergence;
        const MatchResult r = match(fa->prefix(t), *fb, opts);
        std::size_t correct = 0;
        for (std::size_t k = 0; k < t; ++k) correct += r.assignment[k] == k ? 1 : 0;
        row.accuracy = static_cast<double>(correct) / static_cast<double>(t);
        row.iterations = r.iterations;
        row.converged = r.converged;
      } catch (const Error& e) {
        row.status = e.what();
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_sequence_csv(std::ostream& out, const std::vector<SequenceRow>& rows) {
  out << "schema_version,frame_a,frame_b,t_size,accuracy,iterations,converged,status\r\n";
  for (const SequenceRow& r : rows) {
    out << kBenchmarkSchemaVersion << ',' << r.frame_a << ',' << r.frame_b << ',' << r.t_size << ','
        << format_real(r.accuracy) << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << csv_field(r.status) << "\r\n";
  }
}

}  // namespace rigidmatch
