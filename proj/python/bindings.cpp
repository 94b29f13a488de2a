#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rigidmatch/errors.hpp"
#include "rigidmatch/harness.hpp"
#include "rigidmatch/oracle.hpp"

namespace py = pybind11;
using namespace rigidmatch;

namespace {

using PointArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointPattern to_pattern(const PointArray& arr) {
  if (arr.ndim() != 2 || arr.shape(1) != 2) {
    throw Error(ErrorCode::invalid_input, "points must be an (k, 2) array");
  }
  const auto r = arr.unchecked<2>();
  std::vector<Point> pts(static_cast<std::size_t>(arr.shape(0)));
  for (py::ssize_t i = 0; i < arr.shape(0); ++i) pts[static_cast<std::size_t>(i)] = {r(i, 0), r(i, 1)};
  return PointPattern(std::move(pts));
}

py::array_t<double> to_array(const PointPattern& p) {
  py::array_t<double> out({static_cast<py::ssize_t>(p.size()), py::ssize_t{2}});
  auto w = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < p.size(); ++i) {
    w(static_cast<py::ssize_t>(i), 0) = p[i].x;
    w(static_cast<py::ssize_t>(i), 1) = p[i].y;
  }
  return out;
}

// nlohmann::json -> Python objects via the json module keeps the binding small.
py::object to_python(const nlohmann::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

std::vector<std::pair<std::size_t, std::size_t>> edge_list(const MatchGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
  return out;
}

}  // namespace

PYBIND11_MODULE(_rigidmatch, mod) {
  mod.doc() = "Near-isometric point pattern matching by max-product belief propagation";

  static py::exception<Error> error(mod, "RigidmatchError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  mod.def("distance_matrix", [](const PointArray& pts) {
    const auto d = distance_matrix(to_pattern(pts));
    py::array_t<double> out({static_cast<py::ssize_t>(d.dim()), static_cast<py::ssize_t>(d.dim())});
    std::copy(d.entries().begin(), d.entries().end(), out.mutable_data());
    return out;
  }, py::arg("points"));

  mod.def("objective_residual", [](const PointArray& t, const PointArray& s, std::vector<std::size_t> a) {
    return objective_residual(to_pattern(t), to_pattern(s), Assignment{std::move(a)});
  }, py::arg("template"), py::arg("scene"), py::arg("assignment"));

  mod.def("generate_instance", [](std::size_t n, std::size_t m, double eps, std::uint64_t seed) {
    const Instance inst = generate_instance(n, m, eps, seed);
    py::dict d;
    d["template"] = to_array(inst.tmpl);
    d["scene"] = to_array(inst.scene);
    d["truth"] = inst.truth.map;
    d["angle"] = inst.transform.angle;
    d["translation"] = py::make_tuple(inst.transform.translation.x, inst.transform.translation.y);
    d["reflect"] = inst.transform.reflect;
    return d;
  }, py::arg("n"), py::arg("m"), py::arg("eps") = 0.0, py::arg("seed") = 0);

  mod.def("match",
          [](const PointArray& t, const PointArray& s, const std::string& engine, const std::string& mode,
             std::optional<double> sigma, double dynamic_range, const std::string& clamp,
             std::optional<double> mse_cutoff, std::size_t min_iterations, std::size_t max_iterations,
             const std::string& schedule, std::uint64_t seed, bool trace) {
            const PointPattern scene = to_pattern(s);
            MatchOptions opt;
            opt.engine = engine_from_string(engine);
            opt.potentials.mode = potential_mode_from_string(mode);
            opt.potentials.sigma = sigma.value_or(kSyntheticSigma);
            opt.potentials.dynamic_range = dynamic_range;
            opt.potentials.clamp = clamp_mode_from_string(clamp);
            ConvergenceConfig cfg = ConvergenceConfig::for_scene_size(scene.size());
            if (mse_cutoff) cfg.mse_cutoff = *mse_cutoff;
            cfg.min_iterations = min_iterations;
            cfg.max_iterations = max_iterations;
            opt.convergence = cfg;
            if (schedule == "sequential") {
              opt.schedule = Schedule::sequential;
            } else if (schedule != "synchronous") {
              throw Error(ErrorCode::invalid_parameters, "unknown schedule '" + schedule + "'");
            }
            opt.three_tree_seed = seed;
            std::ostringstream trace_text;
            if (trace) opt.trace = &trace_text;
            MatchResult r;
            {
              py::gil_scoped_release release;
              r = match(to_pattern(t), scene, opt);
            }
            py::dict d = to_python(to_json(r, true));
            if (trace) d["trace"] = trace_text.str();
            return d;
          },
          py::arg("template"), py::arg("scene"), py::arg("engine") = "bp", py::arg("mode") = "gaussian",
          py::arg("sigma") = py::none(), py::arg("dynamic_range") = kDefaultDynamicRange,
          py::arg("clamp") = "per_edge", py::arg("mse_cutoff") = py::none(), py::arg("min_iterations") = 5,
          py::arg("max_iterations") = 100, py::arg("schedule") = "synchronous", py::arg("seed") = 0,
          py::arg("trace") = false);

  mod.def("brute_force_objective", [](const PointArray& t, const PointArray& s, bool injective) {
    const auto r = brute_force_objective(to_pattern(t), to_pattern(s),
                                         injective ? MapSpace::injective : MapSpace::all_maps);
    return py::make_tuple(r.assignment.map, r.residual);
  }, py::arg("template"), py::arg("scene"), py::arg("injective") = false);

  mod.def("squared_cycle_edges", [](std::size_t n) { return edge_list(build_squared_cycle(n)); }, py::arg("n"));
  mod.def("three_tree_edges", [](std::size_t n, std::uint64_t seed) { return edge_list(build_three_tree(n, seed)); },
          py::arg("n"), py::arg("seed") = 0);
  mod.def("is_chordal", [](std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<Edge> e;
    for (const auto& [u, v] : edges) e.push_back(Edge::of(u, v));
    return is_chordal(MatchGraph(n, std::move(e), GraphKind::generic));
  }, py::arg("n"), py::arg("edges"));

  mod.def("run_benchmark", [](const py::dict& spec_doc, bool include_timing) {
    const auto text = py::module_::import("json").attr("dumps")(spec_doc).cast<std::string>();
    const BenchmarkSpec spec = BenchmarkSpec::from_json(nlohmann::json::parse(text));
    std::vector<BenchmarkRow> rows;
    {
      py::gil_scoped_release release;
      rows = run_benchmark(spec);
    }
    std::ostringstream csv, summary;
    write_benchmark_csv(csv, rows, include_timing);
    write_summary_csv(summary, summarize(rows), include_timing);
    return py::make_tuple(csv.str(), summary.str());
  }, py::arg("spec"), py::arg("include_timing") = false,
     "Runs a benchmark spec (same keys as the CLI's JSON spec); returns (rows_csv, summary_csv).");
}
