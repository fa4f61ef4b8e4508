#include "anosov/report.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace anosov;

namespace {

Representation rep_from(const std::string& recipe_json) {
  return Representation::from_recipe(recipe_from_json(Json::parse(recipe_json)));
}

std::string alpha_json(const std::string& recipe, int m, int radius, double tol) {
  const AlphaEstimate a = alpha_m_estimate(rep_from(recipe), m, radius, tol);
  Json per_radius = Json::array();
  for (double v : a.per_radius) per_radius.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
  return Json{{"m", a.m},
              {"value", std::isfinite(a.value) ? Json(a.value) : Json(nullptr)},
              {"per_radius", per_radius},
              {"witness", a.witness_word},
              {"converged", a.converged},
              {"qualifying", a.qualifying}}
      .dump();
}

std::string gap_json(const std::string& recipe, int k, int radius) {
  const GapProfile gp = gap_profile(rep_from(recipe), k, radius);
  Json lengths = Json::array();
  for (const auto& e : gp.per_length) {
    lengths.push_back({{"length", e.length}, {"min", e.min}, {"max", e.max}, {"count", e.count}});
  }
  return Json{{"k", gp.k},
              {"slope", gp.fit.slope},
              {"intercept", gp.fit.intercept},
              {"r2", gp.fit.r2},
              {"linear_growth", gp.linear_growth},
              {"verdict", gp.verdict},
              {"per_length", lengths}}
      .dump();
}

std::pair<std::vector<std::string>, Matrix> limit_points(const std::string& recipe, int m, int radius) {
  const LimitCloud cloud = limit_samples(rep_from(recipe), m, radius);
  std::vector<std::string> words;
  Matrix points(static_cast<Eigen::Index>(cloud.samples.size()), cloud.dim);
  for (std::size_t i = 0; i < cloud.samples.size(); ++i) {
    words.push_back(cloud.samples[i].word);
    points.row(static_cast<Eigen::Index>(i)) = cloud.samples[i].xi1_plus.frame().col(0).transpose();
  }
  return {words, points};
}

std::pair<int, std::string> run_config(const std::string& path, std::optional<int> radius,
                                       std::optional<std::string> out, std::optional<std::uint64_t> seed) {
  ExperimentConfig config = load_config(path);
  apply_overrides(config, RunOverrides{radius, out, seed});
  const RunResult result = run_experiment(config);
  return {result.exit_code, result.summary.dump()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the anosov-lab core";
  m.attr("__version__") = tool_version();

  // Translators are tried newest first.
  py::register_exception<Error>(m, "AnosovError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("tau_d", py::overload_cast<const Matrix&, int>(&tau_d), py::arg("g"), py::arg("d"));
  m.def("wedge_power", py::overload_cast<const Matrix&, int>(&wedge_power), py::arg("m"), py::arg("k"));
  m.def("sym_square", py::overload_cast<const Matrix&>(&sym_square), py::arg("m"));
  m.def("build_su21_rep", &build_su21_rep, py::arg("g"));
  m.def("eigen_moduli", py::overload_cast<const Matrix&>(&eigen_moduli), py::arg("m"));
  m.def("singular_values", py::overload_cast<const Matrix&>(&singular_values), py::arg("m"));
  m.def("hilbert_distance_psd", &hilbert_distance_psd, py::arg("x"), py::arg("y"));

  m.def("_parse_config", [](const std::string& text, const std::string& source) {
    return config_to_json(parse_config(text, source)).dump();
  }, py::arg("text"), py::arg("source") = "config");
  m.def("_config_hash", [](const std::string& text) { return config_hash(parse_config(text)); },
        py::arg("text"));
  m.def("_alpha", &alpha_json, py::arg("recipe"), py::arg("m"), py::arg("radius"),
        py::arg("tol") = kDefaultAlphaTol, py::call_guard<py::gil_scoped_release>());
  m.def("_gap_profile", &gap_json, py::arg("recipe"), py::arg("k"), py::arg("radius"),
        py::call_guard<py::gil_scoped_release>());
  m.def("_limit_points", &limit_points, py::arg("recipe"), py::arg("m"), py::arg("radius"),
        py::call_guard<py::gil_scoped_release>());
  m.def("_run", &run_config, py::arg("path"), py::arg("radius") = py::none(), py::arg("out") = py::none(),
        py::arg("seed") = py::none(), py::call_guard<py::gil_scoped_release>());
  m.def("examples", [] {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& e : example_catalog()) out.emplace_back(e.name, e.description, e.path.string());
    return out;
  });
}
