#include "cqblab/acceptance.hpp"
#include "cqblab/flow.hpp"
#include "cqblab/job.hpp"
#include "cqblab/positivity.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cqblab;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }
nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

CurvatureTensor assemble_space(const std::string& family, int rank, const std::vector<int>& phi, const std::string& metric) {
  const CSpace s = build_cspace(build_algebra(parse_family(family), rank), phi);
  const auto c = parse_metric(metric);
  return assemble(s, c ? invariant_metric(s, *c) : kahler_einstein_coefficients(s));
}

}  // namespace

PYBIND11_MODULE(_cqblab, m) {
  m.doc() = "Curvature positivity on Kaehler C-spaces and the Kaehler-Ricci reaction flow";

  py::class_<CurvatureTensor>(m, "Tensor")
      .def(py::init<int>())
      .def_property_readonly("n", &CurvatureTensor::n)
      .def_readonly("frame_labels", &CurvatureTensor::frame_labels)
      .def("__call__", &CurvatureTensor::operator())
      .def("set", &CurvatureTensor::set)
      .def("norm", &CurvatureTensor::norm)
      .def("ricci", [](const CurvatureTensor& r) { return Eigen::MatrixXcd(ricci(r)); })
      .def("scalar", [](const CurvatureTensor& r) { return scalar(r); })
      .def("to_json", [](const CurvatureTensor& r) { return to_py(to_json(r)); })
      .def_static("from_json", [](const py::object& o) { return tensor_from_json(from_py(o)); })
      .def("__add__", &CurvatureTensor::operator+)
      .def("__mul__", &CurvatureTensor::operator*)
      .def("__rmul__", &CurvatureTensor::operator*);

  m.def("assemble", &assemble_space, py::arg("family"), py::arg("rank"), py::arg("phi"), py::arg("metric") = "ke");
  m.def("random_kahler_operator", &random_kahler_operator, py::arg("n"), py::arg("seed"), py::arg("scale") = 1.0);
  m.def("random_tensor_in_c0", &random_tensor_in_c0, py::arg("n"), py::arg("seed"));
  m.def(
      "mostow_siu", [](int n, double b, double c, double e) { return mostow_siu_model({n, b, c, e}); }, py::arg("n"),
      py::arg("b"), py::arg("c"), py::arg("e"));
  m.def("einstein_constant", [](const CurvatureTensor& r) { return einstein_constant(r); });

  m.def("cqb_value", &cqb_value);
  m.def("dcqb_value", &dcqb_value);
  m.def(
      "form_eigenvalues", [](const CurvatureTensor& r, const std::string& kind) { return form_matrix(r, parse_form_kind(kind)).eigenvalues(); },
      py::arg("tensor"), py::arg("kind") = "cqb");
  m.def("q_eigenvalues", [](const CurvatureTensor& r) { return q_operator(r).eigenvalues(); });
  m.def(
      "form_check",
      [](const CurvatureTensor& r, const std::string& kind, double tol) { return to_py(to_json(form_check(r, parse_form_kind(kind), tol))); },
      py::arg("tensor"), py::arg("kind") = "cqb", py::arg("tolerance") = kDefaultTolerance);
  m.def(
      "rank1_check",
      [](const CurvatureTensor& r, const std::string& kind, int starts, std::uint64_t seed) {
        MinimizerOptions opt;
        opt.starts = starts;
        opt.seed = seed;
        return to_py(to_json(rank1_check(r, parse_form_kind(kind), opt)));
      },
      py::arg("tensor"), py::arg("kind") = "cqb", py::arg("starts") = 64, py::arg("seed") = 0);

  m.def("reaction_derivative", &reaction_derivative);
  m.def(
      "integrate",
      [](const CurvatureTensor& r0, double t_max, std::optional<double> dt, std::optional<double> e1) {
        FlowConstants k = FlowConstants::defaults(r0);
        if (e1) {
          k.e1 = *e1;
          k.epsilon = *e1 > 0 ? 1.0 / *e1 : 1.0;
        }
        const Trajectory tr = integrate(r0, k, t_max, dt.value_or(default_step(r0)));
        py::dict out;
        std::vector<double> t, norm, ric;
        std::vector<bool> member;
        for (const auto& s : tr.states) {
          t.push_back(s.t);
          norm.push_back(s.norm);
          ric.push_back(s.min_ricci_eigenvalue);
          member.push_back(s.membership.all());
        }
        out["t"] = t;
        out["norm"] = norm;
        out["min_ricci_eig"] = ric;
        out["in_c"] = member;
        out["final"] = tr.states.back().r;
        out["truncated"] = tr.truncated;
        out["notice"] = tr.notice;
        return out;
      },
      py::arg("tensor"), py::arg("t_max"), py::arg("dt") = py::none(), py::arg("e1") = py::none());

  m.def(
      "run",
      [](const py::dict& config) {
        const JobResult res = run(config_from_json(from_py(config)));
        return py::make_tuple(static_cast<int>(res.code), to_py(res.report), res.csv, res.error);
      },
      py::arg("config"));
  m.def(
      "acceptance",
      [](std::uint64_t seed) {
        AcceptanceOptions opt;
        opt.seed = seed;
        return to_py(to_json(run_acceptance(opt)));
      },
      py::arg("seed") = 0);
}
