#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>

#include "islandap/analysis.hpp"
#include "islandap/classification.hpp"
#include "islandap/error.hpp"
#include "islandap/tracer.hpp"

namespace py = pybind11;
using namespace islandap;

namespace {

TraceMethod parse_method(const std::string& m) {
  if (m == "one") return TraceMethod::One;
  if (m == "two") return TraceMethod::Two;
  throw Error(ErrorKind::InvalidConfig, "method must be 'one' or 'two', got '" + m + "'");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "ap") return Scheme::AsymptoticPreserving;
  if (s == "baseline") return Scheme::Baseline;
  throw Error(ErrorKind::InvalidConfig, "scheme must be 'ap' or 'baseline', got '" + s + "'");
}

StudyOptions make_options(const std::string& scheme, const std::string& method,
                          double step_factor) {
  StudyOptions o;
  o.scheme = parse_scheme(scheme);
  o.tracer.cut_method = parse_method(method);
  o.tracer.step_factor = step_factor;
  return o;
}

py::array_t<double> as_grid_array(const std::vector<double>& v, const Grid& g) {
  py::array_t<double> out({g.ny(), g.nx()});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict trace(const ProblemSpec& spec, double eps, int I, int J, std::pair<double, double> start,
               const std::string& method, double step_factor) {
  const ProblemCase pc = spec.make(eps);
  const Grid g = build_grid(pc.half_width, pc.half_height, I, J);
  const double h = std::min(g.hx(), g.hy());
  const Vec2 s{start.first, start.second};
  const TraceMethod m = parse_method(method);
  const FieldLine line = m == TraceMethod::One
                             ? trace_method_one(s, pc.field, step_factor * h, h, g)
                             : trace_method_two(s, pc.field, step_factor * h, h, g);
  py::array_t<double> pts({static_cast<py::ssize_t>(line.points.size()), py::ssize_t{2}});
  auto w = pts.mutable_unchecked<2>();
  for (std::size_t k = 0; k < line.points.size(); ++k) {
    w(k, 0) = line.points[k].x;
    w(k, 1) = line.points[k].y;
  }
  py::dict d;
  d["points"] = pts;
  d["closed"] = line.kind == LineKind::Closed;
  d["length"] = line_length(line);
  return d;
}

py::dict solve_case(const ProblemSpec& spec, double eps, int I, int J, const std::string& scheme,
                    const std::string& method, double step_factor) {
  const ProblemCase pc = spec.make(eps);
  const Grid g = build_grid(pc.half_width, pc.half_height, I, J);
  const StudyOptions opts = make_options(scheme, method, step_factor);
  NodeClassification cls;
  if (opts.scheme == Scheme::AsymptoticPreserving) {
    py::gil_scoped_release release;
    cls = classify_nodes(g, pc, opts.tracer);
  } else {
    cls.tags.assign(g.node_count(), NodeTag::OpenInterior);
    for (std::size_t k = 0; k < g.node_count(); ++k)
      if (g.is_boundary(g.node(k))) cls.tags[k] = NodeTag::Boundary;
  }
  CaseResult res;
  {
    py::gil_scoped_release release;
    res = run_case(g, pc, cls, opts);
  }
  std::vector<double> x(g.node_count());
  std::vector<double> y(g.node_count());
  std::vector<double> tags(g.node_count());
  std::vector<double> exact(g.node_count());
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const Vec2 p = g.point(g.node(k));
    x[k] = p.x;
    y[k] = p.y;
    tags[k] = static_cast<double>(cls.tags[k]);
    if (pc.has_exact()) exact[k] = pc.exact(p);
  }
  py::dict d;
  d["x"] = as_grid_array(x, g);
  d["y"] = as_grid_array(y, g);
  d["u"] = as_grid_array(res.solve.solution, g);
  d["tag"] = as_grid_array(tags, g).attr("astype")("int8");
  if (pc.has_exact()) d["exact"] = as_grid_array(exact, g);
  if (res.errors) {
    d["l2"] = res.errors->l2;
    d["linf"] = res.errors->linf;
  }
  d["residual"] = res.solve.residual_norm;
  d["backward_error"] = res.solve.backward_error;
  d["constraint_rows"] = res.system.count(RowKind::Constraint);
  return d;
}

std::string convergence_csv(const ProblemSpec& spec, const std::vector<double>& eps,
                            const std::vector<std::pair<int, int>>& grids,
                            const std::string& scheme, const std::string& method,
                            double step_factor, bool condition) {
  std::vector<GridSize> sizes;
  for (const auto& [I, J] : grids) sizes.push_back({I, J});
  StudyOptions opts = make_options(scheme, method, step_factor);
  opts.condition = condition;
  ConvergenceReport report;
  {
    py::gil_scoped_release release;
    report = run_study(spec, eps, sizes, opts);
  }
  std::ostringstream os;
  write_csv(report, os);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Asymptotic-preserving anisotropic diffusion with closed field lines";

  py::register_exception<Error>(m, "IslandapError", PyExc_RuntimeError);

  py::class_<ProblemSpec>(m, "ProblemSpec")
      .def_property_readonly("name", &ProblemSpec::name)
      .def_readonly("gamma1", &ProblemSpec::gamma1)
      .def_readonly("gamma2", &ProblemSpec::gamma2)
      .def_readonly("phi", &ProblemSpec::phi)
      .def_readonly("lambda_", &ProblemSpec::lambda)
      .def_readonly("alpha", &ProblemSpec::alpha)
      .def("__repr__", [](const ProblemSpec& s) { return "<ProblemSpec " + s.name() + ">"; });

  m.def(
      "example1",
      [](double gamma1, double gamma2, double phi, double alpha) {
        ProblemSpec s;
        s.kind = ProblemSpec::Kind::Example1;
        s.gamma1 = gamma1;
        s.gamma2 = gamma2;
        s.phi = phi;
        s.alpha = alpha;
        s.make(1.0);
        return s;
      },
      py::arg("gamma1") = 0.5, py::arg("gamma2") = 0.5, py::arg("phi") = 0.0,
      py::arg("alpha") = 1.0, "Single island with elliptic level sets on (-0.5, 0.5)^2.");
  m.def(
      "example2",
      [](double lambda, double alpha) {
        ProblemSpec s;
        s.kind = ProblemSpec::Kind::Example2;
        s.lambda = lambda;
        s.alpha = alpha;
        s.make(1.0);
        return s;
      },
      py::arg("lambda_") = 0.1, py::arg("alpha") = 1.0,
      "Two islands on (-1, 1) x (-0.5, 0.5).");

  m.def("grid_spacing", [](double a, double b, int I, int J) {
    const Grid g = build_grid(a, b, I, J);
    return std::pair{g.hx(), g.hy()};
  });

  m.def("trace", &trace, py::arg("problem"), py::arg("eps"), py::arg("I"), py::arg("J"),
        py::arg("start"), py::arg("method") = "two", py::arg("step_factor") = 0.25,
        "Traces the field line through `start`; returns points, closed and length.");
  m.def("solve", &solve_case, py::arg("problem"), py::arg("eps"), py::arg("I"), py::arg("J"),
        py::arg("scheme") = "ap", py::arg("method") = "two", py::arg("step_factor") = 0.25,
        "Solves one case; nodal arrays have shape (2J+1, 2I+1).");
  m.def("convergence_csv", &convergence_csv, py::arg("problem"), py::arg("eps"),
        py::arg("grids"), py::arg("scheme") = "ap", py::arg("method") = "two",
        py::arg("step_factor") = 0.25, py::arg("condition") = false,
        "Runs the eps x grid study and returns the CSV table.");
}
