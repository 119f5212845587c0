#include <pybind11/iostream.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "run.hpp"

namespace py = pybind11;
using namespace lightcone;

namespace {

struct PySurface {
  cli::RunConfig config;
  GraphHypersurface S;
};

PySurface make_surface(const std::string& f, int n, const py::object& metric, const std::string& phi,
                       std::optional<std::vector<double>> lower, std::optional<std::vector<double>> upper) {
  cli::RunConfig c;
  c.n = n;
  c.f = f;
  c.phi = phi;
  if (!metric.is_none()) {
    if (py::isinstance<py::str>(metric)) {
      if (metric.cast<std::string>() != "minkowski") throw std::invalid_argument("metric must be 'minkowski' or a list");
    } else {
      c.metric = metric.cast<std::vector<std::string>>();
    }
  }
  c.domain = Box::cube(n, 1.0);
  if (lower) c.domain.lower = *lower;
  if (upper) c.domain.upper = *upper;
  c.grid.assign(static_cast<std::size_t>(n), 21);
  c.base_point.assign(static_cast<std::size_t>(n + 1), 0.0);
  return PySurface{c, cli::build_surface(c)};
}

py::dict profile_dict(const AxisProfile& p) {
  py::dict d;
  d["y"] = p.y;
  d["a"] = p.a;
  d["da"] = p.da;
  d["dda"] = p.dda;
  d["b"] = p.b;
  d["db"] = p.db;
  d["ddb"] = p.ddb;
  d["c2"] = p.c2;
  d["c3"] = p.c3;
  d["dc2"] = p.dc2;
  d["phi"] = p.phi;
  d["dphi"] = p.dphi;
  return d;
}

OdeState state_from(double y, double a, double da, std::vector<double> b, std::vector<double> db) {
  OdeState s;
  s.y = y;
  s.a = a;
  s.da = da;
  s.b = std::move(b);
  s.db = std::move(db);
  return s;
}

}  // namespace

PYBIND11_MODULE(_lightcone, m) {
  m.doc() = "Light-like points of graph hypersurfaces in Lorentzian space";

  auto base = py::register_exception<Error>(m, "LightconeError", PyExc_RuntimeError);
  py::register_exception<SyntaxError>(m, "SyntaxError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SingularC>(m, "SingularC", base.ptr());
  py::register_exception<NotLightLike>(m, "NotLightLike", base.ptr());
  py::register_exception<ReGraphFailure>(m, "ReGraphFailure", base.ptr());
  py::register_exception<DegenerateMetric>(m, "DegenerateMetric", base.ptr());
  py::register_exception<WrongSignature>(m, "WrongSignature", base.ptr());

  m.def(
      "jet",
      [](const std::string& text, const std::vector<double>& x, int order) {
        const Expression e = Expression::parse(text, static_cast<int>(x.size()));
        const Jet3 j = eval_jet3(e, x, order);
        const int n = static_cast<int>(x.size());
        py::dict d;
        d["value"] = j.value();
        if (order >= 1) d["gradient"] = j.gradient();
        if (order >= 2) {
          std::vector<std::vector<double>> h(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) h[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = j.d(a, b);
          d["hessian"] = h;
        }
        if (order >= 3) {
          std::vector<double> t;
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int c = 0; c < n; ++c) t.push_back(j.d(a, b, c));
          d["third"] = t;
        }
        return d;
      },
      py::arg("expression"), py::arg("x"), py::arg("order") = 3,
      "Value and partial derivatives of an expression in x1..xn at x.");

  m.def(
      "describe",
      [](const std::string& text, int arity) { return Expression::parse(text, arity).describe(); },
      py::arg("expression"), py::arg("arity"));

  py::class_<PySurface>(m, "Surface")
      .def(py::init(&make_surface), py::arg("f"), py::arg("n"), py::arg("metric") = py::none(),
           py::arg("phi") = "0", py::arg("lower") = py::none(), py::arg("upper") = py::none())
      .def_property_readonly("n", [](const PySurface& s) { return s.S.n; })
      .def("value", [](const PySurface& s, std::vector<double> x) { return s.S.f->value(x); })
      .def("B", [](const PySurface& s, std::vector<double> x) { return B_value(s.S, x); })
      .def("grad_B", [](const PySurface& s, std::vector<double> x) { return gradient_B(s.S, x); })
      .def("A", [](const PySurface& s, std::vector<double> x) { return operator_A(s.S, x); })
      .def("A_explicit", [](const PySurface& s, std::vector<double> x) { return operator_A_explicit(s.S, x); })
      .def("tilde_A", [](const PySurface& s, std::vector<double> x) { return operator_tildeA(s.S, x); })
      .def(
          "classify",
          [](const PySurface& s, std::vector<double> x, std::optional<double> tol_b, double tol_grad) {
            const PointClass c = classify_point(s.S, x, tol_b, tol_grad);
            return py::make_tuple(class_label(c), c.B, c.grad_norm);
          },
          py::arg("x"), py::arg("tol_b") = py::none(), py::arg("tol_grad") = kDefaultTolGrad)
      .def("lightlike_direction",
           [](const PySurface& s, std::vector<double> x) { return lightlike_direction(s.S, x); })
      .def("decompose", [](const PySurface& s, double y) { return profile_dict(decompose(s.S, y)); })
      .def(
          "normalize",
          [](const PySurface& s, std::vector<double> q, std::optional<std::vector<double>> v, double radius) {
            PySurface out = s;
            cli::NormalizeParams p;
            p.point = q;
            if (v) p.direction = *v;
            p.radius = radius;
            out.config.normalize = p;
            out.S = normalize_graph(s.S, q, v ? *v : lightlike_direction(s.S, q), radius);
            return out;
          },
          py::arg("q"), py::arg("v") = py::none(), py::arg("radius") = 0.25)
      .def(
          "residual_scan",
          [](const PySurface& s, int nodes) {
            const Grid grid = Grid::uniform(s.S.domain, nodes);
            return cli::dump_json(cli::residual_report(s.config, grid, zmc_residual_scan(s.S, grid)));
          },
          py::arg("nodes") = 21, "residual.json report as a string")
      .def(
          "integrate_ode",
          [](const PySurface& s, double y0, double y1, int steps, double a, double da, std::vector<double> b,
             std::vector<double> db) {
            const std::size_t k = static_cast<std::size_t>(s.S.n - 1);
            if (b.empty()) b.assign(k, 0.0);
            if (db.empty()) db.assign(k, 0.0);
            const OdeTrajectory tr = integrate_reduced_ode(s.S, y0, y1, steps, state_from(y0, a, da, b, db));
            py::list out;
            for (const OdeState& st : tr.states) out.append(py::make_tuple(st.y, st.a, st.da, st.b, st.db));
            return out;
          },
          py::arg("y0"), py::arg("y1"), py::arg("steps"), py::arg("a") = 0.0, py::arg("da") = 1.0,
          py::arg("b") = std::vector<double>{}, py::arg("db") = std::vector<double>{})
      .def(
          "lipschitz",
          [](const PySurface& s, double y, std::vector<double> lower, std::vector<double> upper, int samples,
             std::uint64_t seed) {
            StateBox box;
            box.y = y;
            box.lower = std::move(lower);
            box.upper = std::move(upper);
            return estimate_lipschitz(s.S, box, samples, seed);
          },
          py::arg("y"), py::arg("lower"), py::arg("upper"), py::arg("samples") = 200, py::arg("seed") = 1)
      .def(
          "verify",
          [](const PySurface& s, double t0, double t1, int steps, std::uint64_t seed) {
            VerifyOptions o;
            o.t0 = t0;
            o.t1 = t1;
            o.steps = steps;
            o.seed = seed;
            return cli::dump_json(cli::verify_report(s.config, verify_theorem(s.S, o)));
          },
          py::arg("t0") = -1.0, py::arg("t1") = 1.0, py::arg("steps") = 1000, py::arg("seed") = VerifyOptions{}.seed,
          "verify.json report as a string");

  m.def(
      "geodesic",
      [](int n, const py::object& metric, std::vector<double> p, std::vector<double> v, double t0, double t1,
         int steps) {
        const MetricField g = metric.is_none() || py::isinstance<py::str>(metric)
                                  ? MetricField::minkowski(n)
                                  : MetricField::parse_upper_triangle(n, metric.cast<std::vector<std::string>>());
        const GeodesicPath path = integrate_geodesic(g, p, v, t0, t1, steps);
        py::list out;
        for (const GeodesicSample& s : path.samples) out.append(py::make_tuple(s.t, s.position, s.velocity));
        return out;
      },
      py::arg("n"), py::arg("metric"), py::arg("point"), py::arg("velocity"), py::arg("t0") = 0.0,
      py::arg("t1") = 1.0, py::arg("steps") = 1000);

  m.def(
      "run",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "lightcone");
        std::vector<char*> argv;
        for (std::string& a : args) argv.push_back(a.data());
        py::scoped_ostream_redirect out;
        return cli::run(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the command-line tool in process and returns its exit code.");
}
