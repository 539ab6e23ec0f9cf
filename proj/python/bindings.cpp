#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sftz/config.hpp"
#include "sftz/orbits.hpp"
#include "sftz/zeta.hpp"

namespace py = pybind11;
using namespace sftz;

namespace {

std::vector<std::pair<std::string, double>> word_entries(const py::dict& values) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [k, v] : values) out.emplace_back(py::cast<std::string>(k), py::cast<double>(v));
  return out;
}

py::dict catalog_row(const OrbitRecord& r, int k) {
  py::dict d;
  d["word"] = r.rep.word().to_string(k);
  d["n"] = r.n;
  d["lam"] = r.lam;
  d["lamF"] = r.lamF;
  d["lamG"] = r.lamG;
  d["lamU"] = r.lamU;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sftzeta, m) {
  m.doc() = "Transfer operators, zeta functions and orbit counting on subshifts of finite type";

  static py::exception<Error> error(m, "SftzError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // args = (exit code, message)
      PyErr_SetObject(error.ptr(), py::make_tuple(e.exit_code(), e.what()).ptr());
    }
  });

  py::class_<SubshiftSpec>(m, "Subshift")
      .def(py::init([](int k, const std::vector<std::vector<int>>& A) { return validate_subshift(k, A); }),
           py::arg("k"), py::arg("A"))
      .def_property_readonly("k", &SubshiftSpec::k)
      .def_property_readonly("matrix", &SubshiftSpec::matrix)
      .def_property_readonly("primitivity_exponent", &SubshiftSpec::primitivity_exponent)
      .def("trace", [](const SubshiftSpec& s, int n) { return trace_of_power(s, n); }, py::arg("n"))
      .def("__eq__", [](const SubshiftSpec& a, const SubshiftSpec& b) { return a == b; });

  m.def("golden_mean_shift", &golden_mean_shift);
  m.def("full_shift", &full_shift, py::arg("k"));
  m.def(
      "enumerate_words",
      [](const SubshiftSpec& s, int n) {
        std::vector<std::string> out;
        for (const auto& w : enumerate_words(s, n)) out.push_back(w.to_string(s.k()));
        return out;
      },
      py::arg("spec"), py::arg("n"));

  py::class_<Potential>(m, "Potential")
      .def_static("constant", [](const SubshiftSpec& s, double c) { return Potential::constant(s, c); },
                  py::arg("spec"), py::arg("value"))
      .def_static("from_symbols", &Potential::from_symbol_values, py::arg("spec"), py::arg("values"))
      .def_static(
          "from_words",
          [](const SubshiftSpec& s, int depth, const py::dict& values) {
            return potential_from_words(s, depth, word_entries(values));
          },
          py::arg("spec"), py::arg("depth"), py::arg("values"))
      .def_property_readonly("depth", &Potential::depth)
      .def_property_readonly("table", &Potential::table)
      .def_property_readonly(
          "words",
          [](const Potential& p) {
            std::vector<std::string> out;
            for (const auto& w : p.space()->words()) out.push_back(w.to_string(p.spec().k()));
            return out;
          })
      .def("__add__", [](const Potential& a, const Potential& b) { return a + b; })
      .def("__sub__", [](const Potential& a, const Potential& b) { return a - b; })
      .def("__rmul__", [](const Potential& a, double c) { return c * a; });

  m.def("pressure", [](const Potential& q, int depth) { return pressure(q, depth); }, py::arg("q"),
        py::arg("depth") = 0);
  m.def("solve_pf", [](const Potential& f, const Potential& tau) { return solve_Pf(f, tau); },
        py::arg("f"), py::arg("tau"));
  m.def(
      "rpf",
      [](const Potential& q, int depth) {
        const auto r = rpf(q, depth);
        py::dict d;
        d["lambda"] = r.lambda;
        d["h"] = r.h;
        d["nu"] = r.nu;
        d["gibbs"] = r.gibbs;
        d["residual"] = r.residual;
        return d;
      },
      py::arg("q"), py::arg("depth") = 0);

  m.def(
      "compute_zn",
      [](const Potential& f, const Potential& tau, const Potential& g, cplx s, cplx z, int n_max) {
        ComplexParams p;
        p.s = s;
        p.z = z;
        return compute_Zn(f, tau, g, p, n_max).values;
      },
      py::arg("f"), py::arg("tau"), py::arg("g"), py::arg("s"), py::arg("z"), py::arg("n_max"));
  m.def(
      "zeta_partial",
      [](const Potential& f, const Potential& tau, const Potential& g, cplx s, cplx z, int N) {
        const auto r = zeta_partial(f, tau, g, s, z, N);
        return py::make_tuple(r.value, r.convergent);
      },
      py::arg("f"), py::arg("tau"), py::arg("g"), py::arg("s"), py::arg("z"), py::arg("N"));
  m.def(
      "eta_g",
      [](const Potential& f, const Potential& tau, const Potential& g, cplx s, double delta, int nodes,
         int N) { return eta_g(f, tau, g, s, delta, nodes, N).value; },
      py::arg("f"), py::arg("tau"), py::arg("g"), py::arg("s"), py::arg("delta") = 0.05,
      py::arg("nodes") = 64, py::arg("N") = 40);
  m.def(
      "residue_check",
      [](const Potential& f, const Potential& tau, const Potential& g) {
        const auto r = residue_check(f, tau, g);
        py::dict d;
        d["P_f"] = r.P_f;
        d["residue"] = r.residue;
        d["target"] = r.target;
        d["relative_error"] = r.relative_error;
        return d;
      },
      py::arg("f"), py::arg("tau"), py::arg("g"));

  m.def("li", &li, py::arg("x"));
  m.def(
      "build_catalog",
      [](const Potential& tau, const Potential& f, const Potential& g, const Potential& f_u, double T) {
        const auto c = build_catalog(tau, f, g, f_u, T);
        py::list rows;
        for (const auto& r : c.records) rows.append(catalog_row(r, tau.spec().k()));
        return rows;
      },
      py::arg("tau"), py::arg("f"), py::arg("g"), py::arg("f_u"), py::arg("T"));
  m.def(
      "lattice_test",
      [](const Potential& f, const Potential& tau) {
        const auto r = lattice_test(f, tau);
        return py::make_tuple(r.lattice, r.generator);
      },
      py::arg("f"), py::arg("tau"));

  m.def(
      "load_config",
      [](const std::string& path) {
        const auto c = load_config(path);
        py::dict d;
        d["spec"] = c.spec;
        d["f"] = c.f;
        d["tau"] = c.tau;
        d["g"] = c.g;
        d["seed"] = c.seed;
        return d;
      },
      py::arg("path"));
}
