#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "primfield/cli.hpp"
#include "primfield/constructions.hpp"
#include "primfield/counting.hpp"
#include "primfield/error.hpp"
#include "primfield/irreducible.hpp"
#include "primfield/primitive.hpp"

namespace py = pybind11;
using namespace primfield;

namespace {

py::object to_py(const Integer& v) {
  return py::reinterpret_steal<py::object>(PyLong_FromString(v.get_str().c_str(), nullptr, 10));
}

Integer from_py(const py::int_& v) { return Integer(py::str(v).cast<std::string>()); }

PrimitiveSetHorizon make_set(std::uint32_t q, int horizon, const std::vector<std::string>& polys) {
  PrimitiveSetHorizon s(q, horizon);
  for (const auto& p : polys) s.insert(parse_poly(p, q));
  return s;
}

py::tuple bracket(const Interval& v) { return py::make_tuple(v.lo_string(), v.hi_string()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact counting and primitive sets over F_q[x]";

  py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("pi_prime", [](std::uint64_t q, int n) { return to_py(pi_prime(q, n)); }, py::arg("q"), py::arg("n"));
  m.def("pi_cumulative", [](std::uint64_t q, int n) { return to_py(pi_cumulative(q, n)); }, py::arg("q"), py::arg("n"));
  m.def(
      "kth_irreducible",
      [](std::uint32_t q, const py::int_& k) { return kth_irreducible(require_prime(q), from_py(k)).to_text(); },
      py::arg("q"), py::arg("k"));
  m.def(
      "count_table",
      [](std::uint64_t q, int max_n) {
        CountTable t = [&] {
          py::gil_scoped_release release;
          return build_count_table(q, max_n);
        }();
        py::list rows;
        for (int n = 0; n <= t.complete_through(); ++n) {
          py::list row;
          for (int k = 0; k <= n; ++k) row.append(to_py(t.at(n, k)));
          rows.append(row);
        }
        return rows;
      },
      py::arg("q"), py::arg("max_n"));
  m.def(
      "check_primitive",
      [](std::uint32_t q, int horizon, const std::vector<std::string>& polys) -> py::object {
        const PrimitiveSetHorizon s = make_set(require_prime(q), horizon, polys);
        const PrimitivityCertificate& c = s.certificate();
        if (c.primitive) return py::none();
        return py::make_tuple(c.counterexample->first.to_text(), c.counterexample->second.to_text());
      },
      py::arg("q"), py::arg("horizon"), py::arg("polys"),
      "None when primitive, else the (divisor, multiple) pair.");
  m.def(
      "erdos_sum",
      [](std::uint32_t q, int horizon, const std::vector<std::string>& polys) {
        return erdos_sum(make_set(require_prime(q), horizon, polys)).get_str();
      },
      py::arg("q"), py::arg("horizon"), py::arg("polys"));
  m.def(
      "mertens",
      [](std::uint64_t q, int n, int precision_bits) {
        const MertensResult r = mertens_product(q, n, precision_bits);
        return py::make_tuple(bracket(r.product), bracket(r.normalized),
                              r.exact ? py::object(py::str(r.exact->get_str())) : py::object(py::none()));
      },
      py::arg("q"), py::arg("n"), py::arg("precision_bits") = 128);
  m.def(
      "evaluate_g",
      [](std::uint64_t q, double z, double eps) { return bracket(evaluate_G(q, z, eps).value); }, py::arg("q"),
      py::arg("z"), py::arg("eps") = 1e-9);
  m.def(
      "t_sequence_k0",
      [](std::uint64_t q, const std::string& growth) {
        const TSequence s = build_t_sequence(q, GrowthFunction::parse(growth));
        return py::make_tuple(s.k0, s.partial_sum.get_str(), s.tail_bound.get_str());
      },
      py::arg("q"), py::arg("growth") = "powlog:eps=0.1");
  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
