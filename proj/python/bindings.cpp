// SPDX-License-Identifier: Apache-2.0
#include "hypo/classify.hpp"
#include "hypo/diophantine.hpp"
#include "hypo/report.hpp"
#include "hypo/solver.hpp"
#include "hypo/specfile.hpp"
#include "hypo/witness.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace hypo;

namespace {

SystemSpec spec_from(const std::string& text, const std::string& base_dir) {
  return parse_spec(text, "<spec>", base_dir);
}

std::string classify_json(const std::string& text, const std::string& base_dir, long tau_max, std::size_t j_max,
                          std::size_t L_max, std::vector<double> sigma_grid, bool build_witness, bool embed) {
  SystemSpec spec = spec_from(text, base_dir);
  ClassifyBounds b;
  b.tau_max = tau_max;
  b.j_max = j_max;
  b.L_max = L_max;
  b.sigma_grid = std::move(sigma_grid);
  b.build_witness = build_witness;
  Verdict v;
  {
    py::gil_scoped_release release;
    v = classify(spec, b);
  }
  Json j;
  j["hash"] = content_hash(text);
  j["verdict"] = to_json(v, embed);
  return dump_json(j);
}

std::string resonances_csv(const std::string& text, const std::string& base_dir, std::size_t j_max) {
  SystemSpec spec = spec_from(text, base_dir);
  return resonance_csv(resonance_table(spec, j_max), spec.m());
}

std::string solve_json(const std::string& text, const std::string& base_dir, const std::vector<std::string>& rhs_csv,
                       const std::string& formula) {
  SystemSpec spec = spec_from(text, base_dir);
  std::vector<CoefficientField> rhs;
  for (std::size_t k = 0; k < rhs_csv.size(); ++k) {
    std::istringstream is(rhs_csv[k]);
    rhs.push_back(read_field_csv(is, spec.field_context(), "rhs[" + std::to_string(k) + "]"));
  }
  SolveOptions opt;
  opt.formula = formula == "minus" ? Formula::Minus : formula == "plus" ? Formula::Plus : Formula::Auto;
  if (formula != "minus" && formula != "plus" && formula != "auto") throw InputError("formula must be minus, plus or auto");
  std::optional<SolveResult> res;
  {
    py::gil_scoped_release release;
    res = solve_system(spec, rhs, opt);
  }
  Json j;
  j["method"] = res->method;
  j["residual"] = res->residual;
  j["u_csv"] = field_csv(res->u);
  return dump_json(j);
}

std::string witness_json(const std::string& text, const std::string& base_dir, const std::string& kind,
                         std::size_t j_max) {
  SystemSpec spec = spec_from(text, base_dir);
  SingularWitness w;
  py::gil_scoped_release release;
  if (kind == "sign-change")
    w = witness_sign_change(spec, j_max);
  else if (kind == "infinite-zero-set")
    w = witness_infinite_zero_set(spec, j_max);
  else
    throw InputError("kind must be sign-change or infinite-zero-set");
  return dump_json(to_json(w, true));
}

std::string diophantine_json(const std::vector<std::string>& alpha, const std::vector<double>& eigenvalues,
                             double sigma, double mu, int n, std::size_t L_max) {
  OperatorMeta meta;
  meta.n = n;
  EigenvalueProvider op = EigenvalueProvider::table(eigenvalues, meta);
  DiophantineQuery q;
  std::vector<Rational> ex;
  for (const auto& a : alpha) {
    ex.push_back(parse_rational(a));
    q.alpha.push_back(to_double(ex.back()));
  }
  q.alpha_exact = ex;
  q.sigma = sigma;
  q.mu = mu;
  q.n = n;
  q.L_max = L_max;
  return dump_json(to_json(check_condition(op, q)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Global hypoellipticity of systems of vector fields on the torus";
  m.attr("__version__") = kToolVersion;

  static py::exception<InputError> input_error(m, "InputError", PyExc_ValueError);
  static py::exception<PreconditionError> precondition_error(m, "PreconditionError", PyExc_RuntimeError);
  static py::exception<ResonanceError> resonance_error(m, "ResonanceError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      py::set_error(input_error, e.what());
    } catch (const PreconditionError& e) {
      py::set_error(precondition_error, e.what());
    } catch (const ResonanceError& e) {
      py::set_error(resonance_error, e.what());
    }
  });

  m.def("classify_json", &classify_json, py::arg("text"), py::arg("base_dir") = ".", py::arg("tau_max") = 64,
        py::arg("j_max") = 64, py::arg("L_max") = 1000, py::arg("sigma_grid") = std::vector<double>{},
        py::arg("build_witness") = true, py::arg("embed_fields") = false);
  m.def("resonances_csv", &resonances_csv, py::arg("text"), py::arg("base_dir") = ".", py::arg("j_max") = 20);
  m.def("solve_json", &solve_json, py::arg("text"), py::arg("base_dir"), py::arg("rhs_csv"),
        py::arg("formula") = "auto");
  m.def("witness_json", &witness_json, py::arg("text"), py::arg("base_dir") = ".", py::arg("kind") = "sign-change",
        py::arg("j_max") = 64);
  m.def("diophantine_json", &diophantine_json, py::arg("alpha"), py::arg("eigenvalues"), py::arg("sigma"),
        py::arg("mu") = 0.5, py::arg("n") = 1, py::arg("L_max") = 1000);
  m.def("content_hash", &content_hash, py::arg("data"));
}
