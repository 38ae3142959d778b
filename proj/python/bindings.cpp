#include "qgeom/cli.hpp"
#include "qgeom/errors.hpp"
#include "qgeom/expsim.hpp"
#include "qgeom/io.hpp"
#include "qgeom/meanslab.hpp"
#include "qgeom/metrics.hpp"
#include "qgeom/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace qgeom;

namespace {

std::vector<HermitianMatrix> hermitian_list(const std::vector<ComplexMatrix>& ms) {
  std::vector<HermitianMatrix> out;
  out.reserve(ms.size());
  for (const auto& m : ms) out.emplace_back(m);
  return out;
}

py::dict tensor_dict(const QGTensor& t) {
  py::dict d;
  d["g"] = t.g;
  d["gamma"] = t.gamma;
  d["sigma"] = t.sigma;
  std::vector<std::string> warnings;
  for (const auto& w : t.warnings) warnings.push_back(w.message());
  d["warnings"] = warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qgeom, m) {
  m.doc() = "Mixed-state quantum geometric tensor toolkit";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result([&]() { return py::exception<Error>(m, "QgeomError", PyExc_ValueError); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type.get_stored(), (e.kind() + ": " + e.what()).c_str());
    }
  });

  m.def("random_density", [](std::size_t dim, std::size_t rank, std::uint64_t seed) {
    return random_density(dim, rank, seed).matrix();
  }, py::arg("dim"), py::arg("rank"), py::arg("seed"));

  m.def("sqrt_derivative", [](const ComplexMatrix& rho, const ComplexMatrix& drho) {
    return sqrt_derivative(DensityMatrix(HermitianMatrix(rho)), HermitianMatrix(drho)).components[0];
  }, py::arg("rho"), py::arg("drho"));

  m.def("fs_qgt", [](const ComplexMatrix& rho, const std::vector<ComplexMatrix>& drho) {
    const DensityMatrix r{HermitianMatrix(rho)};
    return tensor_dict(fs_qgt(r, sqrt_derivative(r, hermitian_list(drho))));
  }, py::arg("rho"), py::arg("drho"));

  m.def("alpha_qgt", [](const ComplexMatrix& rho, const std::vector<ComplexMatrix>& drho, double alpha, bool tilde) {
    const DensityMatrix r{HermitianMatrix(rho)};
    const auto c = sqrt_derivative(r, hermitian_list(drho));
    return tensor_dict(tilde ? alpha_qgt_Gtilde(r, c, alpha) : alpha_qgt_G(r, c, alpha));
  }, py::arg("rho"), py::arg("drho"), py::arg("alpha"), py::arg("tilde") = false);

  m.def("alpha_dynamical_phase", [](const ComplexMatrix& rho, const std::vector<ComplexMatrix>& drho, double alpha) {
    const DensityMatrix r{HermitianMatrix(rho)};
    return alpha_dynamical_phase(r, generalized_sqrt_derivative(r, hermitian_list(drho), arithmetic_fn()), alpha);
  }, py::arg("rho"), py::arg("drho"), py::arg("alpha"));

  m.def("sld_qfi", [](const ComplexMatrix& rho, const std::vector<ComplexMatrix>& drho) {
    return sld_qfi(DensityMatrix(HermitianMatrix(rho)), hermitian_list(drho)).fisher;
  }, py::arg("rho"), py::arg("drho"));

  m.def("metric_unitary", [](const ComplexMatrix& rho, const ComplexMatrix& h) {
    return metric_unitary(DensityMatrix(HermitianMatrix(rho)), HermitianMatrix(h));
  }, py::arg("rho"), py::arg("h"));

  m.def("metric_cptp_dilation", [](const ComplexMatrix& rho, const ComplexMatrix& h_ab, const ComplexVector& nu) {
    return metric_cptp_dilation(DensityMatrix(HermitianMatrix(rho)), HermitianMatrix(h_ab), nu);
  }, py::arg("rho"), py::arg("h_ab"), py::arg("nu"));

  m.def("petz_metric", [](const std::string& f, const ComplexMatrix& rho, const ComplexMatrix& a, const ComplexMatrix& b) {
    return petz_metric(operator_function_by_name(f), DensityMatrix(HermitianMatrix(rho)), HermitianMatrix(a),
                       HermitianMatrix(b));
  }, py::arg("f"), py::arg("rho"), py::arg("a"), py::arg("b"));

  m.def("sigma_mean", [](const ComplexMatrix& a, const ComplexMatrix& b, const std::string& f) {
    return sigma_mean(HermitianMatrix(a), HermitianMatrix(b), operator_function_by_name(f)).matrix();
  }, py::arg("a"), py::arg("b"), py::arg("f"));

  m.def("generator_commutator", [](const ComplexMatrix& rho, const ComplexMatrix& h) {
    const auto s = generator_commutator(DensityMatrix(HermitianMatrix(rho)), HermitianMatrix(h));
    return py::make_tuple(s.h_ab.matrix(), s.residual);
  }, py::arg("rho"), py::arg("h"));

  m.def("simulate_variance", [](const ComplexMatrix& h, const ComplexVector& psi, std::uint64_t shots, std::uint64_t seed) {
    return estimate_to_json(simulate_variance(HermitianMatrix(h), psi, shots, seed)).dump();
  }, py::arg("h"), py::arg("psi"), py::arg("shots"), py::arg("seed"));

  m.def("run_suite", [](const std::string& name, std::uint64_t seed, std::optional<std::size_t> samples,
                        const std::string& profile) {
    SuiteOptions opt;
    opt.seed = seed;
    opt.samples = samples;
    opt.profile = tolerance_profile_from_string(profile);
    Json out = Json::array();
    for (const auto& r : run_suite(name, opt)) out.push_back(suite_to_json(r));
    return out.dump();
  }, py::arg("name"), py::arg("seed") = 0, py::arg("samples") = std::nullopt, py::arg("profile") = "default");

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));
}
