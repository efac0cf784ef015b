#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "steckin/chains.hpp"
#include "steckin/cli.hpp"
#include "steckin/criteria.hpp"
#include "steckin/error.hpp"
#include "steckin/matnorm.hpp"
#include "steckin/oracle.hpp"

namespace py = pybind11;
using namespace steckin;

namespace {

oracle::InequalityFamily make_family(const std::string& kind, double p, double r,
                                     std::size_t N, std::optional<double> alpha, double beta,
                                     const std::string& sign) {
  oracle::InequalityFamily f;
  f.kind = oracle::family_from_string(kind);
  f.params.p = p;
  f.params.r = r;
  f.params.alpha = alpha;
  f.params.beta = beta;
  f.N = N;
  if (sign == "minus") f.sign = oracle::MeanSign::minus;
  else if (sign != "plus") throw ParameterError("sign must be plus or minus");
  f.validate();
  return f;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"steckin"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Numerical checks for Hardy-type and Copson-type series inequalities";

  auto base = py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<SingularParameterError>(m, "SingularParameterError", base.ptr());
  py::register_exception<BracketError>(m, "BracketError", PyExc_RuntimeError);
  py::register_exception<UndefinedRatioError>(m, "UndefinedRatioError", PyExc_ZeroDivisionError);

  // Criteria, vectorized over numpy arrays.
  m.def("best_constant", py::vectorize(criteria::best_constant), py::arg("p"), py::arg("r"));
  m.def("crit14", py::vectorize(criteria::crit14), py::arg("p"));
  m.def("crit27", py::vectorize(criteria::crit27), py::arg("p"));
  m.def("phi45", py::vectorize(criteria::phi45), py::arg("y"), py::arg("p"), py::arg("r"),
        py::arg("a"));
  m.def("lemma1_f", py::vectorize(criteria::lemma1_f), py::arg("x"), py::arg("t"));
  m.def("lemma1_g", py::vectorize(criteria::lemma1_g), py::arg("x"), py::arg("t"));
  m.def("f35", py::vectorize(criteria::f35), py::arg("x"), py::arg("p"), py::arg("alpha"));
  m.def("h36", py::vectorize(criteria::h36), py::arg("alpha"), py::arg("p"));
  m.def("ineq32_margin", py::vectorize(criteria::ineq32_margin), py::arg("y"), py::arg("alpha"),
        py::arg("p"));
  m.def("h1", py::vectorize(criteria::h1), py::arg("y"), py::arg("alpha"), py::arg("p"));
  m.def("h2", py::vectorize(criteria::h2), py::arg("y"), py::arg("alpha"), py::arg("p"));

  m.def("threshold_p_star", &criteria::threshold_p_star, py::arg("tol") = 1e-9);
  m.def("alpha0_sub_half", &criteria::alpha0_sub_half, py::arg("p"));
  m.def("alpha0_super_one", &criteria::alpha0_super_one, py::arg("p"));

  py::class_<SequenceVerdict>(m, "SequenceVerdict")
      .def_property_readonly("passed", &SequenceVerdict::pass)
      .def_readonly("slack", &SequenceVerdict::slack)
      .def_readonly("first_failure", &SequenceVerdict::first_failure)
      .def_readonly("last_dropped", &SequenceVerdict::last_dropped)
      .def_property_readonly("min_slack", [](const SequenceVerdict& v) { return v.scan.min_margin; });

  // Chains.
  py::class_<chains::WeightChain>(m, "WeightChain")
      .def_readonly("N", &chains::WeightChain::N)
      .def_readonly("b", &chains::WeightChain::b)
      .def_readonly("w", &chains::WeightChain::w)
      .def_readonly("nu", &chains::WeightChain::nu)
      .def_readonly("identity_residual", &chains::WeightChain::identity_residual);

  m.def("build_b_chain",
        py::overload_cast<double, double, double, std::size_t>(&chains::build_b_chain),
        py::arg("p"), py::arg("r"), py::arg("a"), py::arg("N"));
  m.def("build_nu_chain", &chains::build_nu_chain, py::arg("p"), py::arg("r"), py::arg("a"),
        py::arg("N"));
  m.def("build_w_chain_sec4", &chains::build_w_chain_sec4, py::arg("p"), py::arg("alpha"),
        py::arg("N"));
  m.def("alternative_b_chain", &chains::alternative_b_chain, py::arg("p"), py::arg("N"));
  m.def("verify_induction_43", &chains::verify_induction_43, py::arg("chain"));
  m.def("verify_303", &chains::verify_303, py::arg("chain"));
  m.def("verify_35", &chains::verify_35, py::arg("chain"));
  m.def("verify_alternative", &chains::verify_alternative, py::arg("chain"));

  // Oracle.
  py::class_<oracle::InequalityFamily>(m, "InequalityFamily")
      .def(py::init(&make_family), py::arg("kind"), py::arg("p"), py::arg("r") = 0.5,
           py::arg("N") = 200, py::arg("alpha") = py::none(), py::arg("beta") = 1.0,
           py::arg("sign") = "plus")
      .def_property_readonly("kind",
                             [](const oracle::InequalityFamily& f) {
                               return std::string(oracle::to_string(f.kind));
                             })
      .def_readonly("N", &oracle::InequalityFamily::N)
      .def_property_readonly("reverse", &oracle::InequalityFamily::reverse)
      .def_property_readonly("constant", &oracle::InequalityFamily::constant);

  py::class_<oracle::RatioCertificate>(m, "RatioCertificate")
      .def_readonly("best_ratio", &oracle::RatioCertificate::best_ratio)
      .def_readonly("theoretical_constant", &oracle::RatioCertificate::theoretical_constant)
      .def_readonly("extremal_vector", &oracle::RatioCertificate::extremal_vector)
      .def_readonly("iterations", &oracle::RatioCertificate::iterations)
      .def_readonly("seed", &oracle::RatioCertificate::seed)
      .def_readonly("converged", &oracle::RatioCertificate::converged)
      .def_property_readonly("passed", [](const oracle::RatioCertificate& c) { return c.pass(); })
      .def("to_json", &oracle::certificate_json);

  m.def("ratio",
        [](const oracle::InequalityFamily& f, const std::vector<double>& a) {
          return oracle::ratio(f, a);
        },
        py::arg("family"), py::arg("a"));
  m.def("minimize_ratio",
        [](const oracle::InequalityFamily& f, std::uint64_t seed, int restarts, unsigned jobs) {
          oracle::MinimizeOptions o;
          o.seed = seed;
          o.restarts = restarts;
          o.jobs = jobs;
          return oracle::minimize_ratio(f, o);
        },
        py::arg("family"), py::arg("seed") = kDefaultSeed, py::arg("restarts") = 8,
        py::arg("jobs") = 1);
  m.def("extremal_ratio", &oracle::extremal_ratio, py::arg("family"), py::arg("eps"));
  m.def("find_counterexample", &oracle::find_counterexample, py::arg("family"),
        py::arg("budget") = 100000, py::arg("seed") = kDefaultSeed);
  m.def("stolarsky_mean", &oracle::stolarsky_mean, py::arg("r"), py::arg("x"), py::arg("y"));

  // Matrix norms.
  py::class_<matnorm::FactorableMatrix>(m, "FactorableMatrix")
      .def_readonly("lam", &matnorm::FactorableMatrix::lambda)
      .def_readonly("Lam", &matnorm::FactorableMatrix::Lambda)
      .def_readonly("name", &matnorm::FactorableMatrix::name)
      .def_property_readonly("N", &matnorm::FactorableMatrix::N);
  m.def("make_matrix", &matnorm::make_matrix, py::arg("spec"), py::arg("N"));
  m.def("lp_norm_lower",
        [](const matnorm::FactorableMatrix& mat, double p, int iters, std::uint64_t seed) {
          const auto e = matnorm::lp_norm_lower(mat, p, iters, seed);
          return py::make_tuple(e.lower_bound, e.witness);
        },
        py::arg("matrix"), py::arg("p"), py::arg("iters") = 2000, py::arg("seed") = kDefaultSeed);
  m.def("check_thm31", &matnorm::check_thm31, py::arg("matrix"), py::arg("p"), py::arg("L"),
        py::arg("a") = 0.0);
  m.def("check_cor1", &matnorm::check_cor1, py::arg("matrix"), py::arg("p"), py::arg("L"),
        py::arg("a") = 0.0);

  m.def("run_cli", &run_cli, py::arg("args"),
        "Runs the command line; returns (exit_code, stdout, stderr).");
}
