// Python bindings for the core library. Wrappers stay thin: every function
// here forwards to the C++ API and converts Eigen/std containers to numpy.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "trimode/classical.hpp"
#include "trimode/conditional.hpp"
#include "trimode/dynamics.hpp"
#include "trimode/fock.hpp"
#include "trimode/gaussian.hpp"
#include "trimode/numeric.hpp"
#include "trimode/telecloning.hpp"

namespace py = pybind11;
using namespace trimode;

namespace {

py::array_t<std::complex<double>> dense_array(const fock::TriFockState& s) {
  const int d = s.cutoff() + 1;
  py::array_t<std::complex<double>> arr({d, d, d});
  const auto v = s.dense();
  std::copy(v.begin(), v.end(), arr.mutable_data());
  return arr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "three-mode parametric entanglement toolkit";

  // ------------------------------------------------------------- kernels
  m.def("phase_cos", &num::phase_cos,
        "cos(sqrt(x)) continued through x <= 0", py::arg("x"));
  m.def("phase_sinc", &num::phase_sinc,
        "sin(sqrt(x))/sqrt(x) continued through x <= 0", py::arg("x"));
  m.def("phase_versine", &num::phase_versine,
        "(1 - cos(sqrt(x)))/x continued through x <= 0", py::arg("x"));

  // ------------------------------------------------------------ dynamics
  py::class_<dynamics::CouplingConfig>(m, "CouplingConfig")
      .def(py::init<>())
      .def(py::init([](std::complex<double> g1, std::complex<double> g2,
                       double time) {
             return dynamics::CouplingConfig{g1, g2, time};
           }),
           py::arg("gamma1"), py::arg("gamma2"), py::arg("time"))
      .def_readwrite("gamma1", &dynamics::CouplingConfig::gamma1)
      .def_readwrite("gamma2", &dynamics::CouplingConfig::gamma2)
      .def_readwrite("time", &dynamics::CouplingConfig::time)
      .def("omega_sq", &dynamics::CouplingConfig::omega_sq)
      .def("ratio", &dynamics::CouplingConfig::ratio)
      .def("validate", &dynamics::CouplingConfig::validate)
      .def_static("from_reduced", &dynamics::CouplingConfig::from_reduced,
                  py::arg("ratio"), py::arg("omega_t"),
                  py::arg("phase1") = 1.5707963267948966,
                  py::arg("phase2") = 1.5707963267948966);

  py::class_<dynamics::ModeCoefficients>(m, "ModeCoefficients")
      .def_readonly("f", &dynamics::ModeCoefficients::f)
      .def_readonly("g", &dynamics::ModeCoefficients::g)
      .def_readonly("h", &dynamics::ModeCoefficients::h)
      .def_readonly("omega_sq", &dynamics::ModeCoefficients::omega_sq);

  py::class_<dynamics::Populations>(m, "Populations")
      .def_readonly("n1", &dynamics::Populations::n1)
      .def_readonly("n2", &dynamics::Populations::n2)
      .def_readonly("n3", &dynamics::Populations::n3);

  py::class_<dynamics::SymmetricPoint>(m, "SymmetricPoint")
      .def_readonly("omega_t", &dynamics::SymmetricPoint::omega_t)
      .def_readonly("n", &dynamics::SymmetricPoint::n);

  m.def("heisenberg_coefficients", &dynamics::heisenberg_coefficients,
        py::arg("cfg"));
  m.def("heisenberg_coefficients_at", &dynamics::heisenberg_coefficients_at,
        py::arg("cfg"), py::arg("signed_time"));
  m.def("mode_populations", &dynamics::mode_populations, py::arg("cfg"));
  m.def("seeded_populations", &dynamics::seeded_populations, py::arg("cfg"),
        py::arg("alpha"));
  m.def("symmetric_point", &dynamics::symmetric_point, py::arg("ratio"));
  m.def("optimal_symmetric_ratio", &dynamics::optimal_symmetric_ratio);
  m.def("config_for_populations", &dynamics::config_for_populations,
        py::arg("n2"), py::arg("n3"));

  // ------------------------------------------------------------ gaussian
  py::class_<gaussian::Covariance6>(m, "Covariance6")
      .def(py::init<>())
      .def_readwrite("m", &gaussian::Covariance6::m);

  py::class_<gaussian::PptReport>(m, "PptReport")
      .def_readonly("min_eig", &gaussian::PptReport::min_eig)
      .def_readonly("fully_inseparable",
                    &gaussian::PptReport::fully_inseparable)
      .def_readonly("tolerance", &gaussian::PptReport::tolerance);

  m.def("covariance_from_couplings", &gaussian::covariance_from_couplings,
        py::arg("cfg"));
  m.def("covariance_from_coefficients",
        &gaussian::covariance_from_coefficients, py::arg("coefficients"));
  m.def("characteristic_function",
        py::overload_cast<const gaussian::Covariance6&,
                          const std::array<gaussian::Complex, 3>&>(
            &gaussian::characteristic_function),
        py::arg("cov"), py::arg("lambdas"));
  m.def("characteristic_function",
        py::overload_cast<const dynamics::CouplingConfig&,
                          const std::array<gaussian::Complex, 3>&>(
            &gaussian::characteristic_function),
        py::arg("cfg"), py::arg("lambdas"));
  m.def("ppt_test", &gaussian::ppt_test, py::arg("cov"),
        py::arg("tol_scale") = 1e-9);
  m.def("is_physical", &gaussian::is_physical, py::arg("cov"),
        py::arg("tol") = 1e-9);
  m.def("symplectic_form", &gaussian::symplectic_form);

  // ---------------------------------------------------------------- fock
  py::register_exception<fock::TailBoundError>(m, "TailBoundError",
                                               PyExc_RuntimeError);

  py::class_<fock::TriFockState>(m, "TriFockState")
      .def_property_readonly("cutoff", &fock::TriFockState::cutoff)
      .def_property_readonly("tail_bound", &fock::TriFockState::tail_bound)
      .def_property_readonly("layout",
                             [](const fock::TriFockState& s) {
                               return s.layout() ==
                                              fock::TriFockState::Layout::
                                                  kPairSheet
                                          ? "pair-sheet"
                                          : "dense";
                             })
      .def("amplitude", &fock::TriFockState::amplitude, py::arg("n1"),
           py::arg("n2"), py::arg("n3"))
      .def("norm_sq", &fock::TriFockState::norm_sq)
      .def("dense", &dense_array);

  py::class_<fock::StateMoments>(m, "StateMoments")
      .def_readonly("populations", &fock::StateMoments::populations)
      .def_property_readonly(
          "covariance",
          [](const fock::StateMoments& sm) { return sm.covariance.m; })
      .def_readonly("means", &fock::StateMoments::means);

  py::class_<fock::DensityMatrix>(m, "DensityMatrix")
      .def_readonly("modes", &fock::DensityMatrix::modes)
      .def_readonly("dim", &fock::DensityMatrix::dim)
      .def_readonly("rho", &fock::DensityMatrix::rho);

  m.def("default_cutoff", &fock::default_cutoff, py::arg("n1"),
        py::arg("mu_max") = 0.0);
  m.def("truncation_tail", &fock::truncation_tail, py::arg("n_thermal"),
        py::arg("dsq"), py::arg("cutoff"));
  m.def("build_vacuum_state", &fock::build_vacuum_state, py::arg("cfg"),
        py::arg("cutoff") = -1, py::arg("max_tail") = 0.01);
  m.def("build_seeded_state", &fock::build_seeded_state, py::arg("cfg"),
        py::arg("alpha"), py::arg("cutoff") = -1, py::arg("max_tail") = 0.01);
  m.def("seed_displacements", &fock::seed_displacements, py::arg("cfg"),
        py::arg("alpha"));
  m.def("moments", &fock::moments, py::arg("state"));
  m.def("reduce", &fock::reduce, py::arg("state"), py::arg("keep"));
  m.def("displacement_matrix", &fock::displacement_matrix, py::arg("alpha"),
        py::arg("dim"));
  m.def("displaced", &fock::displaced, py::arg("state"), py::arg("amps"));
  m.def("write_binary", &fock::write_binary, py::arg("state"),
        py::arg("path"));

  // ----------------------------------------------------------- telecloning
  py::class_<telecloning::TeleclonePlan>(m, "TeleclonePlan")
      .def_readonly("kappa2", &telecloning::TeleclonePlan::kappa2)
      .def_readonly("kappa3", &telecloning::TeleclonePlan::kappa3)
      .def_readonly("n1", &telecloning::TeleclonePlan::n1)
      .def_readonly("n2", &telecloning::TeleclonePlan::n2)
      .def_readonly("n3", &telecloning::TeleclonePlan::n3)
      .def_readonly("seed_alpha", &telecloning::TeleclonePlan::seed_alpha)
      .def("seeded", &telecloning::TeleclonePlan::seeded)
      .def("displacements", &telecloning::TeleclonePlan::displacements)
      .def("validate", &telecloning::TeleclonePlan::validate)
      .def_static("from_populations",
                  &telecloning::TeleclonePlan::from_populations, py::arg("n2"),
                  py::arg("n3"))
      .def_static(
          "from_config",
          [](const dynamics::CouplingConfig& cfg,
             std::optional<std::complex<double>> alpha) {
            return alpha ? telecloning::TeleclonePlan::from_config(cfg, *alpha)
                         : telecloning::TeleclonePlan::from_config(cfg);
          },
          py::arg("cfg"), py::arg("alpha") = py::none());

  py::class_<telecloning::CloneReport>(m, "CloneReport")
      .def_readonly("f2", &telecloning::CloneReport::f2)
      .def_readonly("f3", &telecloning::CloneReport::f3)
      .def_readonly("stderr2", &telecloning::CloneReport::stderr2)
      .def_readonly("stderr3", &telecloning::CloneReport::stderr3)
      .def_readonly("samples", &telecloning::CloneReport::samples)
      .def_readonly("seed", &telecloning::CloneReport::seed)
      .def_readonly("input_z", &telecloning::CloneReport::input_z);

  py::class_<telecloning::OutcomeSampler>(m, "OutcomeSampler")
      .def(py::init<std::complex<double>, double, std::uint64_t>(),
           py::arg("z"), py::arg("n1"), py::arg("seed"))
      .def("next", &telecloning::OutcomeSampler::next)
      .def("normal", &telecloning::OutcomeSampler::normal);

  py::class_<telecloning::FrontierPoint>(m, "FrontierPoint")
      .def_readonly("n2", &telecloning::FrontierPoint::n2)
      .def_readonly("n3", &telecloning::FrontierPoint::n3)
      .def_readonly("f2", &telecloning::FrontierPoint::f2);

  m.def("conditional_amplitudes", &telecloning::conditional_amplitudes,
        py::arg("z"), py::arg("beta"), py::arg("plan"));
  m.def("correction_displacements", &telecloning::correction_displacements,
        py::arg("beta"), py::arg("plan"));
  m.def("corrected_clone_amplitudes",
        &telecloning::corrected_clone_amplitudes, py::arg("z"),
        py::arg("beta"), py::arg("plan"));
  m.def("clone_fidelities", &telecloning::clone_fidelities, py::arg("n2"),
        py::arg("n3"));
  m.def("symmetric_fidelity", &telecloning::symmetric_fidelity, py::arg("n"));
  m.def("asymmetric_frontier", &telecloning::asymmetric_frontier,
        py::arg("f3_target"));
  m.def("mc_teleclone", &telecloning::mc_teleclone, py::arg("z"),
        py::arg("cfg"), py::arg("alpha") = py::none(),
        py::arg("samples") = 100000, py::arg("rng_seed") = 12345);

  // ----------------------------------------------------------- conditional
  py::class_<conditional::TwbFidelity>(m, "TwbFidelity")
      .def_readonly("fid", &conditional::TwbFidelity::fid)
      .def_readonly("xi_star", &conditional::TwbFidelity::xi_star);

  py::class_<conditional::TwbReport>(m, "TwbReport")
      .def_readonly("p0", &conditional::TwbReport::p0)
      .def_readonly("zeta12", &conditional::TwbReport::zeta12)
      .def_readonly("fid", &conditional::TwbReport::fid)
      .def_readonly("xi_star", &conditional::TwbReport::xi_star)
      .def_readonly("eta", &conditional::TwbReport::eta);

  m.def("no_click_probability", &conditional::no_click_probability,
        py::arg("n3"), py::arg("eta"));
  m.def("conditional_density", &conditional::conditional_density,
        py::arg("state"), py::arg("eta"), py::arg("conditioned_mode") = 3);
  m.def("photon_correlation", &conditional::photon_correlation, py::arg("n2"),
        py::arg("n3"), py::arg("eta"));
  m.def("twb_fidelity", &conditional::twb_fidelity, py::arg("n2"),
        py::arg("n3"), py::arg("eta"), py::arg("xi") = py::none());
  m.def("twb_report", &conditional::twb_report, py::arg("n2"), py::arg("n3"),
        py::arg("eta"), py::arg("xi") = py::none());

  // ------------------------------------------------------------- classical
  py::class_<classical::ClassicalParams>(m, "ClassicalParams")
      .def(py::init<>())
      .def_readwrite("c1", &classical::ClassicalParams::c1)
      .def_readwrite("c2", &classical::ClassicalParams::c2)
      .def_readwrite("e1", &classical::ClassicalParams::e1)
      .def_readwrite("e4", &classical::ClassicalParams::e4)
      .def_readwrite("z", &classical::ClassicalParams::z)
      .def_readwrite("omega_ratio", &classical::ClassicalParams::omega_ratio)
      .def("validate", &classical::ClassicalParams::validate);

  py::class_<classical::SweepRow>(m, "SweepRow")
      .def_readonly("e5", &classical::SweepRow::e5)
      .def_readonly("e2", &classical::SweepRow::e2);

  py::class_<classical::ComparisonRow>(m, "ComparisonRow")
      .def_readonly("e5", &classical::ComparisonRow::e5)
      .def_readonly("measured", &classical::ComparisonRow::measured)
      .def_readonly("predicted", &classical::ComparisonRow::predicted)
      .def_readonly("residual", &classical::ComparisonRow::residual);

  py::class_<classical::ComparisonReport>(m, "ComparisonReport")
      .def_readonly("rows", &classical::ComparisonReport::rows)
      .def_readonly("max_abs_residual",
                    &classical::ComparisonReport::max_abs_residual)
      .def_readonly("rms_residual",
                    &classical::ComparisonReport::rms_residual);

  m.def("output_energy", &classical::output_energy, py::arg("e5"),
        py::arg("params") = classical::ClassicalParams{});
  m.def("branch_point", &classical::branch_point,
        py::arg("params") = classical::ClassicalParams{});
  m.def("sweep", &classical::sweep, py::arg("e5_grid"),
        py::arg("params") = classical::ClassicalParams{});
  m.def("compare_measurements", &classical::compare_measurements,
        py::arg("path"), py::arg("params") = classical::ClassicalParams{});
}
