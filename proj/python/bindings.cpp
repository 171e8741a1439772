#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pdafusion/bcrlb.hpp"
#include "pdafusion/errors.hpp"
#include "pdafusion/harness.hpp"
#include "pdafusion/io.hpp"
#include "pdafusion/measurement.hpp"
#include "pdafusion/pda_fusion.hpp"
#include "pdafusion/scenario.hpp"
#include "pdafusion/scene_sim.hpp"
#include "pdafusion/tracker.hpp"

namespace py = pybind11;

namespace {

pdaf::RadarNode make_radar(int id, double x, double y, double wavelength, double p_detect,
                           double clutter_density, double gate_threshold) {
    pdaf::RadarNode r{id, x, y, wavelength, p_detect, clutter_density, gate_threshold};
    pdaf::validate(r);
    return r;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multi-radar PDA fusion EKF and Bayesian Cramer-Rao bound";

    auto base = py::register_exception<pdaf::Error>(m, "Error");
    py::register_exception<pdaf::ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<pdaf::ParseError>(m, "ParseError", base.ptr());
    auto numerical = py::register_exception<pdaf::NumericalError>(m, "NumericalError", base.ptr());
    py::register_exception<pdaf::SingularGeometryError>(m, "SingularGeometryError", numerical.ptr());
    py::register_exception<pdaf::DegenerateWeightsError>(m, "DegenerateWeightsError", numerical.ptr());
    py::register_exception<pdaf::IoError>(m, "IoError", base.ptr());

    // model_core
    m.def("transition_matrix", &pdaf::transition_matrix, py::arg("T"));
    m.def("process_noise_cov", &pdaf::process_noise_cov, py::arg("T"), py::arg("q_intensity"));
    m.def("wrap_angle", &pdaf::wrap_angle, py::arg("angle"));

    py::class_<pdaf::RadarNode>(m, "RadarNode")
        .def(py::init(&make_radar), py::arg("id"), py::arg("x"), py::arg("y"),
             py::arg("wavelength") = 0.1, py::arg("p_detect") = 1.0,
             py::arg("clutter_density") = 0.0, py::arg("gate_threshold") = 16.0)
        .def_readwrite("id", &pdaf::RadarNode::id)
        .def_readwrite("x", &pdaf::RadarNode::pos_x)
        .def_readwrite("y", &pdaf::RadarNode::pos_y)
        .def_readwrite("wavelength", &pdaf::RadarNode::wavelength)
        .def_readwrite("p_detect", &pdaf::RadarNode::p_detect)
        .def_readwrite("clutter_density", &pdaf::RadarNode::clutter_density)
        .def_readwrite("gate_threshold", &pdaf::RadarNode::gate_threshold);

    // measurement
    py::class_<pdaf::NoisePowerModel>(m, "NoisePowerModel")
        .def(py::init([](double sr, double st, double sf, double p_ref) {
                 pdaf::NoisePowerModel nm;
                 nm.sigma_r_ref = sr;
                 nm.sigma_theta_ref = st;
                 nm.sigma_f_ref = sf;
                 nm.p_ref = p_ref;
                 pdaf::validate(nm);
                 return nm;
             }),
             py::arg("sigma_range_ref"), py::arg("sigma_bearing_ref"),
             py::arg("sigma_doppler_ref"), py::arg("power_ref") = 1.0)
        .def_readwrite("sigma_range_ref", &pdaf::NoisePowerModel::sigma_r_ref)
        .def_readwrite("sigma_bearing_ref", &pdaf::NoisePowerModel::sigma_theta_ref)
        .def_readwrite("sigma_doppler_ref", &pdaf::NoisePowerModel::sigma_f_ref)
        .def_readwrite("power_ref", &pdaf::NoisePowerModel::p_ref)
        .def_readwrite("exponents", &pdaf::NoisePowerModel::exponent);

    m.def("measure", &pdaf::measure, py::arg("state"), py::arg("radar"));
    m.def("jacobian", &pdaf::jacobian, py::arg("state"), py::arg("radar"));
    m.def("noise_cov", &pdaf::noise_cov, py::arg("model"), py::arg("power"));

    // scene_sim
    m.def("gate_volume", &pdaf::gate_volume, py::arg("S"), py::arg("gamma"));
    m.def(
        "in_gate",
        [](const pdaf::MeasVector& z, const pdaf::MeasVector& center, const pdaf::MeasMatrix& S,
           double gamma) { return pdaf::in_gate(z, pdaf::make_gate(center, S, gamma)); },
        py::arg("z"), py::arg("center"), py::arg("S"), py::arg("gamma"));

    // pda_fusion
    py::class_<pdaf::InnovationContext>(m, "InnovationContext")
        .def(py::init<>())
        .def(py::init([](const pdaf::MeasVector& z_pred, const pdaf::MeasMatrix& S,
                         const pdaf::MeasJacobian& H) { return pdaf::InnovationContext{z_pred, S, H}; }),
             py::arg("z_pred"), py::arg("S"), py::arg("H"))
        .def_readwrite("z_pred", &pdaf::InnovationContext::z_pred)
        .def_readwrite("S", &pdaf::InnovationContext::S)
        .def_readwrite("H", &pdaf::InnovationContext::H);

    py::class_<pdaf::AssociationWeights>(m, "AssociationWeights")
        .def(py::init([](std::vector<double> beta, double beta_none) {
                 return pdaf::AssociationWeights{std::move(beta), beta_none};
             }),
             py::arg("beta"), py::arg("beta_none") = 0.0)
        .def_readwrite("beta", &pdaf::AssociationWeights::beta)
        .def_readwrite("beta_none", &pdaf::AssociationWeights::beta_none);

    py::class_<pdaf::FusedMeasurement>(m, "FusedMeasurement")
        .def(py::init([](const pdaf::MeasVector& z, const pdaf::MeasMatrix& R) {
                 return pdaf::FusedMeasurement{z, R};
             }),
             py::arg("z_bar"), py::arg("R_fused"))
        .def_readwrite("z_bar", &pdaf::FusedMeasurement::z_bar)
        .def_readwrite("R_fused", &pdaf::FusedMeasurement::R_fused);

    py::enum_<pdaf::FusionMode>(m, "FusionMode")
        .value("normalized", pdaf::FusionMode::normalized)
        .value("paper_literal", pdaf::FusionMode::paper_literal);

    m.def("innovation_cov", &pdaf::innovation_cov, py::arg("H"), py::arg("P_pred"), py::arg("R"));
    m.def("make_innovation_context", &pdaf::make_innovation_context, py::arg("x_pred"),
          py::arg("P_pred"), py::arg("radar"), py::arg("R"));
    m.def("likelihood", &pdaf::likelihood, py::arg("z"), py::arg("ctx"));
    m.def(
        "association_probabilities",
        [](const std::vector<double>& f, double p_detect, double volume, double density) {
            return pdaf::association_probabilities(f, p_detect, volume, density);
        },
        py::arg("likelihoods"), py::arg("p_detect"), py::arg("gate_volume"),
        py::arg("clutter_density"),
        "Returns None when there are no candidates and no clutter mass.");
    m.def(
        "fuse",
        [](const std::vector<pdaf::MeasVector>& zs, const std::vector<pdaf::MeasMatrix>& Rs,
           const pdaf::AssociationWeights& w, pdaf::FusionMode mode,
           std::optional<double> anchor) { return pdaf::fuse(zs, Rs, w, mode, anchor); },
        py::arg("measurements"), py::arg("covariances"), py::arg("weights"),
        py::arg("mode") = pdaf::FusionMode::normalized, py::arg("bearing_anchor") = py::none());

    // tracker
    py::class_<pdaf::TrackEstimate>(m, "TrackEstimate")
        .def(py::init([](const pdaf::StateVector& mean, const pdaf::StateMatrix& cov, int frame) {
                 return pdaf::TrackEstimate{mean, cov, frame, false};
             }),
             py::arg("mean"), py::arg("cov"), py::arg("frame") = 0)
        .def_readwrite("mean", &pdaf::TrackEstimate::mean)
        .def_readwrite("cov", &pdaf::TrackEstimate::cov)
        .def_readwrite("frame", &pdaf::TrackEstimate::frame)
        .def_readwrite("is_prediction", &pdaf::TrackEstimate::is_prediction);

    m.def(
        "predict",
        [](const pdaf::TrackEstimate& est, double T, double q) {
            return pdaf::predict(est, pdaf::TransitionModel(T, q));
        },
        py::arg("estimate"), py::arg("T"), py::arg("q_intensity"));
    m.def(
        "kalman_gain",
        [](const pdaf::StateMatrix& P, const pdaf::MeasJacobian& H, const pdaf::MeasMatrix& S) {
            return pdaf::kalman_gain(P, H, S);
        },
        py::arg("P_pred"), py::arg("H"), py::arg("S"));
    m.def(
        "update",
        [](const pdaf::TrackEstimate& pred, const pdaf::FusedMeasurement& fused,
           const pdaf::InnovationContext& ctx) { return pdaf::update(pred, fused, ctx); },
        py::arg("prediction"), py::arg("fused"), py::arg("ctx"));
    m.def("nees", &pdaf::nees, py::arg("truth"), py::arg("estimate"));

    // bcrlb
    m.def("prior_information", &pdaf::prior_information, py::arg("J_prev"), py::arg("F"), py::arg("Q"));
    m.def("measurement_information", &pdaf::measurement_information, py::arg("H"), py::arg("R_fused"));
    m.def(
        "recurse",
        [](const pdaf::StateMatrix& J_prev, const pdaf::StateMatrix& F, const pdaf::StateMatrix& Q,
           const pdaf::MeasJacobian& H, const pdaf::MeasMatrix& R) {
            return pdaf::recurse(pdaf::FisherInformation{J_prev, 0}, F, Q, H, R).J;
        },
        py::arg("J_prev"), py::arg("F"), py::arg("Q"), py::arg("H"), py::arg("R_fused"));
    m.def(
        "bound", [](const pdaf::StateMatrix& J) { return pdaf::bound(pdaf::FisherInformation{J, 0}); },
        py::arg("J"));

    // harness
    py::class_<pdaf::Scenario>(m, "Scenario")
        .def_readwrite("frame_count", &pdaf::Scenario::frame_count)
        .def_readwrite("master_seed", &pdaf::Scenario::master_seed)
        .def_property_readonly("hash", [](const pdaf::Scenario& s) { return pdaf::scenario_hash(s); })
        .def_property_readonly("target_count", [](const pdaf::Scenario& s) { return s.targets.size(); })
        .def_property_readonly("radars", [](const pdaf::Scenario& s) { return s.radars; })
        .def("to_json", [](const pdaf::Scenario& s) { return pdaf::to_json(s).dump(); });

    m.def("load_scenario", &pdaf::load_scenario, py::arg("path"));
    m.def("parse_scenario", [](const std::string& text) { return pdaf::parse_scenario(text); },
          py::arg("text"));

    py::class_<pdaf::RunRecord>(m, "RunRecord")
        .def_readonly("scenario_hash", &pdaf::RunRecord::scenario_hash)
        .def_readonly("seed", &pdaf::RunRecord::seed)
        .def_readonly("run_index", &pdaf::RunRecord::run_index)
        .def_property_readonly("row_count", [](const pdaf::RunRecord& r) { return r.rows.size(); })
        .def("to_csv", [](const pdaf::RunRecord& r) { return pdaf::to_csv(r); })
        .def("to_json", [](const pdaf::RunRecord& r) { return pdaf::to_json(r).dump(); })
        .def("__eq__", [](const pdaf::RunRecord& a, const pdaf::RunRecord& b) { return a == b; });

    py::class_<pdaf::MonteCarloSummary>(m, "MonteCarloSummary")
        .def_readonly("runs_requested", &pdaf::MonteCarloSummary::runs_requested)
        .def_readonly("runs_failed", &pdaf::MonteCarloSummary::runs_failed)
        .def_readonly("aborted", &pdaf::MonteCarloSummary::aborted)
        .def("to_csv", [](const pdaf::MonteCarloSummary& s) { return pdaf::to_csv(s); })
        .def("to_json", [](const pdaf::MonteCarloSummary& s) { return pdaf::to_json(s).dump(); });

    m.def("run_once",
          [](const pdaf::Scenario& s, std::uint64_t run_index) {
              py::gil_scoped_release release;
              return pdaf::run_once(s, run_index);
          },
          py::arg("scenario"), py::arg("run_index") = 0);
    m.def("monte_carlo",
          [](const pdaf::Scenario& s, int n_runs, unsigned workers) {
              py::gil_scoped_release release;
              return pdaf::monte_carlo(s, n_runs, {workers, false}).summary;
          },
          py::arg("scenario"), py::arg("n_runs"), py::arg("workers") = 0);
    m.def(
        "emit",
        [](const pdaf::RunRecord& r, const std::filesystem::path& path, const std::string& format) {
            pdaf::emit(r, pdaf::parse_format(format), path);
        },
        py::arg("record"), py::arg("path"), py::arg("format") = "csv");
    m.def(
        "emit",
        [](const pdaf::MonteCarloSummary& s, const std::filesystem::path& path,
           const std::string& format) { pdaf::emit(s, pdaf::parse_format(format), path); },
        py::arg("summary"), py::arg("path"), py::arg("format") = "csv");
}
