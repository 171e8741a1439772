#include "pdafusion/model_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdafusion/errors.hpp"

namespace pdaf {

StateMatrix transition_matrix(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw std::invalid_argument("transition_matrix: frame interval must be positive, got " +
                                    std::to_string(T));
    }
    StateMatrix F = StateMatrix::Identity();
    F(kX, kVx) = T;
    F(kY, kVy) = T;
    return F;
}

StateMatrix process_noise_cov(double T, double q_intensity) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw std::invalid_argument("process_noise_cov: frame interval must be positive");
    }
    if (!(q_intensity >= 0.0) || !std::isfinite(q_intensity)) {
        throw std::invalid_argument("process_noise_cov: intensity must be non-negative, got " +
                                    std::to_string(q_intensity));
    }
    Eigen::Matrix2d block;
    block << T * T * T / 3.0, T * T / 2.0,
             T * T / 2.0,     T;
    block *= q_intensity;

    StateMatrix Q = StateMatrix::Zero();
    Q.block<2, 2>(kX, kX) = block;
    Q.block<2, 2>(kY, kY) = block;
    return Q;
}

TransitionModel::TransitionModel(double T, double q_intensity)
    : T_(T), q_(q_intensity), F_(transition_matrix(T)), Q_(process_noise_cov(T, q_intensity)) {}

StateVector sample_gaussian(const StateVector& mean, const StateMatrix& cov, Rng& rng) {
    StateVector n;
    for (int i = 0; i < kStateDim; ++i) {
        n(i) = rng.normal();
    }
    const Eigen::LDLT<StateMatrix> ldlt(cov);
    const StateVector sqrt_d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
    StateVector scaled = ldlt.matrixL() * sqrt_d.cwiseProduct(n);
    return mean + (ldlt.transpositionsP().transpose() * scaled);
}

TargetState propagate_truth(const TargetState& state, const TransitionModel& model, Rng& rng) {
    return sample_gaussian(model.F() * state, model.Q(), rng);
}

void validate(const RadarNode& radar) {
    std::vector<std::string> errors;
    const std::string prefix = "radar[" + std::to_string(radar.id) + "].";
    if (!std::isfinite(radar.pos_x) || !std::isfinite(radar.pos_y)) {
        errors.push_back(prefix + "position: must be finite");
    }
    if (!(radar.wavelength > 0.0) || !std::isfinite(radar.wavelength)) {
        errors.push_back(prefix + "wavelength: must be > 0");
    }
    if (!(radar.p_detect > 0.0 && radar.p_detect <= 1.0)) {
        errors.push_back(prefix + "p_detect: must lie in (0, 1]");
    }
    if (!(radar.clutter_density >= 0.0) || !std::isfinite(radar.clutter_density)) {
        errors.push_back(prefix + "clutter_density: must be >= 0");
    }
    if (!(radar.gate_threshold > 0.0) || !std::isfinite(radar.gate_threshold)) {
        errors.push_back(prefix + "gate_threshold: must be > 0");
    }
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

}  // namespace pdaf
