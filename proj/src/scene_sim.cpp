#include "pdafusion/scene_sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pdafusion/errors.hpp"

namespace pdaf {
namespace {

Eigen::LLT<MeasMatrix> decompose_gate(const MeasMatrix& S) {
    Eigen::LLT<MeasMatrix> llt(S);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("gate covariance is not positive definite");
    }
    return llt;
}

}  // namespace

double gate_volume(const MeasMatrix& S, double gamma) {
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("gate_volume: gamma must be positive");
    }
    const auto llt = decompose_gate(S);
    const double sqrt_det = llt.matrixLLT().diagonal().prod();
    constexpr double kUnitBall = 4.0 * std::numbers::pi / 3.0;
    return kUnitBall * std::pow(gamma, 1.5) * sqrt_det;
}

Gate make_gate(const MeasVector& center, const MeasMatrix& S, double gamma) {
    return Gate{center, S, gamma, gate_volume(S, gamma)};
}

double gate_distance(const MeasVector& z, const Gate& gate) {
    const auto llt = decompose_gate(gate.S);
    const MeasVector white = llt.matrixL().solve(measurement_residual(z, gate.center));
    return white.squaredNorm();
}

bool in_gate(const MeasVector& z, const Gate& gate) {
    return gate_distance(z, gate) <= gate.gamma;
}

std::vector<MeasVector> simulate_clutter(const Gate& gate, double clutter_density, Rng& rng) {
    if (!(clutter_density >= 0.0)) {
        throw std::invalid_argument("simulate_clutter: clutter density must be >= 0");
    }
    std::vector<MeasVector> points;
    if (clutter_density == 0.0) {
        return points;
    }
    const auto llt = decompose_gate(gate.S);
    const MeasMatrix L = llt.matrixL();
    const double radius = std::sqrt(gate.gamma);
    const double volume = gate.volume > 0.0 ? gate.volume : gate_volume(gate.S, gate.gamma);

    const std::uint64_t count = rng.poisson(clutter_density * volume);
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        // Uniform in the unit ball: isotropic direction, radius U^(1/3).
        MeasVector u;
        do {
            u = MeasVector(rng.normal(), rng.normal(), rng.normal());
        } while (u.squaredNorm() == 0.0);
        u *= std::cbrt(rng.uniform()) / u.norm();

        MeasVector z = gate.center + radius * (L * u);
        z(kBearing) = wrap_angle(z(kBearing));
        points.push_back(z);
    }
    return points;
}

const RadarNode& find_radar(std::span<const RadarNode> radars, int id) {
    for (const auto& r : radars) {
        if (r.id == id) {
            return r;
        }
    }
    throw std::out_of_range("unknown radar id " + std::to_string(id));
}

FrameData simulate_detections(int frame_index, std::span<const TargetState> truths,
                              std::span<const RadarNode> radars,
                              std::span<const std::vector<BeamAssignment>> assignments,
                              const NoisePowerModel& model, Rng& rng) {
    if (assignments.size() != truths.size()) {
        throw std::invalid_argument("simulate_detections: one beam list per target required");
    }
    FrameData frame;
    frame.frame_index = frame_index;
    frame.truths.assign(truths.begin(), truths.end());
    for (std::size_t q = 0; q < truths.size(); ++q) {
        for (const auto& beam : assignments[q]) {
            const RadarNode& radar = find_radar(radars, beam.radar_id);
            DetectionSlot slot{radar.id, static_cast<int>(q), std::nullopt};
            if (rng.bernoulli(radar.p_detect)) {
                slot.measurement = sample_measurement(truths[q], radar, model, beam.power, rng);
            }
            frame.detections.push_back(std::move(slot));
        }
    }
    return frame;
}

}  // namespace pdaf
