#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pdafusion/measurement.hpp"

namespace pdaf {

/// Ellipsoidal validation gate nu^T S^-1 nu <= gamma around a predicted
/// measurement. Volume is in (m * rad * Hz) product units.
struct Gate {
    MeasVector center = MeasVector::Zero();
    MeasMatrix S = MeasMatrix::Identity();
    double gamma = 16.0;
    double volume = 0.0;
};

/// V = (4 pi / 3) gamma^(3/2) sqrt(det S). Throws NumericalError if S is not PD.
double gate_volume(const MeasMatrix& S, double gamma);

/// Builds a gate and fills in its volume.
Gate make_gate(const MeasVector& center, const MeasMatrix& S, double gamma);

/// Squared Mahalanobis distance of the wrapped residual z - center.
double gate_distance(const MeasVector& z, const Gate& gate);

bool in_gate(const MeasVector& z, const Gate& gate);

/// Poisson(lambda * V) points uniformly distributed over the gate ellipsoid.
std::vector<MeasVector> simulate_clutter(const Gate& gate, double clutter_density, Rng& rng);

/// A true-target report slot for one (radar, target) pair.
struct DetectionSlot {
    int radar_id = 0;
    int target_index = 0;
    std::optional<Measurement> measurement;
};

/// False reports drawn inside one (radar, target) gate.
struct ClutterSet {
    int radar_id = 0;
    int target_index = 0;
    std::vector<Measurement> points;
};

struct FrameData {
    int frame_index = 0;
    std::vector<TargetState> truths;
    std::vector<DetectionSlot> detections;
    std::vector<ClutterSet> clutter;
};

/// Looks up a radar by id. Throws std::out_of_range if absent.
const RadarNode& find_radar(std::span<const RadarNode> radars, int id);

/// For every target q and every beam in assignments[q], emits a true report
/// with probability p_detect of that radar. Draw order is target-major, then
/// beam order. Clutter is left empty; it depends on the tracker's gates.
FrameData simulate_detections(int frame_index, std::span<const TargetState> truths,
                              std::span<const RadarNode> radars,
                              std::span<const std::vector<BeamAssignment>> assignments,
                              const NoisePowerModel& model, Rng& rng);

}  // namespace pdaf
