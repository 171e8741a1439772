#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdafusion/measurement.hpp"
#include "pdafusion/pda_fusion.hpp"

namespace pdaf {

/// Where the measurement-information term of the bound is linearized.
enum class BoundPoint {
    /// Ground-truth state, clutter-free expected noise (default).
    truth,
    /// The tracker's updated estimate with the realized fused covariance.
    estimate,
};

struct TargetConfig {
    int id = 0;
    TargetState initial_state = TargetState::Zero();
    StateCovariance initial_cov = StateCovariance::Identity();
    /// When absent, each run draws the initial estimate from
    /// N(initial_state, initial_cov).
    std::optional<StateVector> initial_estimate;
    /// Overrides the scenario-wide process noise intensity for this target.
    std::optional<double> q_intensity;
    std::vector<BeamAssignment> beams;
};

struct Scenario {
    int frame_count = 1;
    double frame_interval = 1.0;
    double q_intensity = 0.0;
    std::uint64_t master_seed = 0;
    NoisePowerModel noise;
    std::vector<RadarNode> radars;
    std::vector<TargetConfig> targets;
    FusionMode fusion_mode = FusionMode::normalized;
    BoundPoint bound_point = BoundPoint::truth;

    TransitionModel transition_for(const TargetConfig& target) const;
};

/// Parses and validates scenario JSON text. Throws ParseError for malformed
/// text and ValidationError listing every violation by field path.
Scenario parse_scenario(std::string_view text);

/// Reads a scenario file. Throws IoError if it cannot be read.
Scenario load_scenario(const std::filesystem::path& path);

/// Checks every invariant; throws ValidationError listing all violations.
void validate(const Scenario& scenario);

/// Canonical JSON form; parse_scenario(to_json(s).dump()) reproduces s.
nlohmann::json to_json(const Scenario& scenario);

/// FNV-1a 64 of the canonical JSON dump, as 16 lowercase hex digits.
std::string scenario_hash(const Scenario& scenario);

}  // namespace pdaf
