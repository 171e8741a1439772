#pragma once

#include <array>

#include "pdafusion/model_core.hpp"

namespace pdaf {

/// Minimum target-to-radar distance (m) below which the geometry is singular.
inline constexpr double kMinRange = 1e-6;

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// One radar report. noise_cov is diag(sigma_r^2, sigma_theta^2, sigma_f^2).
struct Measurement {
    MeasVector z = MeasVector::Zero();
    int radar_id = 0;
    MeasMatrix noise_cov = MeasMatrix::Identity();

    double range() const { return z(kRange); }
    double bearing() const { return z(kBearing); }
    double doppler() const { return z(kDoppler); }
};

/// Power-dependent measurement accuracy:
/// sigma_x^2(P) = sigma_x_ref^2 * (p_ref / P)^exponent_x.
struct NoisePowerModel {
    double sigma_r_ref = 10.0;
    double sigma_theta_ref = 0.005;
    double sigma_f_ref = 5.0;
    double p_ref = 1.0;
    /// Per-component exponents in canonical [r, theta, f] order.
    std::array<double, 3> exponent{1.0, 1.0, 1.0};
};

void validate(const NoisePowerModel& model);

/// Noise-free (range, bearing, doppler) of a target seen from a radar.
/// Doppler is -(2/lambda) times the radial velocity.
MeasVector measure(const TargetState& state, const RadarNode& radar);

/// Analytic d(measure)/d(state), 3x4.
MeasJacobian jacobian(const TargetState& state, const RadarNode& radar);

MeasMatrix noise_cov(const NoisePowerModel& model, double power);

/// measure() plus N(0, noise_cov(power)) noise, bearing rewrapped and range
/// clamped at zero.
Measurement sample_measurement(const TargetState& state, const RadarNode& radar,
                               const NoisePowerModel& model, double power, Rng& rng);

/// z - z_ref with the bearing component wrapped.
MeasVector measurement_residual(const MeasVector& z, const MeasVector& z_ref);

}  // namespace pdaf
