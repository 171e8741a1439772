#include "pdafusion/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdafusion/errors.hpp"

namespace pdaf {
namespace {

struct RelativeGeometry {
    double dx;
    double dy;
    double r;
};

RelativeGeometry relative_geometry(const TargetState& state, const RadarNode& radar) {
    const double dx = state(kX) - radar.pos_x;
    const double dy = state(kY) - radar.pos_y;
    const double r = std::hypot(dx, dy);
    if (!(r > kMinRange)) {
        throw SingularGeometryError("target coincides with radar " + std::to_string(radar.id) +
                                    " (relative range " + std::to_string(r) + " m)");
    }
    return {dx, dy, r};
}

}  // namespace

double wrap_angle(double angle) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double wrapped = std::remainder(angle, kTwoPi);
    if (wrapped <= -std::numbers::pi) {
        wrapped += kTwoPi;
    }
    return wrapped;
}

void validate(const NoisePowerModel& model) {
    std::vector<std::string> errors;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            errors.push_back(std::string("noise_model.") + name + ": must be > 0");
        }
    };
    positive(model.sigma_r_ref, "sigma_range_ref");
    positive(model.sigma_theta_ref, "sigma_bearing_ref");
    positive(model.sigma_f_ref, "sigma_doppler_ref");
    positive(model.p_ref, "power_ref");
    for (std::size_t i = 0; i < model.exponent.size(); ++i) {
        if (!(model.exponent[i] > 0.0) || !std::isfinite(model.exponent[i])) {
            errors.push_back("noise_model.exponents[" + std::to_string(i) + "]: must be > 0");
        }
    }
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

MeasVector measure(const TargetState& state, const RadarNode& radar) {
    const auto [dx, dy, r] = relative_geometry(state, radar);
    const double bearing = std::atan2(dy, dx);
    const double radial_velocity = (state(kVx) * dx + state(kVy) * dy) / r;
    return MeasVector(r, bearing, -(2.0 / radar.wavelength) * radial_velocity);
}

MeasJacobian jacobian(const TargetState& state, const RadarNode& radar) {
    const auto [dx, dy, r] = relative_geometry(state, radar);
    const double vx = state(kVx);
    const double vy = state(kVy);
    const double r2 = r * r;
    const double r3 = r2 * r;
    const double k = -2.0 / radar.wavelength;
    // Cross-radial velocity component scaled by r.
    const double cross = vx * dy - vy * dx;

    MeasJacobian H = MeasJacobian::Zero();
    H(kRange, kX) = dx / r;
    H(kRange, kY) = dy / r;
    H(kBearing, kX) = -dy / r2;
    H(kBearing, kY) = dx / r2;
    H(kDoppler, kX) = k * dy * cross / r3;
    H(kDoppler, kY) = -k * dx * cross / r3;
    H(kDoppler, kVx) = k * dx / r;
    H(kDoppler, kVy) = k * dy / r;
    return H;
}

MeasMatrix noise_cov(const NoisePowerModel& model, double power) {
    if (!(power > 0.0) || !std::isfinite(power)) {
        throw std::invalid_argument("noise_cov: beam power must be positive, got " +
                                    std::to_string(power));
    }
    const double ratio = model.p_ref / power;
    auto variance = [&](double sigma_ref, double exponent) {
        const double scale = exponent == 1.0 ? ratio : std::pow(ratio, exponent);
        return sigma_ref * sigma_ref * scale;
    };
    MeasMatrix R = MeasMatrix::Zero();
    R(kRange, kRange) = variance(model.sigma_r_ref, model.exponent[0]);
    R(kBearing, kBearing) = variance(model.sigma_theta_ref, model.exponent[1]);
    R(kDoppler, kDoppler) = variance(model.sigma_f_ref, model.exponent[2]);
    return R;
}

Measurement sample_measurement(const TargetState& state, const RadarNode& radar,
                               const NoisePowerModel& model, double power, Rng& rng) {
    Measurement m;
    m.radar_id = radar.id;
    m.noise_cov = noise_cov(model, power);
    m.z = measure(state, radar);
    for (int i = 0; i < kMeasDim; ++i) {
        m.z(i) += std::sqrt(m.noise_cov(i, i)) * rng.normal();
    }
    m.z(kRange) = std::max(m.z(kRange), 0.0);
    m.z(kBearing) = wrap_angle(m.z(kBearing));
    return m;
}

MeasVector measurement_residual(const MeasVector& z, const MeasVector& z_ref) {
    MeasVector nu = z - z_ref;
    nu(kBearing) = wrap_angle(nu(kBearing));
    return nu;
}

}  // namespace pdaf
