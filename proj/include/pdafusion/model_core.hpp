#pragma once

#include <Eigen/Dense>

#include "pdafusion/rng.hpp"

namespace pdaf {

inline constexpr int kStateDim = 4;
inline constexpr int kMeasDim = 3;

/// Kinematic state, canonical order [x, vx, y, vy].
using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;
using TargetState = StateVector;
using StateCovariance = StateMatrix;

/// Radar observation, canonical order [range, bearing, doppler].
using MeasVector = Eigen::Matrix<double, kMeasDim, 1>;
using MeasMatrix = Eigen::Matrix<double, kMeasDim, kMeasDim>;
using MeasJacobian = Eigen::Matrix<double, kMeasDim, kStateDim>;

enum StateIndex : int { kX = 0, kVx = 1, kY = 2, kVy = 3 };
enum MeasIndex : int { kRange = 0, kBearing = 1, kDoppler = 2 };

/// blkdiag([1 T; 0 1], [1 T; 0 1]). Throws std::invalid_argument if T <= 0.
StateMatrix transition_matrix(double T);

/// White-noise-acceleration covariance, q * [T^3/3 T^2/2; T^2/2 T] per axis.
StateMatrix process_noise_cov(double T, double q_intensity);

/// Nearly-constant-velocity motion model.
class TransitionModel {
public:
    TransitionModel(double T, double q_intensity);

    double interval() const noexcept { return T_; }
    double q_intensity() const noexcept { return q_; }
    const StateMatrix& F() const noexcept { return F_; }
    const StateMatrix& Q() const noexcept { return Q_; }

private:
    double T_;
    double q_;
    StateMatrix F_;
    StateMatrix Q_;
};

/// Draws F x + v with v ~ N(0, Q).
TargetState propagate_truth(const TargetState& state, const TransitionModel& model, Rng& rng);

/// Draws a sample from N(mean, cov) using a lower Cholesky-type factor of cov.
/// A PSD cov with zero eigenvalues is handled through LDLT.
StateVector sample_gaussian(const StateVector& mean, const StateMatrix& cov, Rng& rng);

/// Stationary radar sensor. Beam power is per (radar, target) and lives in
/// BeamAssignment.
struct RadarNode {
    int id = 0;
    double pos_x = 0.0;
    double pos_y = 0.0;
    double wavelength = 0.1;
    double p_detect = 1.0;
    double clutter_density = 0.0;
    double gate_threshold = 16.0;
};

struct BeamAssignment {
    int radar_id = 0;
    double power = 1.0;
};

/// Throws ValidationError naming each violated field.
void validate(const RadarNode& radar);

/// Forces exact symmetry, (A + A^T) / 2.
template <typename Derived>
auto symmetrized(const Eigen::MatrixBase<Derived>& m) {
    return (0.5 * (m + m.transpose())).eval();
}

}  // namespace pdaf
