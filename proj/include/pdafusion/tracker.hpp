#pragma once

#include <span>

#include "pdafusion/pda_fusion.hpp"

namespace pdaf {

/// Gaussian track posterior (or prior, when is_prediction is set).
struct TrackEstimate {
    StateVector mean = StateVector::Zero();
    StateMatrix cov = StateMatrix::Zero();
    int frame = 0;
    bool is_prediction = false;
};

/// mean = F x, cov = F P F^T + Q.
TrackEstimate predict(const TrackEstimate& est, const TransitionModel& model);

/// K = P H^T S^-1 via a Cholesky solve. Throws NumericalError if S is not PD.
Eigen::Matrix<double, kStateDim, kMeasDim> kalman_gain(const StateMatrix& P_pred,
                                                       const MeasJacobian& H,
                                                       const MeasMatrix& S);

/// Dynamic-size variant used for stacked multi-radar updates.
Eigen::MatrixXd kalman_gain(const StateMatrix& P_pred, const Eigen::MatrixXd& H,
                            const Eigen::MatrixXd& S);

/// One radar's fused report plus the linearization it is applied against.
struct SensorUpdate {
    FusedMeasurement fused;
    InnovationContext ctx;
};

/// EKF update against a fused measurement. The innovation covariance is
/// rebuilt from R_fused (S = H P H^T + R_fused) and the covariance is updated
/// in Joseph form. The bearing innovation is wrapped before the gain.
TrackEstimate update(const TrackEstimate& pred, const FusedMeasurement& fused,
                     const InnovationContext& ctx);

/// Joint update against several radars' fused reports, stacked into one
/// measurement with block-diagonal noise. An empty span returns the prediction.
TrackEstimate update(const TrackEstimate& pred, std::span<const SensorUpdate> updates);

/// (x - x_hat)^T P^-1 (x - x_hat).
double nees(const StateVector& truth, const TrackEstimate& est);

}  // namespace pdaf
