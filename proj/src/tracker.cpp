#include "pdafusion/tracker.hpp"

#include <algorithm>
#include <string>

#include "pdafusion/errors.hpp"

namespace pdaf {
namespace {

void require_psd(const StateMatrix& P, const char* what) {
    const double tol = 1e-9 * std::max(P.trace(), 1.0);
    const Eigen::SelfAdjointEigenSolver<StateMatrix> eig(P, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol) {
        throw NumericalError(std::string(what) + ": covariance lost positive semidefiniteness");
    }
}

}  // namespace

TrackEstimate predict(const TrackEstimate& est, const TransitionModel& model) {
    TrackEstimate out;
    out.mean = model.F() * est.mean;
    out.cov = symmetrized(model.F() * est.cov * model.F().transpose() + model.Q());
    out.frame = est.frame + 1;
    out.is_prediction = true;
    return out;
}

Eigen::MatrixXd kalman_gain(const StateMatrix& P_pred, const Eigen::MatrixXd& H,
                            const Eigen::MatrixXd& S) {
    const Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("kalman_gain: innovation covariance is not positive definite");
    }
    // S symmetric, so K^T = S^-1 H P.
    return llt.solve(H * P_pred).transpose();
}

Eigen::Matrix<double, kStateDim, kMeasDim> kalman_gain(const StateMatrix& P_pred,
                                                       const MeasJacobian& H,
                                                       const MeasMatrix& S) {
    const Eigen::LLT<MeasMatrix> llt(S);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("kalman_gain: innovation covariance is not positive definite");
    }
    return llt.solve(H * P_pred).transpose();
}

TrackEstimate update(const TrackEstimate& pred, std::span<const SensorUpdate> updates) {
    TrackEstimate out = pred;
    out.is_prediction = false;
    if (updates.empty()) {
        return out;
    }

    const Eigen::Index m = kMeasDim * static_cast<Eigen::Index>(updates.size());
    Eigen::VectorXd nu(m);
    Eigen::MatrixXd H(m, kStateDim);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < updates.size(); ++i) {
        const Eigen::Index row = kMeasDim * static_cast<Eigen::Index>(i);
        const auto& u = updates[i];
        nu.segment<kMeasDim>(row) = measurement_residual(u.fused.z_bar, u.ctx.z_pred);
        H.middleRows<kMeasDim>(row) = u.ctx.H;
        R.block<kMeasDim, kMeasDim>(row, row) = u.fused.R_fused;
    }

    const Eigen::MatrixXd S = symmetrized(H * pred.cov * H.transpose() + R);
    const Eigen::MatrixXd K = kalman_gain(pred.cov, H, S);

    out.mean = pred.mean + K * nu;
    const StateMatrix I_KH = StateMatrix::Identity() - K * H;
    out.cov = symmetrized(I_KH * pred.cov * I_KH.transpose() + K * R * K.transpose());
    require_psd(out.cov, "update");
    return out;
}

TrackEstimate update(const TrackEstimate& pred, const FusedMeasurement& fused,
                     const InnovationContext& ctx) {
    const SensorUpdate u{fused, ctx};
    return update(pred, std::span<const SensorUpdate>(&u, 1));
}

double nees(const StateVector& truth, const TrackEstimate& est) {
    const Eigen::LLT<StateMatrix> llt(est.cov);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("nees: estimate covariance is not positive definite");
    }
    const StateVector err = truth - est.mean;
    return llt.matrixL().solve(err).squaredNorm();
}

}  // namespace pdaf
