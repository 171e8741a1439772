#pragma once

#include <span>

#include "pdafusion/model_core.hpp"

namespace pdaf {

/// Fisher information J_k for one target at one frame.
struct FisherInformation {
    StateMatrix J = StateMatrix::Zero();
    int frame = 0;
};

/// Information carried forward through the motion model:
/// (F J_prev^-1 F^T + Q)^-1. The transition is linear, so its gradient is F.
StateMatrix prior_information(const StateMatrix& J_prev, const StateMatrix& F,
                              const StateMatrix& Q);

/// H^T R^-1 H for one radar.
StateMatrix measurement_information(const MeasJacobian& H, const MeasMatrix& R_fused);

/// One radar's measurement contribution to the recursion.
struct MeasurementInfoTerm {
    MeasJacobian H = MeasJacobian::Zero();
    MeasMatrix R = MeasMatrix::Identity();
};

/// J_k = prior_information(J_prev) + measurement_information(H, R).
FisherInformation recurse(const FisherInformation& J_prev, const StateMatrix& F,
                          const StateMatrix& Q, const MeasJacobian& H, const MeasMatrix& R_fused);

/// Multi-radar form: the measurement terms add.
FisherInformation recurse(const FisherInformation& J_prev, const StateMatrix& F,
                          const StateMatrix& Q, std::span<const MeasurementInfoTerm> terms);

/// J^-1. Throws NumericalError if J is not PD.
StateMatrix bound(const FisherInformation& J);

/// sqrt(B_xx + B_yy).
double position_rmse_bound(const StateMatrix& B);

/// sqrt(B_vxvx + B_vyvy).
double velocity_rmse_bound(const StateMatrix& B);

}  // namespace pdaf
