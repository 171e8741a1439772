#include "pdafusion/bcrlb.hpp"

#include <cmath>
#include <string>

#include "pdafusion/errors.hpp"

namespace pdaf {
namespace {

StateMatrix spd_inverse(const StateMatrix& A, const char* what) {
    const Eigen::LLT<StateMatrix> llt(A);
    if (llt.info() != Eigen::Success) {
        throw NumericalError(std::string(what) + ": matrix is not positive definite");
    }
    return symmetrized(llt.solve(StateMatrix::Identity()));
}

}  // namespace

StateMatrix prior_information(const StateMatrix& J_prev, const StateMatrix& F,
                              const StateMatrix& Q) {
    const StateMatrix propagated = F * spd_inverse(J_prev, "prior_information") * F.transpose() + Q;
    return spd_inverse(symmetrized(propagated), "prior_information");
}

StateMatrix measurement_information(const MeasJacobian& H, const MeasMatrix& R_fused) {
    const Eigen::LLT<MeasMatrix> llt(R_fused);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("measurement_information: fused covariance is not positive definite");
    }
    return symmetrized(H.transpose() * llt.solve(H));
}

FisherInformation recurse(const FisherInformation& J_prev, const StateMatrix& F,
                          const StateMatrix& Q, std::span<const MeasurementInfoTerm> terms) {
    FisherInformation out;
    out.frame = J_prev.frame + 1;
    out.J = prior_information(J_prev.J, F, Q);
    for (const auto& t : terms) {
        out.J += measurement_information(t.H, t.R);
    }
    out.J = symmetrized(out.J);
    return out;
}

FisherInformation recurse(const FisherInformation& J_prev, const StateMatrix& F,
                          const StateMatrix& Q, const MeasJacobian& H, const MeasMatrix& R_fused) {
    const MeasurementInfoTerm term{H, R_fused};
    return recurse(J_prev, F, Q, std::span<const MeasurementInfoTerm>(&term, 1));
}

StateMatrix bound(const FisherInformation& J) {
    return spd_inverse(J.J, "bound");
}

double position_rmse_bound(const StateMatrix& B) {
    return std::sqrt(B(kX, kX) + B(kY, kY));
}

double velocity_rmse_bound(const StateMatrix& B) {
    return std::sqrt(B(kVx, kVx) + B(kVy, kVy));
}

}  // namespace pdaf
