#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pdafusion/measurement.hpp"

namespace pdaf {

/// Prediction-side quantities for one (radar, target) pair.
struct InnovationContext {
    MeasVector z_pred = MeasVector::Zero();
    MeasMatrix S = MeasMatrix::Identity();
    MeasJacobian H = MeasJacobian::Zero();
};

/// S = H P H^T + R, symmetrized. Throws NumericalError if S is not PD.
MeasMatrix innovation_cov(const MeasJacobian& H, const StateMatrix& P_pred, const MeasMatrix& R);

/// Linearizes the radar measurement at the predicted state.
InnovationContext make_innovation_context(const StateVector& x_pred, const StateMatrix& P_pred,
                                          const RadarNode& radar, const MeasMatrix& R);

/// Gaussian density N(nu; 0, S) of the wrapped innovation nu = z - z_pred.
double likelihood(const MeasVector& z, const InnovationContext& ctx);

/// Same density evaluated in log space.
double log_likelihood(const MeasVector& z, const InnovationContext& ctx);

/// Association probabilities for one candidate pool. beta_none is the mass
/// on "no candidate is target-originated".
struct AssociationWeights {
    std::vector<double> beta;
    double beta_none = 1.0;
};

/// beta_i = P_D f_i / (V Lambda + P_D sum f), beta_none = V Lambda / (same).
///
/// Returns std::nullopt when there are no candidates and no clutter mass; the
/// caller then falls back to a prediction-only update.
std::optional<AssociationWeights> association_probabilities(std::span<const double> likelihoods,
                                                            double p_detect, double gate_volume,
                                                            double clutter_density);

enum class FusionMode {
    /// Weights renormalized over candidates; bearing averaged about an anchor.
    normalized,
    /// Raw association probabilities in every sum.
    paper_literal,
};

struct FusedMeasurement {
    MeasVector z_bar = MeasVector::Zero();
    MeasMatrix R_fused = MeasMatrix::Identity();
};

/// Fused measurement and covariance:
///   z_bar = sum w_i z_i
///   R     = sum w_i R_i + sum w_i (z_i - z_bar)(z_i - z_bar)^T
/// with w_i = beta_i / sum(beta) in normalized mode and w_i = beta_i in
/// paper_literal mode. In normalized mode bearings are averaged as wrapped
/// offsets from bearing_anchor (the predicted bearing); if no anchor is given
/// the first candidate's bearing is used.
///
/// Throws std::invalid_argument on empty or mismatched inputs and
/// DegenerateWeightsError if every weight is zero.
FusedMeasurement fuse(std::span<const MeasVector> measurements,
                      std::span<const MeasMatrix> covariances, const AssociationWeights& weights,
                      FusionMode mode = FusionMode::normalized,
                      std::optional<double> bearing_anchor = std::nullopt);

}  // namespace pdaf
