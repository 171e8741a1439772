#include "pdafusion/pda_fusion.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "pdafusion/errors.hpp"

namespace pdaf {
namespace {

Eigen::LLT<MeasMatrix> decompose_innovation(const MeasMatrix& S) {
    Eigen::LLT<MeasMatrix> llt(S);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("innovation covariance is not positive definite");
    }
    return llt;
}

}  // namespace

MeasMatrix innovation_cov(const MeasJacobian& H, const StateMatrix& P_pred, const MeasMatrix& R) {
    const MeasMatrix S = symmetrized(H * P_pred * H.transpose() + R);
    decompose_innovation(S);
    return S;
}

InnovationContext make_innovation_context(const StateVector& x_pred, const StateMatrix& P_pred,
                                          const RadarNode& radar, const MeasMatrix& R) {
    InnovationContext ctx;
    ctx.z_pred = measure(x_pred, radar);
    ctx.H = jacobian(x_pred, radar);
    ctx.S = innovation_cov(ctx.H, P_pred, R);
    return ctx;
}

double log_likelihood(const MeasVector& z, const InnovationContext& ctx) {
    const auto llt = decompose_innovation(ctx.S);
    const MeasVector nu = measurement_residual(z, ctx.z_pred);
    const MeasVector white = llt.matrixL().solve(nu);
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return -0.5 * (white.squaredNorm() + kMeasDim * std::log(2.0 * std::numbers::pi) + log_det);
}

double likelihood(const MeasVector& z, const InnovationContext& ctx) {
    return std::exp(log_likelihood(z, ctx));
}

std::optional<AssociationWeights> association_probabilities(std::span<const double> likelihoods,
                                                            double p_detect, double gate_volume,
                                                            double clutter_density) {
    if (!(p_detect > 0.0 && p_detect <= 1.0)) {
        throw std::invalid_argument("association_probabilities: p_detect must lie in (0, 1]");
    }
    if (!(gate_volume > 0.0)) {
        throw std::invalid_argument("association_probabilities: gate volume must be positive");
    }
    if (!(clutter_density >= 0.0)) {
        throw std::invalid_argument("association_probabilities: clutter density must be >= 0");
    }
    for (const double f : likelihoods) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw std::invalid_argument("association_probabilities: likelihoods must be positive");
        }
    }

    const double clutter_mass = gate_volume * clutter_density;
    if (likelihoods.empty() && clutter_mass == 0.0) {
        return std::nullopt;
    }

    const double sum_f = std::accumulate(likelihoods.begin(), likelihoods.end(), 0.0);
    const double denominator = clutter_mass + p_detect * sum_f;

    AssociationWeights w;
    w.beta.reserve(likelihoods.size());
    for (const double f : likelihoods) {
        w.beta.push_back(p_detect * f / denominator);
    }
    w.beta_none = clutter_mass / denominator;
    return w;
}

FusedMeasurement fuse(std::span<const MeasVector> measurements,
                      std::span<const MeasMatrix> covariances, const AssociationWeights& weights,
                      FusionMode mode, std::optional<double> bearing_anchor) {
    const std::size_t n = measurements.size();
    if (n == 0) {
        throw std::invalid_argument("fuse: no candidate measurements");
    }
    if (covariances.size() != n || weights.beta.size() != n) {
        throw std::invalid_argument("fuse: measurement, covariance and weight counts differ");
    }
    const double total = std::accumulate(weights.beta.begin(), weights.beta.end(), 0.0);
    if (!(total > 0.0)) {
        throw DegenerateWeightsError("fuse: all association weights are zero");
    }

    std::vector<double> w(weights.beta.begin(), weights.beta.end());
    if (mode == FusionMode::normalized) {
        for (double& wi : w) {
            wi /= total;
        }
    }

    FusedMeasurement out;
    if (mode == FusionMode::normalized) {
        MeasVector anchor = MeasVector::Zero();
        anchor(kBearing) = bearing_anchor.value_or(measurements[0](kBearing));
        MeasVector offset = MeasVector::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            offset += w[i] * measurement_residual(measurements[i], anchor);
        }
        out.z_bar = anchor + offset;
    } else {
        out.z_bar.setZero();
        for (std::size_t i = 0; i < n; ++i) {
            out.z_bar += w[i] * measurements[i];
        }
    }
    out.z_bar(kBearing) = wrap_angle(out.z_bar(kBearing));

    MeasMatrix R = MeasMatrix::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const MeasVector d = measurement_residual(measurements[i], out.z_bar);
        R += w[i] * (covariances[i] + d * d.transpose());
    }
    out.R_fused = symmetrized(R);
    return out;
}

}  // namespace pdaf
