#include <gtest/gtest.h>

#include <stdexcept>

#include "pdafusion/model_core.hpp"
#include "pdafusion/rng.hpp"
#include "test_support.hpp"

namespace pdaf {
namespace {

using testing::Gen;
using testing::min_eigenvalue;
using testing::relative_error;

TEST(TransitionMatrix, UnitInterval) {
    const StateMatrix F = transition_matrix(1.0);
    StateMatrix expected = StateMatrix::Identity();
    expected(0, 1) = 1.0;
    expected(2, 3) = 1.0;
    EXPECT_EQ(F, expected);
}

TEST(TransitionMatrix, HalfInterval) {
    const StateMatrix F = transition_matrix(0.5);
    EXPECT_EQ(F(0, 1), 0.5);
    EXPECT_EQ(F(2, 3), 0.5);
}

TEST(TransitionMatrix, PropagatesConstantVelocity) {
    const StateVector x(3000.0, 10.0, 4000.0, -5.0);
    const StateVector out = transition_matrix(2.0) * x;
    EXPECT_EQ(out, StateVector(3020.0, 10.0, 3990.0, -5.0));
}

TEST(TransitionMatrix, RejectsNonPositiveInterval) {
    EXPECT_THROW(transition_matrix(0.0), std::invalid_argument);
    EXPECT_THROW(transition_matrix(-1.0), std::invalid_argument);
}

TEST(TransitionMatrix, SemigroupProperty) {
    Gen gen(11);
    for (int i = 0; i < 100; ++i) {
        const double t1 = gen.uniform(0.01, 10.0);
        const double t2 = gen.uniform(0.01, 10.0);
        const StateMatrix lhs = transition_matrix(t1) * transition_matrix(t2);
        EXPECT_LE((lhs - transition_matrix(t1 + t2)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ProcessNoise, ZeroIntensity) {
    EXPECT_EQ(process_noise_cov(1.0, 0.0), StateMatrix::Zero());
}

TEST(ProcessNoise, UnitBlock) {
    const StateMatrix Q = process_noise_cov(1.0, 1.0);
    for (const int o : {0, 2}) {
        EXPECT_DOUBLE_EQ(Q(o, o), 1.0 / 3.0);
        EXPECT_DOUBLE_EQ(Q(o, o + 1), 0.5);
        EXPECT_DOUBLE_EQ(Q(o + 1, o), 0.5);
        EXPECT_DOUBLE_EQ(Q(o + 1, o + 1), 1.0);
    }
    EXPECT_TRUE((Q.block<2, 2>(0, 2).isZero(0.0)));
    EXPECT_TRUE((Q.block<2, 2>(2, 0).isZero(0.0)));
}

TEST(ProcessNoise, RejectsNegativeIntensity) {
    EXPECT_THROW(process_noise_cov(1.0, -0.1), std::invalid_argument);
}

TEST(ProcessNoise, PositiveSemidefiniteOnRandomInputs) {
    Gen gen(12);
    for (int i = 0; i < 200; ++i) {
        const double T = gen.uniform(1e-3, 10.0);
        const double q = gen.uniform(1e-3, 10.0);
        const StateMatrix Q = process_noise_cov(T, q);
        EXPECT_EQ(Q, Q.transpose());
        EXPECT_GE(min_eigenvalue(Q), -1e-9 * Q.trace());
    }
}

TEST(ProcessNoise, LinearInIntensity) {
    Gen gen(13);
    for (int i = 0; i < 50; ++i) {
        const double T = gen.uniform(0.1, 5.0);
        const double q = gen.uniform(0.1, 5.0);
        const double c = gen.uniform(0.1, 10.0);
        EXPECT_LE(relative_error(process_noise_cov(T, c * q), c * process_noise_cov(T, q)), 1e-14);
    }
}

TEST(PropagateTruth, NoiselessIsExact) {
    const TransitionModel model(1.5, 0.0);
    Rng rng(5);
    const StateVector x(100.0, 2.0, -50.0, 3.0);
    EXPECT_EQ(propagate_truth(x, model, rng), model.F() * x);
}

TEST(PropagateTruth, NoiseMoments) {
    const TransitionModel model(2.0, 0.7);
    Rng rng(6);
    const StateVector x(1000.0, -20.0, 500.0, 12.0);
    const StateVector fx = model.F() * x;
    const int n = 100000;
    StateVector sum = StateVector::Zero();
    StateMatrix outer = StateMatrix::Zero();
    for (int i = 0; i < n; ++i) {
        const StateVector v = propagate_truth(x, model, rng) - fx;
        sum += v;
        outer += v * v.transpose();
    }
    const StateVector mean = sum / n;
    for (int i = 0; i < kStateDim; ++i) {
        EXPECT_LE(std::abs(mean(i)), 4.0 * std::sqrt(model.Q()(i, i) / n)) << i;
    }
    const StateMatrix cov = outer / n - mean * mean.transpose();
    EXPECT_LE(relative_error(cov, model.Q()), 0.05);
}

TEST(PropagateTruth, SeededRepeatability) {
    const TransitionModel model(1.0, 3.0);
    Rng a(77);
    Rng b(77);
    StateVector xa(0.0, 1.0, 0.0, 1.0);
    StateVector xb = xa;
    for (int i = 0; i < 100; ++i) {
        xa = propagate_truth(xa, model, a);
        xb = propagate_truth(xb, model, b);
    }
    EXPECT_EQ(xa, xb);
}

TEST(RadarNode, Validation) {
    RadarNode ok;
    EXPECT_NO_THROW(validate(ok));
    RadarNode bad = ok;
    bad.p_detect = 0.0;
    EXPECT_THROW(validate(bad), std::exception);
    bad = ok;
    bad.wavelength = 0.0;
    EXPECT_THROW(validate(bad), std::exception);
    bad = ok;
    bad.clutter_density = -1.0;
    EXPECT_THROW(validate(bad), std::exception);
    bad = ok;
    bad.gate_threshold = 0.0;
    EXPECT_THROW(validate(bad), std::exception);
}

}  // namespace
}  // namespace pdaf
