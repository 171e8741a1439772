#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pdafusion/errors.hpp"
#include "pdafusion/io.hpp"
#include "pdafusion/harness.hpp"
#include "pdafusion/rng.hpp"
#include "pdafusion/scene_sim.hpp"
#include "test_support.hpp"

namespace pdaf {
namespace {

using testing::Gen;

constexpr double kUnitBall = 4.0 * std::numbers::pi / 3.0;

TEST(InGate, CenterAlwaysInside) {
    Gen gen(41);
    for (int i = 0; i < 20; ++i) {
        const MeasVector c(gen.uniform(1e3, 2e4), gen.uniform(-3.0, 3.0), gen.uniform(-500.0, 500.0));
        const Gate g = make_gate(c, gen.spd<3>(), gen.uniform(1e-3, 20.0));
        EXPECT_TRUE(in_gate(c, g));
    }
}

TEST(InGate, JustOutsideThreshold) {
    const Gate g = make_gate(MeasVector::Zero(), MeasMatrix::Identity(), 9.0);
    EXPECT_FALSE(in_gate(MeasVector(3.1, 0.0, 0.0), g));
    EXPECT_TRUE(in_gate(MeasVector(2.9, 0.0, 0.0), g));
}

TEST(InGate, WrapsBearingResidual) {
    const Gate g = make_gate(MeasVector(1000.0, M_PI - 0.01, 0.0), MeasMatrix::Identity(), 1.0);
    EXPECT_TRUE(in_gate(MeasVector(1000.0, -M_PI + 0.01, 0.0), g));
}

TEST(InGate, AgreesWithExplicitInverse) {
    Gen gen(42);
    for (int i = 0; i < 100; ++i) {
        const MeasMatrix S = gen.spd<3>(0.1, 10.0);
        const MeasVector center(5000.0, 0.3, 10.0);
        const double gamma = gen.uniform(1.0, 20.0);
        const Gate g = make_gate(center, S, gamma);
        for (int k = 0; k < 10; ++k) {
            const MeasVector nu = 3.0 * gen.matrix<3, 1>();
            MeasVector wrapped = nu;
            wrapped(kBearing) = std::remainder(nu(kBearing), 2.0 * M_PI);
            const double d2 = wrapped.dot(S.inverse() * wrapped);
            EXPECT_NEAR(gate_distance(center + nu, g), d2, 1e-10 * (1.0 + d2));
            if (std::abs(d2 - gamma) > 1e-9 * gamma) {
                EXPECT_EQ(in_gate(center + nu, g), d2 <= gamma);
            }
        }
    }
}

TEST(InGate, NonPositiveDefiniteRejected) {
    Gate g;
    g.S = MeasVector(1.0, -1.0, 1.0).asDiagonal();
    EXPECT_THROW(in_gate(MeasVector::Zero(), g), NumericalError);
}

TEST(GateVolume, UnitBall) {
    EXPECT_NEAR(gate_volume(MeasMatrix::Identity(), 1.0), 4.18879, 5e-6);
    EXPECT_DOUBLE_EQ(gate_volume(MeasMatrix::Identity(), 1.0), kUnitBall);
}

TEST(GateVolume, DeterminantScaling) {
    const MeasMatrix S = MeasVector(4.0, 1.0, 1.0).asDiagonal();
    EXPECT_DOUBLE_EQ(gate_volume(S, 1.0), 2.0 * kUnitBall);
}

TEST(GateVolume, ThresholdScaling) {
    Gen gen(43);
    for (int i = 0; i < 50; ++i) {
        const MeasMatrix S = gen.spd<3>();
        const double gamma = gen.uniform(0.5, 30.0);
        EXPECT_NEAR(gate_volume(S, 4.0 * gamma), 8.0 * gate_volume(S, gamma),
                    1e-12 * gate_volume(S, 4.0 * gamma));
    }
}

TEST(GateVolume, MatchesRejectionSampling) {
    Gen gen(44);
    for (int i = 0; i < 8; ++i) {
        const MeasMatrix S = gen.spd<3>(0.5, 5.0);
        const double gamma = gen.uniform(1.0, 16.0);
        const MeasMatrix S_inv = S.inverse();
        MeasVector half;
        for (int k = 0; k < 3; ++k) {
            half(k) = std::sqrt(gamma * S(k, k));
        }
        const int n = 400000;
        int inside = 0;
        for (int s = 0; s < n; ++s) {
            MeasVector p;
            for (int k = 0; k < 3; ++k) {
                p(k) = gen.uniform(-half(k), half(k));
            }
            if (p.dot(S_inv * p) <= gamma) {
                ++inside;
            }
        }
        const double box = 8.0 * half.prod();
        const double estimate = box * inside / n;
        EXPECT_NEAR(estimate, gate_volume(S, gamma), 0.02 * gate_volume(S, gamma));
    }
}

TEST(GateVolume, RejectsBadInputs) {
    EXPECT_THROW(gate_volume(MeasMatrix::Identity(), 0.0), std::invalid_argument);
    EXPECT_THROW(gate_volume(-MeasMatrix::Identity(), 1.0), NumericalError);
}

struct DetectionFixture {
    std::vector<RadarNode> radars;
    std::vector<std::vector<BeamAssignment>> beams;
    std::vector<TargetState> truths;
    NoisePowerModel model;

    explicit DetectionFixture(double p_detect) {
        RadarNode a;
        a.id = 1;
        a.pos_x = -5000.0;
        a.p_detect = p_detect;
        RadarNode b = a;
        b.id = 2;
        b.pos_x = 5000.0;
        radars = {a, b};
        truths = {StateVector(-2000.0, 15.0, 8000.0, -5.0), StateVector(3000.0, -10.0, 12000.0, 8.0)};
        beams = {{{1, 1.0}, {2, 1.0}}, {{2, 0.5}}};
    }

    FrameData frame(Rng& rng, int index = 0) const {
        return simulate_detections(index, truths, radars, beams, model, rng);
    }
};

TEST(SimulateDetections, CertainDetection) {
    const DetectionFixture fx(1.0);
    Rng rng(45);
    const FrameData f = fx.frame(rng, 3);
    EXPECT_EQ(f.frame_index, 3);
    ASSERT_EQ(f.detections.size(), 3u);
    for (const auto& slot : f.detections) {
        ASSERT_TRUE(slot.measurement.has_value());
        EXPECT_EQ(slot.measurement->radar_id, slot.radar_id);
    }
    EXPECT_EQ(f.detections[0].target_index, 0);
    EXPECT_EQ(f.detections[1].radar_id, 2);
    EXPECT_EQ(f.detections[2].target_index, 1);
    EXPECT_TRUE(f.clutter.empty());
}

TEST(SimulateDetections, NeverDetect) {
    const DetectionFixture fx(0.0);
    Rng rng(46);
    for (int i = 0; i < 100; ++i) {
        for (const auto& slot : fx.frame(rng).detections) {
            EXPECT_FALSE(slot.measurement.has_value());
        }
    }
}

TEST(SimulateDetections, EmpiricalRateWithinBinomialBand) {
    const double pd = 0.7;
    const DetectionFixture fx(pd);
    Rng rng(47);
    const int frames = 10000;
    int hits = 0;
    int trials = 0;
    for (int i = 0; i < frames; ++i) {
        for (const auto& slot : fx.frame(rng).detections) {
            hits += slot.measurement.has_value() ? 1 : 0;
            ++trials;
        }
    }
    const double sigma = std::sqrt(pd * (1.0 - pd) / trials);
    EXPECT_NEAR(static_cast<double>(hits) / trials, pd, 3.0 * sigma);
}

TEST(SimulateDetections, SeededRepeatability) {
    const DetectionFixture fx(0.5);
    Rng a(48);
    Rng b(48);
    for (int i = 0; i < 20; ++i) {
        const FrameData fa = fx.frame(a);
        const FrameData fb = fx.frame(b);
        ASSERT_EQ(fa.detections.size(), fb.detections.size());
        for (std::size_t k = 0; k < fa.detections.size(); ++k) {
            ASSERT_EQ(fa.detections[k].measurement.has_value(), fb.detections[k].measurement.has_value());
            if (fa.detections[k].measurement) {
                EXPECT_EQ(fa.detections[k].measurement->z, fb.detections[k].measurement->z);
            }
        }
    }
}

TEST(SimulateDetections, UnknownRadarRejected) {
    DetectionFixture fx(1.0);
    fx.beams[1] = {{99, 1.0}};
    Rng rng(49);
    EXPECT_THROW(fx.frame(rng), std::out_of_range);
}

Gate clutter_gate(double target_volume) {
    MeasMatrix S;
    S << 400.0, 0.01, 5.0,
         0.01, 4e-5, 0.002,
         5.0, 0.002, 30.0;
    const double gamma = 9.0;
    const double v = gate_volume(S, gamma);
    // Scale S so that the volume hits the requested value.
    const MeasMatrix scaled = S * std::pow(target_volume / v, 2.0 / 3.0);
    return make_gate(MeasVector(8000.0, 3.1, -40.0), scaled, gamma);
}

TEST(SimulateClutter, ZeroDensityIsEmpty) {
    Rng rng(50);
    EXPECT_TRUE(simulate_clutter(clutter_gate(100.0), 0.0, rng).empty());
}

TEST(SimulateClutter, PointsLieInsideGate) {
    const Gate g = clutter_gate(500.0);
    Rng rng(51);
    int total = 0;
    for (int i = 0; i < 1000; ++i) {
        for (const auto& z : simulate_clutter(g, 0.01, rng)) {
            EXPECT_TRUE(in_gate(z, g));
            EXPECT_GT(z(kBearing), -M_PI);
            EXPECT_LE(z(kBearing), M_PI);
            ++total;
        }
    }
    EXPECT_GT(total, 0);
}

TEST(SimulateClutter, UniformOverEllipsoid) {
    // For uniform points in a 3-ball, (d / gamma)^(3/2) is uniform on [0, 1].
    const Gate g = clutter_gate(1000.0);
    Rng rng(52);
    std::vector<int> bins(10, 0);
    int total = 0;
    while (total < 20000) {
        for (const auto& z : simulate_clutter(g, 0.01, rng)) {
            const double u = std::pow(gate_distance(z, g) / g.gamma, 1.5);
            bins[std::min(9, static_cast<int>(u * 10.0))]++;
            ++total;
        }
    }
    double chi2 = 0.0;
    for (const int b : bins) {
        const double e = total / 10.0;
        chi2 += (b - e) * (b - e) / e;
    }
    // 99th percentile of chi-square with 9 degrees of freedom.
    EXPECT_LT(chi2, 21.666);
}

TEST(SimulateClutter, MeanCountWithinPoissonBand) {
    const double lambda = 0.02;
    const Gate g = clutter_gate(150.0);
    const double mean = lambda * g.volume;
    Rng rng(53);
    const int n = 10000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += static_cast<double>(simulate_clutter(g, lambda, rng).size());
    }
    EXPECT_NEAR(sum / n, mean, 3.0 * std::sqrt(mean / n));
}

TEST(SimulateClutter, CountGoodnessOfFit) {
    const double lambda = 0.01;
    const Gate g = clutter_gate(400.0);
    const double mean = lambda * g.volume;
    ASSERT_NEAR(mean, 4.0, 1e-9);

    // Cells 0..9 plus a tail cell for >= 10.
    constexpr int kCells = 11;
    std::vector<int> observed(kCells, 0);
    Rng rng(54);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const auto k = simulate_clutter(g, lambda, rng).size();
        observed[std::min<std::size_t>(k, kCells - 1)]++;
    }
    std::vector<double> prob(kCells, 0.0);
    double pk = std::exp(-mean);
    double head = 0.0;
    for (int k = 0; k < kCells - 1; ++k) {
        prob[k] = pk;
        head += pk;
        pk *= mean / (k + 1);
    }
    prob[kCells - 1] = 1.0 - head;
    double chi2 = 0.0;
    for (int k = 0; k < kCells; ++k) {
        const double e = n * prob[k];
        ASSERT_GE(e, 5.0);
        chi2 += (observed[k] - e) * (observed[k] - e) / e;
    }
    // 99th percentile of chi-square with 10 degrees of freedom.
    EXPECT_LT(chi2, 23.209);
}

void expect_same_measurement(const Measurement& a, const Measurement& b) {
    EXPECT_EQ(a.z, b.z);
    EXPECT_EQ(a.radar_id, b.radar_id);
    EXPECT_EQ(a.noise_cov, b.noise_cov);
}

TEST(FrameData, JsonRoundTripIsBitExact) {
    Scenario s = load_scenario(testing::scenario_path("reference.json"));
    s.radars[0].clutter_density = 0.05;
    std::vector<FrameData> frames;
    run_once(s, 0, [&](const FrameData& f) { frames.push_back(f); });
    ASSERT_EQ(frames.size(), static_cast<std::size_t>(s.frame_count));

    bool saw_clutter = false;
    for (const auto& f : frames) {
        const std::string text = to_json(f).dump();
        const FrameData back = frame_data_from_json(nlohmann::json::parse(text));
        EXPECT_EQ(back.frame_index, f.frame_index);
        ASSERT_EQ(back.truths.size(), f.truths.size());
        for (std::size_t i = 0; i < f.truths.size(); ++i) {
            EXPECT_EQ(back.truths[i], f.truths[i]);
        }
        ASSERT_EQ(back.detections.size(), f.detections.size());
        for (std::size_t i = 0; i < f.detections.size(); ++i) {
            EXPECT_EQ(back.detections[i].radar_id, f.detections[i].radar_id);
            EXPECT_EQ(back.detections[i].target_index, f.detections[i].target_index);
            ASSERT_EQ(back.detections[i].measurement.has_value(), f.detections[i].measurement.has_value());
            if (f.detections[i].measurement) {
                expect_same_measurement(*back.detections[i].measurement, *f.detections[i].measurement);
            }
        }
        ASSERT_EQ(back.clutter.size(), f.clutter.size());
        for (std::size_t i = 0; i < f.clutter.size(); ++i) {
            EXPECT_EQ(back.clutter[i].radar_id, f.clutter[i].radar_id);
            EXPECT_EQ(back.clutter[i].target_index, f.clutter[i].target_index);
            ASSERT_EQ(back.clutter[i].points.size(), f.clutter[i].points.size());
            for (std::size_t k = 0; k < f.clutter[i].points.size(); ++k) {
                expect_same_measurement(back.clutter[i].points[k], f.clutter[i].points[k]);
                saw_clutter = true;
            }
        }
    }
    EXPECT_TRUE(saw_clutter);
}

TEST(FrameData, IndicesStrictlyIncrease) {
    const Scenario s = load_scenario(testing::scenario_path("reference.json"));
    int last = -1;
    run_once(s, 1, [&](const FrameData& f) {
        EXPECT_GT(f.frame_index, last);
        EXPECT_GE(f.frame_index, 0);
        last = f.frame_index;
    });
}

}  // namespace
}  // namespace pdaf
