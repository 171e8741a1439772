#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "pdafusion/errors.hpp"
#include "pdafusion/harness.hpp"
#include "test_support.hpp"

namespace pdaf {
namespace {

using testing::Gen;

Scenario reference() { return load_scenario(testing::scenario_path("reference.json")); }

TEST(RunOnce, DeterministicGivenSeedAndIndex) {
    const Scenario s = reference();
    EXPECT_EQ(run_once(s, 3), run_once(s, 3));
    EXPECT_NE(run_once(s, 3).rows, run_once(s, 4).rows);
}

TEST(RunOnce, RecordLayout) {
    const Scenario s = reference();
    const RunRecord r = run_once(s, 0);
    EXPECT_EQ(r.scenario_hash, scenario_hash(s));
    EXPECT_EQ(r.master_seed, s.master_seed);
    EXPECT_EQ(r.seed, derive_seed(s.master_seed, 0));
    ASSERT_EQ(r.rows.size(), static_cast<std::size_t>(s.frame_count) * s.targets.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const RunRow& row = r.rows[i];
        EXPECT_EQ(row.frame, static_cast<int>(i / s.targets.size()) + 1);
        EXPECT_EQ(row.target, static_cast<int>(i % s.targets.size()));
        ASSERT_EQ(row.association.size(), 2u);
        EXPECT_GT(row.cov_diag.minCoeff(), 0.0);
        EXPECT_GT(row.bound_diag.minCoeff(), 0.0);
        EXPECT_GE(row.beta_none, 0.0);
        EXPECT_LE(row.beta_none, 1.0);
        for (const auto& a : row.association) {
            EXPECT_EQ(static_cast<std::size_t>(a.candidates), a.beta.size());
            double total = a.beta_none;
            for (const double b : a.beta) {
                total += b;
            }
            EXPECT_NEAR(total, 1.0, 1e-12);
        }
    }
    EXPECT_EQ(r.gate_overlap_warnings, 0);
}

TEST(RunOnce, HighSnrErrorWithinBound) {
    Scenario s = testing::clean_variant(reference());
    s.noise.sigma_r_ref = 0.1;
    s.noise.sigma_theta_ref = 5e-5;
    s.noise.sigma_f_ref = 0.04;
    for (std::uint64_t run = 0; run < 10; ++run) {
        const RunRecord r = run_once(s, run);
        for (std::size_t q = 0; q < s.targets.size(); ++q) {
            const RunRow& last = r.rows[r.rows.size() - s.targets.size() + q];
            const StateVector e = last.truth - last.estimate;
            const double err = std::hypot(e(kX), e(kY));
            const double b = std::sqrt(last.bound_diag(kX) + last.bound_diag(kY));
            EXPECT_LT(err, 3.0 * b) << "run " << run << " target " << q;
        }
    }
}

TEST(RunOnce, LiteralFusionMatchesNormalizedWithoutClutter) {
    Scenario s = testing::clean_variant(reference());
    const RunRecord a = run_once(s, 5);
    s.fusion_mode = FusionMode::paper_literal;
    const RunRecord b = run_once(s, 5);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_LE((a.rows[i].estimate - b.rows[i].estimate).norm(), 1e-9 * a.rows[i].estimate.norm());
    }
}

TEST(RunOnce, EstimateBoundModeRuns) {
    Scenario s = reference();
    s.bound_point = BoundPoint::estimate;
    const RunRecord r = run_once(s, 0);
    for (const auto& row : r.rows) {
        EXPECT_GT(row.bound_diag.minCoeff(), 0.0);
    }
}

TEST(RunOnce, ExplicitInitialEstimateUsed) {
    Scenario s = reference();
    s.targets[0].initial_estimate = s.targets[0].initial_state;
    s.targets[0].initial_cov = StateVector(1.0, 0.01, 1.0, 0.01).asDiagonal();
    s.q_intensity = 0.0;
    s.radars[0].clutter_density = 0.0;
    s.radars[1].clutter_density = 0.0;
    const RunRecord r = run_once(s, 0);
    EXPECT_LT((r.rows[0].truth - r.rows[0].estimate).head<1>().norm(), 5.0);
}

TEST(RunOnce, OverlappingGatesWarned) {
    Scenario s = reference();
    s.targets[1].initial_state = s.targets[0].initial_state;
    s.targets[1].initial_state(kX) += 5.0;
    EXPECT_GT(run_once(s, 0).gate_overlap_warnings, 0);
}

TEST(RunOnce, ObserverSeesEveryFrame) {
    const Scenario s = reference();
    int frames = 0;
    run_once(s, 0, [&](const FrameData& f) {
        ++frames;
        EXPECT_EQ(f.detections.size(), 4u);
        EXPECT_EQ(f.clutter.size(), 4u);
    });
    EXPECT_EQ(frames, s.frame_count);
}

Scenario collision_course() {
    Scenario s = testing::clean_variant(reference());
    s.q_intensity = 0.0;
    s.targets.resize(1);
    // Reaches radar 1 exactly at frame 3.
    s.targets[0].initial_state = StateVector(-5030.0, 10.0, 0.0, 0.0);
    return s;
}

TEST(RunOnce, SingularGeometryCarriesContext) {
    EXPECT_THROW(run_once(collision_course(), 0), NumericalError);
}

TEST(MonteCarlo, SingleRunRmseIsAbsoluteError) {
    const Scenario s = reference();
    const auto result = monte_carlo(s, 1, MonteCarloOptions{1, true});
    const RunRecord& r = *result.records[0];
    ASSERT_EQ(result.summary.rows.size(), r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const StateVector e = r.rows[i].truth - r.rows[i].estimate;
        EXPECT_DOUBLE_EQ(result.summary.rows[i].pos_rmse, std::sqrt(e(kX) * e(kX) + e(kY) * e(kY)));
        EXPECT_DOUBLE_EQ(result.summary.rows[i].vel_rmse, std::sqrt(e(kVx) * e(kVx) + e(kVy) * e(kVy)));
        EXPECT_EQ(result.summary.rows[i].mean_nees, r.rows[i].nees);
        EXPECT_EQ(result.summary.rows[i].runs, 1);
    }
}

TEST(MonteCarlo, RmseOfSyntheticGaussianErrors) {
    Gen gen(121);
    const double sigma = 7.5;
    const int n = 10000;
    std::vector<RunRecord> runs(n);
    for (auto& r : runs) {
        RunRow row;
        row.estimate = StateVector(sigma * gen.normal(), 0.0, 0.0, 0.0);
        r.rows.push_back(row);
    }
    const auto rows = summarize(runs);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_NEAR(rows[0].pos_rmse, sigma, 0.05 * sigma);
    EXPECT_EQ(rows[0].runs, n);
}

TEST(MonteCarlo, MismatchedLayoutsRejected) {
    std::vector<RunRecord> runs(2);
    runs[0].rows.resize(2);
    runs[1].rows.resize(3);
    EXPECT_THROW(summarize(runs), std::invalid_argument);
    EXPECT_TRUE(summarize({}).empty());
}

TEST(MonteCarlo, PrefixStableWhenRunsDoubled) {
    const Scenario s = reference();
    const auto small = monte_carlo(s, 6, MonteCarloOptions{2, true});
    const auto large = monte_carlo(s, 12, MonteCarloOptions{2, true});
    for (std::size_t i = 0; i < 6; ++i) {
        ASSERT_TRUE(small.records[i] && large.records[i]);
        EXPECT_EQ(*small.records[i], *large.records[i]);
    }
}

TEST(MonteCarlo, WorkerCountDoesNotChangeSummary) {
    const Scenario s = reference();
    EXPECT_EQ(monte_carlo(s, 10, MonteCarloOptions{1, false}).summary,
              monte_carlo(s, 10, MonteCarloOptions{4, false}).summary);
}

TEST(MonteCarlo, FailedRunsCountedAndAbort) {
    const auto result = monte_carlo(collision_course(), 5, MonteCarloOptions{1, false});
    EXPECT_EQ(result.summary.runs_requested, 5);
    EXPECT_EQ(result.summary.runs_failed, 5);
    EXPECT_TRUE(result.summary.aborted);
    EXPECT_TRUE(result.summary.rows.empty());
    ASSERT_EQ(result.summary.failures.size(), 5u);
    EXPECT_NE(result.summary.failures[0].find("run 0"), std::string::npos);
}

TEST(MonteCarlo, RejectsNonPositiveRunCount) {
    EXPECT_THROW(monte_carlo(reference(), 0), std::invalid_argument);
}

TEST(MonteCarlo, WorkerCountFromEnvironment) {
    ::setenv("PDAF_WORKERS", "3", 1);
    EXPECT_EQ(default_worker_count(), 3u);
    ::setenv("PDAF_WORKERS", "zero", 1);
    EXPECT_GE(default_worker_count(), 1u);
    ::unsetenv("PDAF_WORKERS");
}

}  // namespace
}  // namespace pdaf
