#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdafusion/bcrlb.hpp"
#include "pdafusion/scenario.hpp"
#include "pdafusion/scene_sim.hpp"
#include "pdafusion/tracker.hpp"

namespace pdaf {

/// Association outcome of one radar's candidate pool for one target.
struct RadarAssociation {
    int radar_id = 0;
    /// Candidates inside the gate (true report, if gated, plus clutter).
    int candidates = 0;
    double beta_none = 1.0;
    std::vector<double> beta;

    bool operator==(const RadarAssociation&) const = default;
};

/// One (frame, target) row of a run.
struct RunRow {
    int frame = 0;
    int target = 0;
    StateVector truth = StateVector::Zero();
    StateVector estimate = StateVector::Zero();
    StateVector cov_diag = StateVector::Zero();
    StateVector bound_diag = StateVector::Zero();
    double nees = 0.0;
    /// Mean of beta_none over the target's radars.
    double beta_none = 1.0;
    std::vector<RadarAssociation> association;

    bool operator==(const RunRow&) const = default;
};

struct RunRecord {
    std::string scenario_hash;
    std::uint64_t master_seed = 0;
    std::uint64_t run_index = 0;
    std::uint64_t seed = 0;
    /// (frame, radar) pairs where two targets' gates may overlap.
    int gate_overlap_warnings = 0;
    /// frame-major, then target order; frame_count x target_count rows.
    std::vector<RunRow> rows;

    bool operator==(const RunRecord&) const = default;
};

/// Optional per-frame hook, used by tests and the Python bindings to inspect
/// the simulated sensor data.
using FrameObserver = std::function<void(const FrameData&)>;

/// Executes predict -> simulate -> gate -> associate -> fuse -> update ->
/// bound for every target at every frame. Deterministic in
/// (scenario.master_seed, run_index). Numerical failures are rethrown as
/// NumericalError with frame and target context.
RunRecord run_once(const Scenario& scenario, std::uint64_t run_index,
                   const FrameObserver& observer = {});

/// Per-(frame, target) aggregate across successful runs.
struct SummaryRow {
    int frame = 0;
    int target = 0;
    double pos_rmse = 0.0;
    double vel_rmse = 0.0;
    /// sqrt of the run-averaged position / velocity bound variance.
    double pos_bound = 0.0;
    double vel_bound = 0.0;
    double mean_nees = 0.0;
    double mean_bound_trace = 0.0;
    int runs = 0;

    bool operator==(const SummaryRow&) const = default;
};

struct MonteCarloSummary {
    std::string scenario_hash;
    std::uint64_t master_seed = 0;
    int runs_requested = 0;
    int runs_failed = 0;
    bool aborted = false;
    std::vector<std::string> failures;
    std::vector<SummaryRow> rows;

    bool operator==(const MonteCarloSummary&) const = default;
};

/// Aggregates runs in the given order. Every record must share the same
/// (frame, target) row layout.
std::vector<SummaryRow> summarize(std::span<const RunRecord> runs);

struct MonteCarloOptions {
    /// 0 means: PDAF_WORKERS if set, else hardware concurrency.
    unsigned workers = 0;
    bool keep_records = false;
};

struct MonteCarloResult {
    MonteCarloSummary summary;
    /// Present only with keep_records; failed runs are std::nullopt.
    std::vector<std::optional<RunRecord>> records;
};

/// Runs n_runs seeded replicas in parallel and aggregates them. Failed runs
/// are excluded and counted; more than 10% failures marks the summary aborted
/// with no rows.
MonteCarloResult monte_carlo(const Scenario& scenario, int n_runs,
                             const MonteCarloOptions& options = {});

/// Worker count from PDAF_WORKERS, falling back to hardware concurrency.
unsigned default_worker_count();

}  // namespace pdaf
