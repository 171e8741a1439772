#include "pdafusion/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "pdafusion/errors.hpp"

namespace pdaf {
namespace {

struct TargetTrack {
    TransitionModel model;
    TargetState truth;
    TrackEstimate estimate;
    FisherInformation info;
};

StateMatrix information_from_covariance(const StateMatrix& P) {
    const Eigen::LLT<StateMatrix> llt(P);
    if (llt.info() != Eigen::Success) {
        throw NumericalError("initial covariance is not positive definite");
    }
    return symmetrized(llt.solve(StateMatrix::Identity()));
}

/// Necessary condition for two gates with the same gamma to intersect.
bool gates_may_overlap(const Gate& a, const Gate& b) {
    const MeasVector d = measurement_residual(a.center, b.center);
    const Eigen::LLT<MeasMatrix> llt(a.S + b.S);
    return llt.matrixL().solve(d).squaredNorm() <= 2.0 * std::max(a.gamma, b.gamma);
}

struct PoolOutcome {
    std::optional<SensorUpdate> update;
    RadarAssociation association;
};

/// Gathers gated candidates for one (radar, target) pair, associates and
/// fuses them.
PoolOutcome process_pool(const Scenario& scenario, const RadarNode& radar,
                         const InnovationContext& ctx, const Gate& gate,
                         const std::optional<Measurement>& detection,
                         const std::vector<Measurement>& clutter) {
    std::vector<MeasVector> zs;
    std::vector<MeasMatrix> Rs;
    std::vector<double> likelihoods;
    auto add = [&](const Measurement& m) {
        zs.push_back(m.z);
        Rs.push_back(m.noise_cov);
        likelihoods.push_back(likelihood(m.z, ctx));
    };
    if (detection && in_gate(detection->z, gate)) {
        add(*detection);
    }
    for (const auto& c : clutter) {
        add(c);
    }

    PoolOutcome out;
    out.association.radar_id = radar.id;
    out.association.candidates = static_cast<int>(zs.size());

    const auto weights = association_probabilities(likelihoods, radar.p_detect, gate.volume,
                                                   radar.clutter_density);
    if (!weights) {
        return out;
    }
    out.association.beta_none = weights->beta_none;
    out.association.beta = weights->beta;
    if (zs.empty()) {
        return out;
    }
    out.update = SensorUpdate{
        fuse(zs, Rs, *weights, scenario.fusion_mode, ctx.z_pred(kBearing)), ctx};
    return out;
}

}  // namespace

RunRecord run_once(const Scenario& scenario, std::uint64_t run_index,
                   const FrameObserver& observer) {
    RunRecord record;
    record.scenario_hash = scenario_hash(scenario);
    record.master_seed = scenario.master_seed;
    record.run_index = run_index;
    record.seed = derive_seed(scenario.master_seed, run_index);
    Rng rng(record.seed);

    const std::size_t n_targets = scenario.targets.size();
    std::vector<TargetTrack> tracks;
    std::vector<std::vector<BeamAssignment>> assignments;
    tracks.reserve(n_targets);
    for (const auto& cfg : scenario.targets) {
        TrackEstimate est;
        est.mean = cfg.initial_estimate
                       ? *cfg.initial_estimate
                       : sample_gaussian(cfg.initial_state, cfg.initial_cov, rng);
        est.cov = cfg.initial_cov;
        est.frame = 0;
        tracks.push_back(TargetTrack{scenario.transition_for(cfg), cfg.initial_state, est,
                                     FisherInformation{information_from_covariance(cfg.initial_cov), 0}});
        assignments.push_back(cfg.beams);
    }
    record.rows.reserve(static_cast<std::size_t>(scenario.frame_count) * n_targets);

    std::vector<TargetState> truths(n_targets);
    for (int k = 1; k <= scenario.frame_count; ++k) {
        for (std::size_t q = 0; q < n_targets; ++q) {
            tracks[q].truth = propagate_truth(tracks[q].truth, tracks[q].model, rng);
            truths[q] = tracks[q].truth;
        }
        FrameData frame = simulate_detections(k, truths, scenario.radars, assignments,
                                              scenario.noise, rng);

        // Gates per (target, beam), kept for the overlap check.
        std::vector<std::vector<Gate>> gates(n_targets);
        std::size_t slot = 0;
        for (std::size_t q = 0; q < n_targets; ++q) {
            TargetTrack& track = tracks[q];
            const TargetConfig& cfg = scenario.targets[q];
            try {
                const TrackEstimate pred = predict(track.estimate, track.model);

                std::vector<SensorUpdate> updates;
                std::vector<const RadarNode*> update_radars;
                RunRow row;
                row.frame = k;
                row.target = static_cast<int>(q);
                for (const auto& beam : cfg.beams) {
                    const RadarNode& radar = find_radar(scenario.radars, beam.radar_id);
                    const MeasMatrix R = noise_cov(scenario.noise, beam.power);
                    const InnovationContext ctx =
                        make_innovation_context(pred.mean, pred.cov, radar, R);
                    const Gate gate = make_gate(ctx.z_pred, ctx.S, radar.gate_threshold);
                    gates[q].push_back(gate);

                    ClutterSet clutter{radar.id, static_cast<int>(q), {}};
                    for (const auto& z : simulate_clutter(gate, radar.clutter_density, rng)) {
                        clutter.points.push_back(Measurement{z, radar.id, R});
                    }
                    const auto& detection = frame.detections[slot++].measurement;
                    PoolOutcome pool =
                        process_pool(scenario, radar, ctx, gate, detection, clutter.points);
                    frame.clutter.push_back(std::move(clutter));
                    if (pool.update) {
                        updates.push_back(std::move(*pool.update));
                        update_radars.push_back(&radar);
                    }
                    row.association.push_back(std::move(pool.association));
                }

                track.estimate = update(pred, updates);

                std::vector<MeasurementInfoTerm> terms;
                if (scenario.bound_point == BoundPoint::truth) {
                    for (const auto& beam : cfg.beams) {
                        const RadarNode& radar = find_radar(scenario.radars, beam.radar_id);
                        terms.push_back({jacobian(track.truth, radar), noise_cov(scenario.noise, beam.power)});
                    }
                } else {
                    for (std::size_t i = 0; i < updates.size(); ++i) {
                        terms.push_back({jacobian(track.estimate.mean, *update_radars[i]),
                                         updates[i].fused.R_fused});
                    }
                }
                track.info = recurse(track.info, track.model.F(), track.model.Q(), terms);
                const StateMatrix B = bound(track.info);

                row.truth = track.truth;
                row.estimate = track.estimate.mean;
                row.cov_diag = track.estimate.cov.diagonal();
                row.bound_diag = B.diagonal();
                row.nees = nees(track.truth, track.estimate);
                double beta_none_sum = 0.0;
                for (const auto& a : row.association) {
                    beta_none_sum += a.beta_none;
                }
                row.beta_none = beta_none_sum / static_cast<double>(row.association.size());
                record.rows.push_back(std::move(row));
            } catch (const NumericalError& e) {
                throw NumericalError("frame " + std::to_string(k) + ", target " +
                                     std::to_string(cfg.id) + ": " + e.what());
            }
        }

        for (const auto& radar : scenario.radars) {
            std::vector<const Gate*> on_radar;
            for (std::size_t q = 0; q < n_targets; ++q) {
                for (std::size_t b = 0; b < scenario.targets[q].beams.size(); ++b) {
                    if (scenario.targets[q].beams[b].radar_id == radar.id) {
                        on_radar.push_back(&gates[q][b]);
                    }
                }
            }
            bool overlap = false;
            for (std::size_t a = 0; a < on_radar.size() && !overlap; ++a) {
                for (std::size_t b = a + 1; b < on_radar.size() && !overlap; ++b) {
                    overlap = gates_may_overlap(*on_radar[a], *on_radar[b]);
                }
            }
            record.gate_overlap_warnings += overlap ? 1 : 0;
        }

        if (observer) {
            observer(frame);
        }
    }
    return record;
}

std::vector<SummaryRow> summarize(std::span<const RunRecord> runs) {
    std::vector<SummaryRow> rows;
    if (runs.empty()) {
        return rows;
    }
    const std::size_t n_rows = runs.front().rows.size();
    for (const auto& run : runs) {
        if (run.rows.size() != n_rows) {
            throw std::invalid_argument("summarize: run records have different row layouts");
        }
    }
    const double n = static_cast<double>(runs.size());
    rows.reserve(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        double pos_sq = 0.0;
        double vel_sq = 0.0;
        double pos_bound = 0.0;
        double vel_bound = 0.0;
        double nees_sum = 0.0;
        double trace_sum = 0.0;
        for (const auto& run : runs) {
            const RunRow& r = run.rows[i];
            const StateVector err = r.truth - r.estimate;
            pos_sq += err(kX) * err(kX) + err(kY) * err(kY);
            vel_sq += err(kVx) * err(kVx) + err(kVy) * err(kVy);
            pos_bound += r.bound_diag(kX) + r.bound_diag(kY);
            vel_bound += r.bound_diag(kVx) + r.bound_diag(kVy);
            nees_sum += r.nees;
            trace_sum += r.bound_diag.sum();
        }
        SummaryRow row;
        row.frame = runs.front().rows[i].frame;
        row.target = runs.front().rows[i].target;
        row.pos_rmse = std::sqrt(pos_sq / n);
        row.vel_rmse = std::sqrt(vel_sq / n);
        row.pos_bound = std::sqrt(pos_bound / n);
        row.vel_bound = std::sqrt(vel_bound / n);
        row.mean_nees = nees_sum / n;
        row.mean_bound_trace = trace_sum / n;
        row.runs = static_cast<int>(runs.size());
        rows.push_back(row);
    }
    return rows;
}

unsigned default_worker_count() {
    if (const char* env = std::getenv("PDAF_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

MonteCarloResult monte_carlo(const Scenario& scenario, int n_runs,
                             const MonteCarloOptions& options) {
    if (n_runs < 1) {
        throw std::invalid_argument("monte_carlo: n_runs must be >= 1");
    }
    const std::size_t count = static_cast<std::size_t>(n_runs);
    std::vector<std::optional<RunRecord>> records(count);
    std::vector<std::string> errors(count);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                records[i] = run_once(scenario, i);
            } catch (const NumericalError& e) {
                errors[i] = e.what();
            }
        }
    };
    const unsigned n_workers = std::min<std::size_t>(
        options.workers > 0 ? options.workers : default_worker_count(), count);
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 1; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
        worker();
    }

    MonteCarloResult result;
    MonteCarloSummary& summary = result.summary;
    summary.scenario_hash = scenario_hash(scenario);
    summary.master_seed = scenario.master_seed;
    summary.runs_requested = n_runs;

    std::vector<RunRecord> ok;
    ok.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (records[i]) {
            ok.push_back(*records[i]);
        } else {
            ++summary.runs_failed;
            summary.failures.push_back("run " + std::to_string(i) + ": " + errors[i]);
        }
    }
    summary.aborted = summary.runs_failed * 10 > n_runs;
    if (!summary.aborted) {
        summary.rows = summarize(ok);
    }
    if (options.keep_records) {
        result.records = std::move(records);
    }
    return result;
}

}  // namespace pdaf
