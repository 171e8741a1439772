#include "pdafusion/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "pdafusion/errors.hpp"

namespace pdaf {
namespace {

using nlohmann::json;

/// Pulls typed fields out of a JSON tree, recording every problem with its
/// field path instead of stopping at the first.
class FieldReader {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& message) {
        errors.push_back(path + ": " + message);
    }

    const json* child(const json& obj, const std::string& key, const std::string& path,
                      bool required) {
        if (!obj.is_object()) {
            return nullptr;
        }
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) {
                fail(path, "missing required field");
            }
            return nullptr;
        }
        return &*it;
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                                 bool required = true) {
        const json* v = child(obj, key, path, required);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_number()) {
            fail(path, "expected a number");
            return std::nullopt;
        }
        const double d = v->get<double>();
        if (!std::isfinite(d)) {
            fail(path, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<std::int64_t> integer(const json& obj, const std::string& key,
                                        const std::string& path, bool required = true) {
        const json* v = child(obj, key, path, required);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_number_integer()) {
            fail(path, "expected an integer");
            return std::nullopt;
        }
        return v->get<std::int64_t>();
    }

    std::optional<std::uint64_t> unsigned_integer(const json& obj, const std::string& key,
                                                  const std::string& path, bool required = true) {
        const json* v = child(obj, key, path, required);
        if (!v) {
            return std::nullopt;
        }
        if (v->is_number_unsigned()) {
            return v->get<std::uint64_t>();
        }
        fail(path, "expected a non-negative integer");
        return std::nullopt;
    }

    std::optional<std::string> string(const json& obj, const std::string& key,
                                      const std::string& path, bool required = true) {
        const json* v = child(obj, key, path, required);
        if (!v) {
            return std::nullopt;
        }
        if (!v->is_string()) {
            fail(path, "expected a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    std::optional<std::vector<double>> numbers(const json& v, const std::string& path,
                                               std::size_t expected) {
        if (!v.is_array() || v.size() != expected) {
            fail(path, "expected an array of " + std::to_string(expected) + " numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                fail(path + "[" + std::to_string(i) + "]", "expected a finite number");
                return std::nullopt;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::optional<std::vector<double>> numbers(const json& obj, const std::string& key,
                                               const std::string& path, std::size_t expected,
                                               bool required = true) {
        const json* v = child(obj, key, path, required);
        if (!v) {
            return std::nullopt;
        }
        return numbers(*v, path, expected);
    }

    /// Accepts a 4-vector (diagonal) or a 4x4 nested array.
    std::optional<StateMatrix> covariance(const json& obj, const std::string& key,
                                          const std::string& path) {
        const json* v = child(obj, key, path, true);
        if (!v) {
            return std::nullopt;
        }
        if (v->is_array() && v->size() == kStateDim && !v->empty() && (*v)[0].is_number()) {
            const auto d = numbers(*v, path, kStateDim);
            if (!d) {
                return std::nullopt;
            }
            StateMatrix P = StateMatrix::Zero();
            for (int i = 0; i < kStateDim; ++i) {
                P(i, i) = (*d)[i];
            }
            return P;
        }
        if (v->is_array() && v->size() == kStateDim) {
            StateMatrix P;
            for (int i = 0; i < kStateDim; ++i) {
                const auto row = numbers((*v)[i], path + "[" + std::to_string(i) + "]", kStateDim);
                if (!row) {
                    return std::nullopt;
                }
                for (int j = 0; j < kStateDim; ++j) {
                    P(i, j) = (*row)[j];
                }
            }
            return P;
        }
        fail(path, "expected 4 diagonal entries or a 4x4 matrix");
        return std::nullopt;
    }
};

StateVector to_state(const std::vector<double>& v) {
    return StateVector(v[0], v[1], v[2], v[3]);
}

json state_json(const StateVector& v) {
    return json::array({v(0), v(1), v(2), v(3)});
}

void read_noise_model(FieldReader& rd, const json& root, NoisePowerModel& model) {
    const json* node = rd.child(root, "noise_model", "noise_model", true);
    if (!node) {
        return;
    }
    if (!node->is_object()) {
        rd.fail("noise_model", "expected an object");
        return;
    }
    if (auto v = rd.number(*node, "sigma_range_ref", "noise_model.sigma_range_ref")) model.sigma_r_ref = *v;
    if (auto v = rd.number(*node, "sigma_bearing_ref", "noise_model.sigma_bearing_ref")) model.sigma_theta_ref = *v;
    if (auto v = rd.number(*node, "sigma_doppler_ref", "noise_model.sigma_doppler_ref")) model.sigma_f_ref = *v;
    if (auto v = rd.number(*node, "power_ref", "noise_model.power_ref")) model.p_ref = *v;
    if (auto e = rd.numbers(*node, "exponents", "noise_model.exponents", 3, false)) {
        model.exponent = {(*e)[0], (*e)[1], (*e)[2]};
    }
}

void read_radars(FieldReader& rd, const json& root, std::vector<RadarNode>& radars) {
    const json* node = rd.child(root, "radars", "radars", true);
    if (!node) {
        return;
    }
    if (!node->is_array()) {
        rd.fail("radars", "expected an array");
        return;
    }
    for (std::size_t i = 0; i < node->size(); ++i) {
        const json& r = (*node)[i];
        const std::string path = "radars[" + std::to_string(i) + "]";
        if (!r.is_object()) {
            rd.fail(path, "expected an object");
            continue;
        }
        RadarNode radar;
        if (auto v = rd.integer(r, "id", path + ".id")) radar.id = static_cast<int>(*v);
        if (auto p = rd.numbers(r, "position", path + ".position", 2)) {
            radar.pos_x = (*p)[0];
            radar.pos_y = (*p)[1];
        }
        if (auto v = rd.number(r, "wavelength", path + ".wavelength")) radar.wavelength = *v;
        if (auto v = rd.number(r, "p_detect", path + ".p_detect")) radar.p_detect = *v;
        if (auto v = rd.number(r, "clutter_density", path + ".clutter_density")) radar.clutter_density = *v;
        if (auto v = rd.number(r, "gate_threshold", path + ".gate_threshold", false)) radar.gate_threshold = *v;
        radars.push_back(radar);
    }
}

void read_targets(FieldReader& rd, const json& root, std::vector<TargetConfig>& targets) {
    const json* node = rd.child(root, "targets", "targets", true);
    if (!node) {
        return;
    }
    if (!node->is_array()) {
        rd.fail("targets", "expected an array");
        return;
    }
    for (std::size_t i = 0; i < node->size(); ++i) {
        const json& t = (*node)[i];
        const std::string path = "targets[" + std::to_string(i) + "]";
        if (!t.is_object()) {
            rd.fail(path, "expected an object");
            continue;
        }
        TargetConfig target;
        target.id = static_cast<int>(i);
        if (auto v = rd.integer(t, "id", path + ".id", false)) target.id = static_cast<int>(*v);
        if (auto s = rd.numbers(t, "initial_state", path + ".initial_state", kStateDim)) {
            target.initial_state = to_state(*s);
        }
        if (auto P = rd.covariance(t, "initial_covariance", path + ".initial_covariance")) {
            target.initial_cov = *P;
        }
        if (auto e = rd.numbers(t, "initial_estimate", path + ".initial_estimate", kStateDim, false)) {
            target.initial_estimate = to_state(*e);
        }
        target.q_intensity = rd.number(t, "process_noise_intensity", path + ".process_noise_intensity", false);

        if (const json* beams = rd.child(t, "beams", path + ".beams", true)) {
            if (!beams->is_array()) {
                rd.fail(path + ".beams", "expected an array");
            } else {
                for (std::size_t b = 0; b < beams->size(); ++b) {
                    const std::string bpath = path + ".beams[" + std::to_string(b) + "]";
                    BeamAssignment beam;
                    if (auto v = rd.integer((*beams)[b], "radar", bpath + ".radar")) beam.radar_id = static_cast<int>(*v);
                    if (auto v = rd.number((*beams)[b], "power", bpath + ".power")) beam.power = *v;
                    target.beams.push_back(beam);
                }
            }
        }
        targets.push_back(std::move(target));
    }
}

void read_options(FieldReader& rd, const json& root, Scenario& s) {
    const json* node = rd.child(root, "options", "options", false);
    if (!node) {
        return;
    }
    if (auto mode = rd.string(*node, "fusion_mode", "options.fusion_mode", false)) {
        if (*mode == "normalized") {
            s.fusion_mode = FusionMode::normalized;
        } else if (*mode == "paper_literal") {
            s.fusion_mode = FusionMode::paper_literal;
        } else {
            rd.fail("options.fusion_mode", "expected \"normalized\" or \"paper_literal\"");
        }
    }
    if (auto point = rd.string(*node, "bound_evaluation", "options.bound_evaluation", false)) {
        if (*point == "truth") {
            s.bound_point = BoundPoint::truth;
        } else if (*point == "estimate") {
            s.bound_point = BoundPoint::estimate;
        } else {
            rd.fail("options.bound_evaluation", "expected \"truth\" or \"estimate\"");
        }
    }
}

bool is_psd(const StateMatrix& P) {
    if (!P.isApprox(P.transpose(), 1e-9)) {
        return false;
    }
    const Eigen::SelfAdjointEigenSolver<StateMatrix> eig(P, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() >= -1e-9 * std::max(P.trace(), 1.0);
}

void collect_violations(const Scenario& s, std::vector<std::string>& errors) {
    if (s.frame_count < 1) {
        errors.push_back("frame_count: must be >= 1");
    }
    if (!(s.frame_interval > 0.0) || !std::isfinite(s.frame_interval)) {
        errors.push_back("frame_interval: must be > 0");
    }
    if (!(s.q_intensity >= 0.0) || !std::isfinite(s.q_intensity)) {
        errors.push_back("process_noise_intensity: must be >= 0");
    }
    try {
        validate(s.noise);
    } catch (const ValidationError& e) {
        errors.insert(errors.end(), e.violations().begin(), e.violations().end());
    }

    if (s.radars.empty()) {
        errors.push_back("radars: at least one radar required");
    }
    std::set<int> radar_ids;
    for (std::size_t i = 0; i < s.radars.size(); ++i) {
        const RadarNode& r = s.radars[i];
        const std::string path = "radars[" + std::to_string(i) + "].";
        if (!radar_ids.insert(r.id).second) {
            errors.push_back(path + "id: duplicate radar id " + std::to_string(r.id));
        }
        if (!(r.wavelength > 0.0)) errors.push_back(path + "wavelength: must be > 0");
        if (!(r.p_detect > 0.0 && r.p_detect <= 1.0)) errors.push_back(path + "p_detect: must lie in (0, 1]");
        if (!(r.clutter_density >= 0.0)) errors.push_back(path + "clutter_density: must be >= 0");
        if (!(r.gate_threshold > 0.0)) errors.push_back(path + "gate_threshold: must be > 0");
    }

    if (s.targets.empty()) {
        errors.push_back("targets: at least one target required");
    }
    std::set<int> target_ids;
    for (std::size_t i = 0; i < s.targets.size(); ++i) {
        const TargetConfig& t = s.targets[i];
        const std::string path = "targets[" + std::to_string(i) + "].";
        if (!target_ids.insert(t.id).second) {
            errors.push_back(path + "id: duplicate target id " + std::to_string(t.id));
        }
        if (!t.initial_state.allFinite()) {
            errors.push_back(path + "initial_state: must be finite");
        }
        if (!is_psd(t.initial_cov)) {
            errors.push_back(path + "initial_covariance: must be symmetric positive semidefinite");
        } else if (Eigen::LLT<StateMatrix>(t.initial_cov).info() != Eigen::Success) {
            errors.push_back(path + "initial_covariance: must be positive definite (it seeds the bound)");
        }
        if (t.q_intensity && !(*t.q_intensity >= 0.0)) {
            errors.push_back(path + "process_noise_intensity: must be >= 0");
        }
        if (t.beams.empty()) {
            errors.push_back(path + "beams: every target needs at least one assigned radar");
        }
        std::set<int> beam_radars;
        for (std::size_t b = 0; b < t.beams.size(); ++b) {
            const BeamAssignment& beam = t.beams[b];
            const std::string bpath = path + "beams[" + std::to_string(b) + "].";
            if (!radar_ids.contains(beam.radar_id)) {
                errors.push_back(bpath + "radar: unknown radar id " + std::to_string(beam.radar_id));
            }
            if (!beam_radars.insert(beam.radar_id).second) {
                errors.push_back(bpath + "radar: radar assigned twice to the same target");
            }
            if (!(beam.power > 0.0) || !std::isfinite(beam.power)) {
                errors.push_back(bpath + "power: must be > 0");
            }
        }
    }
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace

TransitionModel Scenario::transition_for(const TargetConfig& target) const {
    return TransitionModel(frame_interval, target.q_intensity.value_or(q_intensity));
}

void validate(const Scenario& scenario) {
    std::vector<std::string> errors;
    collect_violations(scenario, errors);
    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
}

Scenario parse_scenario(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_and_column(text, e.byte);
        throw ParseError(e.what(), line, column);
    }
    if (!root.is_object()) {
        throw ValidationError("<root>", "expected a JSON object");
    }

    FieldReader rd;
    Scenario s;
    if (auto v = rd.integer(root, "frame_count", "frame_count")) s.frame_count = static_cast<int>(std::clamp<std::int64_t>(*v, -1, 1 << 30));
    if (auto v = rd.number(root, "frame_interval", "frame_interval")) s.frame_interval = *v;
    if (auto v = rd.number(root, "process_noise_intensity", "process_noise_intensity")) s.q_intensity = *v;
    if (auto v = rd.unsigned_integer(root, "master_seed", "master_seed", false)) s.master_seed = *v;
    read_noise_model(rd, root, s.noise);
    read_radars(rd, root, s.radars);
    read_targets(rd, root, s.targets);
    read_options(rd, root, s);

    collect_violations(s, rd.errors);
    if (!rd.errors.empty()) {
        throw ValidationError(std::move(rd.errors));
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path.string(), "cannot open scenario file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError(path.string(), "failed reading scenario file");
    }
    return parse_scenario(buffer.str());
}

nlohmann::json to_json(const Scenario& s) {
    json radars = json::array();
    for (const auto& r : s.radars) {
        radars.push_back({{"id", r.id},
                          {"position", {r.pos_x, r.pos_y}},
                          {"wavelength", r.wavelength},
                          {"p_detect", r.p_detect},
                          {"clutter_density", r.clutter_density},
                          {"gate_threshold", r.gate_threshold}});
    }
    json targets = json::array();
    for (const auto& t : s.targets) {
        json cov = json::array();
        for (int i = 0; i < kStateDim; ++i) {
            cov.push_back(state_json(t.initial_cov.row(i).transpose()));
        }
        json beams = json::array();
        for (const auto& b : t.beams) {
            beams.push_back({{"radar", b.radar_id}, {"power", b.power}});
        }
        json target = {{"id", t.id},
                       {"initial_state", state_json(t.initial_state)},
                       {"initial_covariance", cov},
                       {"beams", beams}};
        if (t.initial_estimate) {
            target["initial_estimate"] = state_json(*t.initial_estimate);
        }
        if (t.q_intensity) {
            target["process_noise_intensity"] = *t.q_intensity;
        }
        targets.push_back(std::move(target));
    }
    return {
        {"frame_count", s.frame_count},
        {"frame_interval", s.frame_interval},
        {"process_noise_intensity", s.q_intensity},
        {"master_seed", s.master_seed},
        {"noise_model",
         {{"sigma_range_ref", s.noise.sigma_r_ref},
          {"sigma_bearing_ref", s.noise.sigma_theta_ref},
          {"sigma_doppler_ref", s.noise.sigma_f_ref},
          {"power_ref", s.noise.p_ref},
          {"exponents", {s.noise.exponent[0], s.noise.exponent[1], s.noise.exponent[2]}}}},
        {"radars", radars},
        {"targets", targets},
        {"options",
         {{"fusion_mode", s.fusion_mode == FusionMode::normalized ? "normalized" : "paper_literal"},
          {"bound_evaluation", s.bound_point == BoundPoint::truth ? "truth" : "estimate"}}},
    };
}

std::string scenario_hash(const Scenario& scenario) {
    const std::string canonical = to_json(scenario).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pdaf
