#include "pdafusion/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pdafusion/errors.hpp"

namespace pdaf {
namespace {

using nlohmann::json;

constexpr const char* kStateSuffix[kStateDim] = {"x", "vx", "y", "vy"};

void append_double(std::string& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.emplace_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

double parse_double(const std::string& cell) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') {
        throw ValidationError("csv", "not a number: '" + cell + "'");
    }
    return v;
}

/// Yields the data rows of a CSV table after checking its header.
std::vector<std::vector<std::string>> read_table(std::string_view text,
                                                 const std::vector<std::string>& columns) {
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) {
            eol = text.size();
        }
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (header) {
            if (cells != columns) {
                throw ValidationError("csv", "unexpected header");
            }
            header = false;
            continue;
        }
        if (cells.size() != columns.size()) {
            throw ValidationError("csv", "row has " + std::to_string(cells.size()) + " cells, expected " +
                                             std::to_string(columns.size()));
        }
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string join_header(const std::vector<std::string>& columns) {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += columns[i];
    }
    out += '\n';
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path.string(), "cannot open for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
        throw IoError(path.string(), "write failed");
    }
}

json vec_json(const MeasVector& v) {
    return json::array({v(0), v(1), v(2)});
}

MeasVector vec_from_json(const json& j) {
    return MeasVector(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

json measurement_json(const Measurement& m) {
    return {{"radar_id", m.radar_id},
            {"z", vec_json(m.z)},
            {"noise_diag", vec_json(m.noise_cov.diagonal())}};
}

Measurement measurement_from_json(const json& j) {
    Measurement m;
    m.radar_id = j.at("radar_id").get<int>();
    m.z = vec_from_json(j.at("z"));
    m.noise_cov = vec_from_json(j.at("noise_diag")).asDiagonal();
    return m;
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json") {
        return OutputFormat::json;
    }
    throw ValidationError("format", "expected csv or json, got '" + std::string(name) + "'");
}

OutputFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".json" ? OutputFormat::json : OutputFormat::csv;
}

const std::vector<std::string>& run_csv_columns() {
    static const std::vector<std::string> columns = [] {
        std::vector<std::string> c{"frame", "target"};
        for (const char* prefix : {"truth_", "est_", "P_", "bound_"}) {
            for (const char* s : kStateSuffix) {
                c.push_back(std::string(prefix) + s);
            }
        }
        c.push_back("nees");
        c.push_back("beta_none");
        return c;
    }();
    return columns;
}

const std::vector<std::string>& summary_csv_columns() {
    static const std::vector<std::string> columns{
        "frame",     "target",    "pos_rmse",  "vel_rmse", "pos_bound",
        "vel_bound", "mean_nees", "mean_bound_trace", "runs"};
    return columns;
}

std::string to_csv(const RunRecord& record) {
    std::string out = join_header(run_csv_columns());
    for (const auto& r : record.rows) {
        out += std::to_string(r.frame);
        out += ',';
        out += std::to_string(r.target);
        for (const StateVector* v : {&r.truth, &r.estimate, &r.cov_diag, &r.bound_diag}) {
            for (int i = 0; i < kStateDim; ++i) {
                out += ',';
                append_double(out, (*v)(i));
            }
        }
        out += ',';
        append_double(out, r.nees);
        out += ',';
        append_double(out, r.beta_none);
        out += '\n';
    }
    return out;
}

std::string to_csv(const MonteCarloSummary& summary) {
    std::string out = join_header(summary_csv_columns());
    for (const auto& r : summary.rows) {
        out += std::to_string(r.frame);
        out += ',';
        out += std::to_string(r.target);
        for (const double v : {r.pos_rmse, r.vel_rmse, r.pos_bound, r.vel_bound, r.mean_nees,
                               r.mean_bound_trace}) {
            out += ',';
            append_double(out, v);
        }
        out += ',';
        out += std::to_string(r.runs);
        out += '\n';
    }
    return out;
}

std::vector<RunRow> run_rows_from_csv(std::string_view text) {
    std::vector<RunRow> rows;
    for (const auto& cells : read_table(text, run_csv_columns())) {
        RunRow r;
        r.frame = static_cast<int>(parse_double(cells[0]));
        r.target = static_cast<int>(parse_double(cells[1]));
        std::size_t c = 2;
        for (StateVector* v : {&r.truth, &r.estimate, &r.cov_diag, &r.bound_diag}) {
            for (int i = 0; i < kStateDim; ++i) {
                (*v)(i) = parse_double(cells[c++]);
            }
        }
        r.nees = parse_double(cells[c++]);
        r.beta_none = parse_double(cells[c++]);
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<SummaryRow> summary_rows_from_csv(std::string_view text) {
    std::vector<SummaryRow> rows;
    for (const auto& cells : read_table(text, summary_csv_columns())) {
        SummaryRow r;
        r.frame = static_cast<int>(parse_double(cells[0]));
        r.target = static_cast<int>(parse_double(cells[1]));
        r.pos_rmse = parse_double(cells[2]);
        r.vel_rmse = parse_double(cells[3]);
        r.pos_bound = parse_double(cells[4]);
        r.vel_bound = parse_double(cells[5]);
        r.mean_nees = parse_double(cells[6]);
        r.mean_bound_trace = parse_double(cells[7]);
        r.runs = static_cast<int>(parse_double(cells[8]));
        rows.push_back(r);
    }
    return rows;
}

json to_json(const RunRecord& record) {
    json rows = json::array();
    for (const auto& r : record.rows) {
        json row = {{"frame", r.frame}, {"target", r.target}};
        const std::pair<const char*, const StateVector*> groups[] = {
            {"truth_", &r.truth}, {"est_", &r.estimate}, {"P_", &r.cov_diag}, {"bound_", &r.bound_diag}};
        for (const auto& [prefix, v] : groups) {
            for (int i = 0; i < kStateDim; ++i) {
                row[std::string(prefix) + kStateSuffix[i]] = (*v)(i);
            }
        }
        row["nees"] = r.nees;
        row["beta_none"] = r.beta_none;
        json assoc = json::array();
        for (const auto& a : r.association) {
            assoc.push_back({{"radar_id", a.radar_id},
                             {"candidates", a.candidates},
                             {"beta_none", a.beta_none},
                             {"beta", a.beta}});
        }
        row["association"] = std::move(assoc);
        rows.push_back(std::move(row));
    }
    return {{"scenario_hash", record.scenario_hash},
            {"master_seed", record.master_seed},
            {"run_index", record.run_index},
            {"seed", record.seed},
            {"gate_overlap_warnings", record.gate_overlap_warnings},
            {"rows", std::move(rows)}};
}

RunRecord run_record_from_json(const json& j) {
    RunRecord record;
    record.scenario_hash = j.at("scenario_hash").get<std::string>();
    record.master_seed = j.at("master_seed").get<std::uint64_t>();
    record.run_index = j.at("run_index").get<std::uint64_t>();
    record.seed = j.at("seed").get<std::uint64_t>();
    record.gate_overlap_warnings = j.at("gate_overlap_warnings").get<int>();
    for (const auto& row : j.at("rows")) {
        RunRow r;
        r.frame = row.at("frame").get<int>();
        r.target = row.at("target").get<int>();
        const std::pair<const char*, StateVector*> groups[] = {
            {"truth_", &r.truth}, {"est_", &r.estimate}, {"P_", &r.cov_diag}, {"bound_", &r.bound_diag}};
        for (const auto& [prefix, v] : groups) {
            for (int i = 0; i < kStateDim; ++i) {
                (*v)(i) = row.at(std::string(prefix) + kStateSuffix[i]).get<double>();
            }
        }
        r.nees = row.at("nees").get<double>();
        r.beta_none = row.at("beta_none").get<double>();
        for (const auto& a : row.at("association")) {
            r.association.push_back(RadarAssociation{a.at("radar_id").get<int>(),
                                                     a.at("candidates").get<int>(),
                                                     a.at("beta_none").get<double>(),
                                                     a.at("beta").get<std::vector<double>>()});
        }
        record.rows.push_back(std::move(r));
    }
    return record;
}

json to_json(const MonteCarloSummary& summary) {
    json rows = json::array();
    for (const auto& r : summary.rows) {
        rows.push_back({{"frame", r.frame},
                        {"target", r.target},
                        {"pos_rmse", r.pos_rmse},
                        {"vel_rmse", r.vel_rmse},
                        {"pos_bound", r.pos_bound},
                        {"vel_bound", r.vel_bound},
                        {"mean_nees", r.mean_nees},
                        {"mean_bound_trace", r.mean_bound_trace},
                        {"runs", r.runs}});
    }
    return {{"scenario_hash", summary.scenario_hash},
            {"master_seed", summary.master_seed},
            {"runs_requested", summary.runs_requested},
            {"runs_failed", summary.runs_failed},
            {"aborted", summary.aborted},
            {"failures", summary.failures},
            {"rows", std::move(rows)}};
}

MonteCarloSummary summary_from_json(const json& j) {
    MonteCarloSummary s;
    s.scenario_hash = j.at("scenario_hash").get<std::string>();
    s.master_seed = j.at("master_seed").get<std::uint64_t>();
    s.runs_requested = j.at("runs_requested").get<int>();
    s.runs_failed = j.at("runs_failed").get<int>();
    s.aborted = j.at("aborted").get<bool>();
    s.failures = j.at("failures").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows")) {
        s.rows.push_back(SummaryRow{row.at("frame").get<int>(),
                                    row.at("target").get<int>(),
                                    row.at("pos_rmse").get<double>(),
                                    row.at("vel_rmse").get<double>(),
                                    row.at("pos_bound").get<double>(),
                                    row.at("vel_bound").get<double>(),
                                    row.at("mean_nees").get<double>(),
                                    row.at("mean_bound_trace").get<double>(),
                                    row.at("runs").get<int>()});
    }
    return s;
}

json to_json(const FrameData& frame) {
    json truths = json::array();
    for (const auto& t : frame.truths) {
        truths.push_back({t(0), t(1), t(2), t(3)});
    }
    json detections = json::array();
    for (const auto& d : frame.detections) {
        detections.push_back({{"radar_id", d.radar_id},
                              {"target", d.target_index},
                              {"measurement", d.measurement ? measurement_json(*d.measurement) : json(nullptr)}});
    }
    json clutter = json::array();
    for (const auto& c : frame.clutter) {
        json points = json::array();
        for (const auto& m : c.points) {
            points.push_back(measurement_json(m));
        }
        clutter.push_back({{"radar_id", c.radar_id}, {"target", c.target_index}, {"points", points}});
    }
    return {{"frame_index", frame.frame_index},
            {"truths", truths},
            {"detections", detections},
            {"clutter", clutter}};
}

FrameData frame_data_from_json(const json& j) {
    FrameData frame;
    frame.frame_index = j.at("frame_index").get<int>();
    for (const auto& t : j.at("truths")) {
        frame.truths.emplace_back(t.at(0).get<double>(), t.at(1).get<double>(),
                                  t.at(2).get<double>(), t.at(3).get<double>());
    }
    for (const auto& d : j.at("detections")) {
        DetectionSlot slot{d.at("radar_id").get<int>(), d.at("target").get<int>(), std::nullopt};
        if (!d.at("measurement").is_null()) {
            slot.measurement = measurement_from_json(d.at("measurement"));
        }
        frame.detections.push_back(std::move(slot));
    }
    for (const auto& c : j.at("clutter")) {
        ClutterSet set{c.at("radar_id").get<int>(), c.at("target").get<int>(), {}};
        for (const auto& p : c.at("points")) {
            set.points.push_back(measurement_from_json(p));
        }
        frame.clutter.push_back(std::move(set));
    }
    return frame;
}

void emit(const RunRecord& record, OutputFormat format, const std::filesystem::path& path) {
    write_file(path, format == OutputFormat::csv ? to_csv(record) : to_json(record).dump(2) + "\n");
}

void emit(const MonteCarloSummary& summary, OutputFormat format,
          const std::filesystem::path& path) {
    write_file(path, format == OutputFormat::csv ? to_csv(summary) : to_json(summary).dump(2) + "\n");
}

}  // namespace pdaf
