// Copyright 2026 The SES Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file io.hpp
 * File formats and JSON encodings.
 *
 * Matrix files are plain text:
 *
 *     ses-matrix v1 <n> <units>
 *     <n rows of n whitespace-separated decimals>
 *
 * with units one of 2pi-MHz (ordinary frequency, multiplied by 2 pi on
 * load), rad-per-us, dimensionless. Lines starting with '#' are ignored.
 * The upper triangle is authoritative; asymmetry beyond 1e-12 relative is
 * rejected.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "algorithms.hpp"
#include "bench.hpp"
#include "compiler.hpp"
#include "hashing.hpp"
#include "types.hpp"

namespace ses {

using Json = nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Matrix files
// ---------------------------------------------------------------------------

enum class MatrixUnits { TwoPiMHz, RadPerUs, Dimensionless };

inline std::string to_string(MatrixUnits u) {
    switch (u) {
        case MatrixUnits::TwoPiMHz: return "2pi-MHz";
        case MatrixUnits::RadPerUs: return "rad-per-us";
        case MatrixUnits::Dimensionless: return "dimensionless";
    }
    return "?";
}

struct MatrixFile {
    MatrixUnits units;
    RealMatrix values;  // as written in the file

    /// Values in internal units (rad/us for physical units).
    RealMatrix internal() const { return units == MatrixUnits::TwoPiMHz ? RealMatrix(kTwoPi * values) : values; }
    TargetHamiltonian target() const { return TargetHamiltonian(internal(), to_string(units)); }
};

inline MatrixFile parse_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            return true;
        }
        return false;
    };

    if (!next_line()) throw ParseError(line_no + 1, "missing 'ses-matrix v1 <n> <units>' header");
    std::istringstream header(line);
    std::string magic, version, units_tag, extra;
    long long n = 0;
    if (!(header >> magic >> version) || magic != "ses-matrix" || version != "v1")
        throw ParseError(line_no, "header must start with 'ses-matrix v1'");
    if (!(header >> n) || n < 1) throw ParseError(line_no, "header dimension must be a positive integer");
    if (!(header >> units_tag)) throw ParseError(line_no, "header is missing the units tag");
    if (header >> extra) throw ParseError(line_no, "unexpected trailing header token '" + extra + "'");
    MatrixUnits units;
    if (units_tag == "2pi-MHz") units = MatrixUnits::TwoPiMHz;
    else if (units_tag == "rad-per-us") units = MatrixUnits::RadPerUs;
    else if (units_tag == "dimensionless") units = MatrixUnits::Dimensionless;
    else throw ParseError(line_no, "unknown units tag '" + units_tag + "'");

    const auto dim = static_cast<Eigen::Index>(n);
    RealMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (!next_line()) throw ParseError(line_no + 1, "expected " + std::to_string(n) + " matrix rows, got " + std::to_string(i));
        std::istringstream row(line);
        std::string token;
        Eigen::Index j = 0;
        while (row >> token) {
            if (j >= dim) throw ParseError(line_no, "row has more than " + std::to_string(n) + " entries");
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size() || !std::isfinite(v)) throw ParseError(line_no, "invalid number '" + token + "'");
            m(i, j++) = v;
        }
        if (j != dim) throw ParseError(line_no, "row has " + std::to_string(j) + " entries, expected " + std::to_string(n));
    }
    if (next_line()) throw ParseError(line_no, "unexpected content after matrix rows");
    return {units, std::move(m)};
}

inline MatrixFile read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open matrix file " + path.string());
    return parse_matrix(in);
}

inline void write_matrix(std::ostream& out, const RealMatrix& m, MatrixUnits units) {
    out << "ses-matrix v1 " << m.rows() << ' ' << to_string(units) << '\n';
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << m(i, j);
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// JSON encodings
// ---------------------------------------------------------------------------

inline Json to_json(const RealVector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

inline RealVector real_vector_from_json(const Json& j) {
    const auto v = j.get<std::vector<double>>();
    return Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline Json to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(RealVector(m.row(i).transpose())));
    return rows;
}

inline RealMatrix real_matrix_from_json(const Json& j) {
    const auto n = static_cast<Eigen::Index>(j.size());
    RealMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const RealVector row = real_vector_from_json(j.at(static_cast<std::size_t>(i)));
        if (row.size() != n) throw DimensionMismatch("matrix JSON must be square");
        m.row(i) = row.transpose();
    }
    return m;
}

/// Amplitudes as [re, im] pairs.
inline Json to_json(const ComplexVector& v) {
    Json a = Json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back({v(k).real(), v(k).imag()});
    return a;
}

inline ComplexVector complex_vector_from_json(const Json& j) {
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        const auto& pair = j.at(k);
        if (!pair.is_array() || pair.size() != 2) throw InvalidArgument("amplitudes must be [re, im] pairs");
        v(static_cast<Eigen::Index>(k)) = {pair.at(0).get<double>(), pair.at(1).get<double>()};
    }
    return v;
}

inline Json to_json(const SesState& s) { return {{"n", s.n()}, {"amplitudes", to_json(s.amplitudes())}}; }

inline SesState ses_state_from_json(const Json& j) {
    SesState s(complex_vector_from_json(j.at("amplitudes")));
    if (j.contains("n") && j.at("n").get<std::size_t>() != s.n()) throw DimensionMismatch("state n disagrees with amplitudes");
    return s;
}

inline Json to_json(const HardwareBounds& b) {
    return {{"g_max", b.g_max}, {"eps_min", b.eps_min}, {"eps_max", b.eps_max}};
}

inline HardwareBounds bounds_from_json(const Json& j) {
    return {j.at("g_max").get<double>(), j.at("eps_min").get<double>(), j.at("eps_max").get<double>()};
}

inline Json to_json(const DeviceParams& d) {
    return {{"n", d.n()}, {"epsilon", to_json(d.epsilon())}, {"g", to_json(d.g())}, {"bounds", to_json(d.bounds())}};
}

inline DeviceParams device_from_json(const Json& j) {
    return DeviceParams(real_vector_from_json(j.at("epsilon")), real_matrix_from_json(j.at("g")),
                        bounds_from_json(j.at("bounds")));
}

inline Json to_json(const CompiledProgram& p) {
    return {{"device", to_json(p.device)}, {"lambda", p.lambda}, {"shift", p.shift},   {"t_sim", p.t_sim},
            {"t_qc", p.t_qc},              {"t_meas", p.t_meas}, {"t_qu", p.t_qu},     {"relaxed", p.relaxed},
            {"h_qc", to_json(p.scaled)}};
}

inline CompiledProgram compiled_program_from_json(const Json& j) {
    return {device_from_json(j.at("device")), j.at("lambda").get<double>(), j.at("shift").get<double>(),
            j.at("t_sim").get<double>(),      j.at("t_qc").get<double>(),   j.at("t_meas").get<double>(),
            j.at("t_qu").get<double>(),       j.at("relaxed").get<bool>(), real_matrix_from_json(j.at("h_qc"))};
}

inline Json to_json(const MeasurementRecord& m) {
    return {{"outcome", m.outcome}, {"probabilities", to_json(m.probabilities)}, {"seed", m.seed}};
}

inline MeasurementRecord measurement_from_json(const Json& j) {
    return {j.at("outcome").get<std::size_t>(), real_vector_from_json(j.at("probabilities")),
            j.at("seed").get<std::uint64_t>()};
}

inline std::string to_string(GroverMode m) { return m == GroverMode::Device ? "device" : "math"; }

inline GroverMode parse_grover_mode(const std::string& s) {
    if (s == "device") return GroverMode::Device;
    if (s == "math") return GroverMode::Math;
    throw InvalidArgument("unknown Grover mode '" + s + "'");
}

inline Json to_json(const GroverRun& r) {
    return {{"n", r.n},
            {"marked", r.marked},
            {"iterations", r.iterations},
            {"g", r.g},
            {"mode", to_string(r.mode)},
            {"trajectory", r.trajectory},
            {"state", to_json(r.state)},
            {"probabilities", to_json(r.state.probabilities())},
            {"global_phase", r.global_phase},
            {"protocol_time", r.protocol_time},
            {"measurement", to_json(r.measurement)}};
}

inline GroverRun grover_run_from_json(const Json& j) {
    return {j.at("n").get<std::size_t>(),
            j.at("marked").get<std::size_t>(),
            j.at("iterations").get<std::size_t>(),
            j.at("g").get<double>(),
            parse_grover_mode(j.at("mode").get<std::string>()),
            j.at("trajectory").get<std::vector<double>>(),
            ses_state_from_json(j.at("state")),
            j.at("global_phase").get<double>(),
            j.at("protocol_time").get<double>(),
            measurement_from_json(j.at("measurement"))};
}

inline Json to_json(const TimingSample& s) {
    return {{"median", s.median}, {"min", s.min}, {"max", s.max}, {"batch", s.batch}, {"steps", s.steps}};
}

inline TimingSample timing_sample_from_json(const Json& j) {
    return {j.at("median").get<double>(), j.at("min").get<double>(), j.at("max").get<double>(),
            j.at("batch").get<std::size_t>(), j.at("steps").get<std::size_t>()};
}

inline Json to_json(const CrossoverRow& r) {
    Json raw = Json::array();
    for (const auto& t : r.raw) raw.push_back({{"kind", t.kind}, {"n", t.n}, {"t_qc", t.t_qc}, {"sample", to_json(t.sample)}});
    return {{"n", r.n},
            {"ode_slope", r.ode_slope},
            {"ode_intercept", r.ode_intercept},
            {"diag_time", r.diag_time},
            {"diag_cv", r.diag_cv},
            {"t_star", r.t_star ? Json(*r.t_star) : Json(nullptr)},
            {"fit_r2", r.fit_r2},
            {"valid", r.valid},
            {"widened", r.widened},
            {"t_qc_list", r.t_qc_list},
            {"workload_hash", r.workload_hash},
            {"note", r.note},
            {"raw", raw}};
}

inline CrossoverRow crossover_row_from_json(const Json& j) {
    CrossoverRow r;
    r.n = j.at("n").get<std::size_t>();
    r.ode_slope = j.at("ode_slope").get<double>();
    r.ode_intercept = j.at("ode_intercept").get<double>();
    r.diag_time = j.at("diag_time").get<double>();
    r.diag_cv = j.at("diag_cv").get<double>();
    if (!j.at("t_star").is_null()) r.t_star = j.at("t_star").get<double>();
    r.fit_r2 = j.at("fit_r2").get<double>();
    r.valid = j.at("valid").get<bool>();
    r.widened = j.at("widened").get<bool>();
    r.t_qc_list = j.at("t_qc_list").get<std::vector<double>>();
    r.workload_hash = j.at("workload_hash").get<std::string>();
    r.note = j.at("note").get<std::string>();
    for (const auto& t : j.at("raw"))
        r.raw.push_back({t.at("kind").get<std::string>(), t.at("n").get<std::size_t>(), t.at("t_qc").get<double>(),
                         timing_sample_from_json(t.at("sample"))});
    return r;
}

inline Json to_json(const MachineDescriptor& m) {
    return {{"hostname", m.hostname},           {"cpu_model", m.cpu_model}, {"hardware_threads", m.hardware_threads},
            {"compiler", m.compiler},           {"eigen_version", m.eigen_version},
            {"exclusive_mode", m.exclusive_mode}};
}

inline MachineDescriptor machine_from_json(const Json& j) {
    return {j.at("hostname").get<std::string>(), j.at("cpu_model").get<std::string>(),
            j.at("hardware_threads").get<unsigned>(), j.at("compiler").get<std::string>(),
            j.at("eigen_version").get<std::string>(), j.at("exclusive_mode").get<bool>()};
}

inline Json to_json(const CrossoverReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back(to_json(row));
    Json speedup = Json::array();
    for (const auto& s : r.speedup)
        speedup.push_back({{"n", s.n},
                           {"t_qc", s.t_qc},
                           {"t_qu", s.t_qu},
                           {"diag_time", s.diag_time},
                           {"classical_bound_us", s.classical_bound_us},
                           {"condition", s.condition}});
    return {{"rows", rows},
            {"speedup", speedup},
            {"environment", to_json(r.environment)},
            {"t_meas", r.t_meas},
            {"parallel_cores", r.parallel_cores},
            {"theta_max", r.theta_max},
            {"published_reference",
             {{"n", PublishedReference::n},
              {"t_star_us", PublishedReference::t_star_us},
              {"diag_seconds", PublishedReference::diag_seconds},
              {"note", "single-core 2012 hardware values, reported for comparison only"}}}};
}

inline CrossoverReport crossover_report_from_json(const Json& j) {
    CrossoverReport r;
    for (const auto& row : j.at("rows")) r.rows.push_back(crossover_row_from_json(row));
    for (const auto& s : j.at("speedup"))
        r.speedup.push_back({s.at("n").get<std::size_t>(), s.at("t_qc").get<double>(), s.at("t_qu").get<double>(),
                             s.at("diag_time").get<double>(), s.at("classical_bound_us").get<double>(),
                             s.at("condition").get<bool>()});
    r.environment = machine_from_json(j.at("environment"));
    r.t_meas = j.at("t_meas").get<double>();
    r.parallel_cores = j.at("parallel_cores").get<double>();
    r.theta_max = j.at("theta_max").get<double>();
    return r;
}

// ---------------------------------------------------------------------------
// Bench configuration
// ---------------------------------------------------------------------------

struct SyntheticTimingSpec {
    double intercept_s;
    double slope_s_per_us;
    double diag_s;
    double curvature_s_per_us2 = 0.0;
};

struct BenchJobConfig {
    BenchConfig bench;
    std::optional<SyntheticTimingSpec> synthetic;  // test hook: replaces measured timings
};

inline BenchJobConfig bench_config_from_json(const Json& j) {
    static const std::vector<std::string> known = {
        "n_list",         "t_qc_list_us",   "g_max_mhz",        "repetitions",  "seed",
        "exclusive_mode", "theta_max",      "t_meas_us",        "parallel_cores", "min_cell_seconds",
        "r2_threshold",   "synthetic_timing"};
    if (!j.is_object()) throw SchemaError("bench config must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) throw SchemaError("unknown config key '" + key + "'");
    for (const char* required : {"n_list", "t_qc_list_us"})
        if (!j.contains(required)) throw SchemaError(std::string("missing required key '") + required + "'");

    BenchJobConfig out;
    auto& c = out.bench;
    try {
        c.n_list = j.at("n_list").get<std::vector<std::size_t>>();
        c.t_qc_list = j.at("t_qc_list_us").get<std::vector<double>>();
        if (j.contains("g_max_mhz")) c.g_max = mhz_to_rad_per_us(j.at("g_max_mhz").get<double>());
        if (j.contains("repetitions")) c.repetitions = j.at("repetitions").get<std::size_t>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("exclusive_mode")) c.exclusive_mode = j.at("exclusive_mode").get<bool>();
        if (j.contains("theta_max")) c.theta_max = j.at("theta_max").get<double>();
        if (j.contains("t_meas_us")) c.t_meas = j.at("t_meas_us").get<double>();
        if (j.contains("parallel_cores")) c.parallel_cores = j.at("parallel_cores").get<double>();
        if (j.contains("min_cell_seconds")) c.min_cell_seconds = j.at("min_cell_seconds").get<double>();
        if (j.contains("r2_threshold")) c.r2_threshold = j.at("r2_threshold").get<double>();
        if (j.contains("synthetic_timing")) {
            const auto& s = j.at("synthetic_timing");
            for (const auto& [key, value] : s.items())
                if (key != "intercept_s" && key != "slope_s_per_us" && key != "diag_s" && key != "curvature_s_per_us2")
                    throw SchemaError("unknown synthetic_timing key '" + key + "'");
            out.synthetic = SyntheticTimingSpec{s.at("intercept_s").get<double>(), s.at("slope_s_per_us").get<double>(),
                                                s.at("diag_s").get<double>(),
                                                s.value("curvature_s_per_us2", 0.0)};
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("bench config: ") + e.what());
    }
    c.validate();
    if (!c.spans_decade()) throw SchemaError("t_qc_list_us must span at least one decade");
    return out;
}

inline Json to_json(const BenchConfig& c) {
    return {{"n_list", c.n_list},
            {"t_qc_list_us", c.t_qc_list},
            {"g_max_mhz", rad_per_us_to_mhz(c.g_max)},
            {"repetitions", c.repetitions},
            {"seed", c.seed},
            {"exclusive_mode", c.exclusive_mode},
            {"theta_max", c.theta_max},
            {"t_meas_us", c.t_meas},
            {"parallel_cores", c.parallel_cores},
            {"min_cell_seconds", c.min_cell_seconds},
            {"r2_threshold", c.r2_threshold}};
}

// ---------------------------------------------------------------------------
// Run manifests
// ---------------------------------------------------------------------------

inline std::string hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot open " + path.string());
    Fnv1a h;
    char buf[1 << 14];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) h.update(buf, static_cast<std::size_t>(in.gcount()));
    return h.hex();
}

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

struct RunManifest {
    std::string command;
    std::vector<std::string> arguments;
    Json config;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, content hash
    std::uint64_t seed = 0;
    std::string tool_version = kToolVersion;
    std::string timestamp = utc_timestamp();
    std::vector<std::string> outputs;

    Json to_json() const {
        Json in = Json::array();
        for (const auto& [path, hash] : inputs) in.push_back({{"path", path}, {"fnv1a64", hash}});
        return {{"command", command}, {"arguments", arguments}, {"config", config},         {"inputs", in},
                {"seed", seed},       {"tool_version", tool_version}, {"timestamp", timestamp}, {"outputs", outputs}};
    }
};

}  // namespace ses
