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
 * @file cli.hpp
 * Subcommands of the `ses` command-line tool. Each one parses flags, calls
 * the library and writes its results plus a run manifest into the output
 * directory ($SES_OUTPUT_DIR, default: current directory).
 *
 * Exit codes: 0 ok, 1 internal error, 2 parse error (input files or flags),
 * 3 infeasible hardware bounds, 4 asymmetric matrix, 5 dimension mismatch,
 * 6 argument out of range, 7 problem too large for the full model,
 * 8 bench config schema violation.
 */
#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "algorithms.hpp"
#include "bench.hpp"
#include "compiler.hpp"
#include "evolution.hpp"
#include "io.hpp"
#include "leakage.hpp"

namespace ses::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kParse = 2,
    kInfeasible = 3,
    kAsymmetric = 4,
    kDimension = 5,
    kRange = 6,
    kTooLarge = 7,
    kSchema = 8,
};

/// Collects output files and writes the run manifest alongside them.
class OutputSink {
public:
    explicit OutputSink(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    static OutputSink from_environment() {
        const char* env = std::getenv("SES_OUTPUT_DIR");
        return OutputSink(env && *env ? std::filesystem::path(env) : std::filesystem::current_path());
    }

    std::filesystem::path write_text(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << content;
        outputs_.push_back(path.string());
        return path;
    }

    std::filesystem::path write_json(const std::string& name, const Json& j) { return write_text(name, j.dump(2) + "\n"); }

    void write_manifest(RunManifest manifest, const std::string& result_name) {
        manifest.outputs = outputs_;
        const auto stem = std::filesystem::path(result_name).stem().string();
        const auto path = dir_ / (stem + ".manifest.json");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path.string());
        out << manifest.to_json().dump(2) << '\n';
    }

    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<std::string> outputs_;
};

/// "basis:<i>", "uniform", or the path of a state JSON file.
inline SesState parse_state_spec(const std::string& spec, std::size_t n) {
    if (spec == "uniform") return uniform_state(n);
    if (spec.rfind("basis:", 0) == 0) {
        std::size_t label = 0;
        try {
            label = std::stoul(spec.substr(6));
        } catch (const std::exception&) {
            throw ParseError(0, "invalid basis state spec '" + spec + "'");
        }
        return ses_basis_state(n, label);
    }
    std::ifstream in(spec);
    if (!in) throw ParseError(0, "cannot open state file " + spec);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(0, std::string("state file: ") + e.what());
    }
    SesState s = ses_state_from_json(j);
    if (s.n() != n) throw DimensionMismatch("state has n=" + std::to_string(s.n()) + ", Hamiltonian has n=" + std::to_string(n));
    return s;
}

inline std::vector<std::pair<std::string, std::string>> input_hashes(const std::vector<std::string>& paths) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : paths)
        if (std::filesystem::is_regular_file(p)) out.emplace_back(p, hash_file(p));
    return out;
}

inline HardwareBounds bounds_from_flags(double g_max_mhz, const std::vector<double>& eps_range_mhz) {
    if (eps_range_mhz.size() != 2) throw InvalidArgument("--eps-range takes two values");
    HardwareBounds b{mhz_to_rad_per_us(g_max_mhz), mhz_to_rad_per_us(eps_range_mhz[0]), mhz_to_rad_per_us(eps_range_mhz[1])};
    b.validate();
    return b;
}

// ---------------------------------------------------------------------------

struct CompileArgs {
    std::string matrix;
    double g_max_mhz = 100.0;
    std::vector<double> eps_range_mhz{5000.0, 6000.0};
    double t_sim = 1.0;
    double t_meas = 0.1;
    bool auto_relax = false;
    std::string output = "compile.json";
};

inline Json compile_result(const CompileArgs& a) {
    const MatrixFile file = read_matrix_file(a.matrix);
    const CompiledProgram p = compile(file.target(), bounds_from_flags(a.g_max_mhz, a.eps_range_mhz), a.t_sim, a.t_meas,
                                      CompileOptions{a.auto_relax});
    Json j = to_json(p);
    j["units"] = to_string(file.units);
    return j;
}

struct EvolveArgs {
    std::string matrix;
    std::string state = "basis:1";
    double t = 0.0;
    std::string method = "eigen";
    double theta_max = kDefaultThetaMax;
    bool compare = false;
    std::string output = "evolve.json";
};

inline Json evolve_result(const EvolveArgs& a) {
    const MatrixFile file = read_matrix_file(a.matrix);
    const SesHamiltonian h = file.target().as_ses();
    const SesState psi = parse_state_spec(a.state, h.n());
    if (a.method != "eigen" && a.method != "ode") throw InvalidArgument("--method must be eigen or ode");
    const Method method = a.method == "eigen" ? Method::EigenExact : Method::OdeRk4;

    const auto t0 = std::chrono::steady_clock::now();
    const OdeResult r = Propagator(h, method, a.theta_max).evolve(psi, a.t);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json j{{"n", h.n()},
           {"t", a.t},
           {"method", a.method},
           {"theta_max", a.theta_max},
           {"state", to_json(r.state)},
           {"norm_drift", r.norm_drift},
           {"steps", r.steps},
           {"wall_time_s", wall},
           {"units", to_string(file.units)}};
    if (a.compare) {
        const Method other = method == Method::EigenExact ? Method::OdeRk4 : Method::EigenExact;
        const OdeResult o = Propagator(h, other, a.theta_max).evolve(psi, a.t);
        j["comparison"] = {{"method", other == Method::EigenExact ? "eigen" : "ode"},
                           {"fidelity", fidelity(r.state, o.state)},
                           {"norm_drift", o.norm_drift}};
    }
    return j;
}

struct PrepArgs {
    std::size_t n = 4;
    double g_mhz = 100.0;
    std::string output = "prep-unif.json";
};

inline Json prep_result(const PrepArgs& a) {
    const PrepResult r = prep_uniform(a.n, mhz_to_rad_per_us(a.g_mhz));
    return {{"n", a.n},
            {"g", mhz_to_rad_per_us(a.g_mhz)},
            {"t_qu", r.t_qu},
            {"state", to_json(r.state)},
            {"fidelity_to_uniform", fidelity(r.state, uniform_state(a.n))}};
}

struct GroverArgs {
    std::size_t n = 4;
    std::size_t marked = 1;
    double g_mhz = 100.0;
    std::optional<std::size_t> iterations;
    std::uint64_t seed = 0;
    std::string mode = "device";
    std::string output = "grover.json";
};

inline Json grover_result(const GroverArgs& a) {
    GroverOptions opts;
    opts.iterations = a.iterations;
    opts.mode = parse_grover_mode(a.mode);
    opts.seed = a.seed;
    const GroverRun run = grover_search(a.n, a.marked, mhz_to_rad_per_us(a.g_mhz), opts);
    Json j = to_json(run);
    j["analytic_final_probability"] = grover_success_probability(a.n, run.iterations);
    return j;
}

struct SolveArgs {
    std::string matrix;
    std::string state = "basis:1";
    double t_sim = 1.0;
    double t_meas = 0.1;
    double g_max_mhz = 100.0;
    std::vector<double> eps_range_mhz{5000.0, 6000.0};
    bool auto_relax = false;
    std::uint64_t seed = 0;
    std::size_t samples = 1;
    std::string output = "solve.json";
};

inline Json solve_result(const SolveArgs& a) {
    const MatrixFile file = read_matrix_file(a.matrix);
    const TargetHamiltonian h = file.target();
    const SesState psi0 = parse_state_spec(a.state, h.n());
    const SolveResult r = schrodinger_solve(h, psi0, a.t_sim, bounds_from_flags(a.g_max_mhz, a.eps_range_mhz), a.t_meas,
                                            a.seed, CompileOptions{a.auto_relax});
    Json j{{"program", to_json(r.program)},
           {"state", to_json(r.state)},
           {"measurement", to_json(r.measurement)},
           {"units", to_string(file.units)}};
    if (a.samples > 1) {
        std::vector<std::size_t> counts(h.n(), 0);
        OutcomeSampler sampler(r.state, a.seed);
        for (std::size_t k = 0; k < a.samples; ++k) ++counts[sampler.next() - 1];
        j["sample_counts"] = counts;
    }
    return j;
}

struct LeakageArgs {
    std::size_t n = 4;
    std::vector<double> ratios{0.05, 0.02, 0.01, 0.005};
    std::string protocol = "prep_uniform";
    double epsilon_mhz = 5500.0;
    std::uint64_t seed = 0;
    std::string output = "leakage.csv";
};

inline std::string leakage_csv(const LeakageArgs& a) {
    if (a.n > kMaxFullQubits) throw SizeLimitError("leakage scan limited to n <= " + std::to_string(kMaxFullQubits));
    LeakageScanConfig cfg;
    cfg.n = a.n;
    cfg.protocol = parse_leakage_protocol(a.protocol);
    cfg.epsilon = mhz_to_rad_per_us(a.epsilon_mhz);
    cfg.seed = a.seed;
    const auto rows = leakage_scan(cfg, a.ratios);
    std::ostringstream os;
    os << "# ratio: coupling over qubit energy, g/eps\n"
       << "# leakage: probability outside the single-excitation subspace after the protocol\n"
       << "# fidelity: |<projected|ideal>|^2 between the renormalized SES projection and the ideal SES evolution\n"
       << "# n=" << a.n << " protocol=" << a.protocol << " epsilon_mhz=" << a.epsilon_mhz << " seed=" << a.seed << '\n'
       << "ratio,leakage,fidelity\n";
    os << std::setprecision(17);
    for (const auto& r : rows) os << r.ratio << ',' << r.leakage << ',' << r.ses_fidelity << '\n';
    return os.str();
}

inline std::string raw_timings_csv(const CrossoverReport& report) {
    std::ostringstream os;
    os << "kind,n,t_qc_us,median_s,min_s,max_s,batch,steps\n" << std::setprecision(17);
    for (const auto& row : report.rows)
        for (const auto& t : row.raw)
            os << t.kind << ',' << t.n << ',' << t.t_qc << ',' << t.sample.median << ',' << t.sample.min << ','
               << t.sample.max << ',' << t.sample.batch << ',' << t.sample.steps << '\n';
    return os.str();
}

struct BenchArgs {
    std::string config;
    std::string output = "bench.json";
};

inline BenchJobConfig read_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open bench config " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ParseError(0, std::string("bench config: ") + e.what());
    }
    return bench_config_from_json(j);
}

inline CrossoverReport bench_report(const BenchJobConfig& job, std::ostream* log) {
    if (job.synthetic) {
        SyntheticTiming timing(job.synthetic->intercept_s, job.synthetic->slope_s_per_us, job.synthetic->diag_s,
                               job.synthetic->curvature_s_per_us2);
        return speedup_report(job.bench, timing, log);
    }
    MeasuredTiming timing(job.bench);
    return speedup_report(job.bench, timing, log);
}

// ---------------------------------------------------------------------------

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const nlohmann::json::exception*>(&e)) return kParse;
    if (dynamic_cast<const InfeasibleBounds*>(&e)) return kInfeasible;
    if (dynamic_cast<const AsymmetricInput*>(&e)) return kAsymmetric;
    if (dynamic_cast<const DimensionMismatch*>(&e)) return kDimension;
    if (dynamic_cast<const SizeLimitError*>(&e)) return kTooLarge;
    if (dynamic_cast<const SchemaError*>(&e)) return kSchema;
    if (dynamic_cast<const IndexError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return kRange;
    return kInternal;
}

/// Entry point shared by the executable and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& err = std::cerr) {
    CLI::App app{"Single-excitation-subspace simulator, compiler and benchmark harness", "ses"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CompileArgs compile_args;
    auto* c = app.add_subcommand("compile", "Map a target Hamiltonian onto device parameters");
    c->add_option("matrix", compile_args.matrix, "Matrix file")->required();
    c->add_option("--g-max", compile_args.g_max_mhz, "Coupling bound g_max/2pi (MHz)");
    c->add_option("--eps-range", compile_args.eps_range_mhz, "Qubit frequency range eps/2pi (MHz): lo hi")->expected(2);
    c->add_option("--t-sim", compile_args.t_sim, "Simulated time (problem units; us for physical units)");
    c->add_option("--t-meas", compile_args.t_meas, "Measurement time (us)");
    c->add_flag("--auto-relax", compile_args.auto_relax, "Enlarge lambda instead of failing on detuning limits");
    c->add_option("-o,--output", compile_args.output, "Result file name");

    EvolveArgs evolve_args;
    auto* e = app.add_subcommand("evolve", "Propagate an SES state");
    e->add_option("matrix", evolve_args.matrix, "Matrix file")->required();
    e->add_option("--state", evolve_args.state, "basis:<i> | uniform | state JSON file");
    e->add_option("--t", evolve_args.t, "Evolution time")->required();
    e->add_option("--method", evolve_args.method, "eigen | ode");
    e->add_option("--theta-max", evolve_args.theta_max, "Max phase advance per RK4 step (rad)");
    e->add_flag("--compare", evolve_args.compare, "Also run the other method and report the fidelity");
    e->add_option("-o,--output", evolve_args.output, "Result file name");

    PrepArgs prep_args;
    auto* p = app.add_subcommand("prep-unif", "Prepare the uniform W state on a star network");
    p->add_option("--n", prep_args.n, "Number of qubits")->required();
    p->add_option("--g", prep_args.g_mhz, "Coupling g/2pi (MHz)");
    p->add_option("-o,--output", prep_args.output, "Result file name");

    GroverArgs grover_args;
    auto* g = app.add_subcommand("grover", "Grover search in the SES");
    g->add_option("--n", grover_args.n, "Database size")->required();
    g->add_option("--marked", grover_args.marked, "Marked label (1-based)")->required();
    g->add_option("--g", grover_args.g_mhz, "Coupling g/2pi (MHz)");
    g->add_option("--iterations", grover_args.iterations, "Iteration count (default round(pi sqrt(n)/4))");
    g->add_option("--seed", grover_args.seed, "Measurement seed");
    g->add_option("--mode", grover_args.mode, "device | math");
    g->add_option("-o,--output", grover_args.output, "Result file name");

    SolveArgs solve_args;
    auto* s = app.add_subcommand("solve", "Compile, evolve and sample a Schroedinger-equation problem");
    s->add_option("matrix", solve_args.matrix, "Matrix file")->required();
    s->add_option("--state", solve_args.state, "basis:<i> | uniform | state JSON file");
    s->add_option("--t-sim", solve_args.t_sim, "Simulated time");
    s->add_option("--t-meas", solve_args.t_meas, "Measurement time (us)");
    s->add_option("--g-max", solve_args.g_max_mhz, "Coupling bound g_max/2pi (MHz)");
    s->add_option("--eps-range", solve_args.eps_range_mhz, "Qubit frequency range (MHz): lo hi")->expected(2);
    s->add_flag("--auto-relax", solve_args.auto_relax, "Enlarge lambda instead of failing on detuning limits");
    s->add_option("--seed", solve_args.seed, "Measurement seed");
    s->add_option("--samples", solve_args.samples, "Number of weak-simulation samples to tabulate");
    s->add_option("-o,--output", solve_args.output, "Result file name");

    LeakageArgs leakage_args;
    auto* l = app.add_subcommand("leakage", "Full-space leakage scan over g/eps");
    l->add_option("--n", leakage_args.n, "Number of qubits")->required();
    l->add_option("--ratio-list", leakage_args.ratios, "Ratios g/eps")->delimiter(',');
    l->add_option("--protocol", leakage_args.protocol, "prep_uniform | grover_step | random_H");
    l->add_option("--epsilon", leakage_args.epsilon_mhz, "Qubit frequency eps/2pi (MHz)");
    l->add_option("--seed", leakage_args.seed, "Seed for random_H");
    l->add_option("-o,--output", leakage_args.output, "Result file name");

    BenchArgs bench_args;
    auto* b = app.add_subcommand("bench", "Classical ODE vs diagonalization timing crossover");
    b->add_option("--config", bench_args.config, "Bench config JSON")->required();
    b->add_option("-o,--output", bench_args.output, "Report file name");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& ex) {
        std::ostringstream out;
        app.exit(ex, out, err);
        std::cout << out.str();
        return kOk;
    } catch (const CLI::CallForVersion& ex) {
        std::cout << kToolVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& ex) {
        err << "ses: " << ex.what() << '\n';
        return kParse;
    }

    RunManifest manifest;
    manifest.arguments = args;
    try {
        OutputSink sink = OutputSink::from_environment();
        std::string result_name;
        if (c->parsed()) {
            manifest.command = "compile";
            manifest.inputs = input_hashes({compile_args.matrix});
            manifest.config = {{"g_max_mhz", compile_args.g_max_mhz}, {"eps_range_mhz", compile_args.eps_range_mhz},
                               {"t_sim", compile_args.t_sim}, {"t_meas", compile_args.t_meas},
                               {"auto_relax", compile_args.auto_relax}};
            result_name = compile_args.output;
            sink.write_json(result_name, compile_result(compile_args));
        } else if (e->parsed()) {
            manifest.command = "evolve";
            manifest.inputs = input_hashes({evolve_args.matrix, evolve_args.state});
            manifest.config = {{"state", evolve_args.state}, {"t", evolve_args.t}, {"method", evolve_args.method},
                               {"theta_max", evolve_args.theta_max}, {"compare", evolve_args.compare}};
            result_name = evolve_args.output;
            sink.write_json(result_name, evolve_result(evolve_args));
        } else if (p->parsed()) {
            manifest.command = "prep-unif";
            manifest.config = {{"n", prep_args.n}, {"g_mhz", prep_args.g_mhz}};
            result_name = prep_args.output;
            sink.write_json(result_name, prep_result(prep_args));
        } else if (g->parsed()) {
            manifest.command = "grover";
            manifest.seed = grover_args.seed;
            manifest.config = {{"n", grover_args.n}, {"marked", grover_args.marked}, {"g_mhz", grover_args.g_mhz},
                               {"iterations", grover_args.iterations ? Json(*grover_args.iterations) : Json(nullptr)},
                               {"mode", grover_args.mode}};
            result_name = grover_args.output;
            sink.write_json(result_name, grover_result(grover_args));
        } else if (s->parsed()) {
            manifest.command = "solve";
            manifest.seed = solve_args.seed;
            manifest.inputs = input_hashes({solve_args.matrix, solve_args.state});
            manifest.config = {{"state", solve_args.state}, {"t_sim", solve_args.t_sim}, {"t_meas", solve_args.t_meas},
                               {"g_max_mhz", solve_args.g_max_mhz}, {"eps_range_mhz", solve_args.eps_range_mhz},
                               {"auto_relax", solve_args.auto_relax}, {"samples", solve_args.samples}};
            result_name = solve_args.output;
            sink.write_json(result_name, solve_result(solve_args));
        } else if (l->parsed()) {
            manifest.command = "leakage";
            manifest.seed = leakage_args.seed;
            manifest.config = {{"n", leakage_args.n}, {"ratios", leakage_args.ratios},
                               {"protocol", leakage_args.protocol}, {"epsilon_mhz", leakage_args.epsilon_mhz}};
            result_name = leakage_args.output;
            sink.write_text(result_name, leakage_csv(leakage_args));
        } else if (b->parsed()) {
            manifest.command = "bench";
            manifest.inputs = input_hashes({bench_args.config});
            const BenchJobConfig job = read_bench_config(bench_args.config);
            manifest.seed = job.bench.seed;
            manifest.config = to_json(job.bench);
            if (job.synthetic) manifest.config["synthetic_timing"] = true;
            result_name = bench_args.output;
            const CrossoverReport report = bench_report(job, &err);
            sink.write_json(result_name, to_json(report));
            sink.write_text(std::filesystem::path(result_name).stem().string() + ".timings.csv", raw_timings_csv(report));
        }
        sink.write_manifest(manifest, result_name);
        err << "ses " << manifest.command << ": wrote " << (sink.dir() / result_name).string() << '\n';
        return kOk;
    } catch (const std::exception& ex) {
        err << "ses " << manifest.command << ": error: " << ex.what() << '\n';
        return exit_code_for(ex);
    }
}

}  // namespace ses::cli
