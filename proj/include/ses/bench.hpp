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
 * @file bench.hpp
 * Classical-timing analysis of SES runs. Fixed-step ODE integration costs
 * a + b * t_qc; diagonalization costs a constant. Their crossover t* sets
 * which classical method is fastest, and the diagonalization time bounds
 * the classical competitor in the quantum-speedup comparison.
 *
 * Every number reported as a time comes from sequential cells in exclusive
 * (single-threaded) mode; workloads are derived from the seed alone.
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "algorithms.hpp"
#include "evolution.hpp"
#include "hashing.hpp"

namespace ses {

/// Reference values quoted for n = 1000 on single-core 2012 hardware; they
/// are printed next to measured values, never asserted.
struct PublishedReference {
    static constexpr std::size_t n = 1000;
    static constexpr double t_star_us = 1e-3;
    static constexpr double diag_seconds = 1.0;
    static constexpr double t_meas_us = 0.1;
    static constexpr double parallel_cores = 1e6;
};

struct BenchConfig {
    std::vector<std::size_t> n_list{128, 256, 512};
    std::vector<double> t_qc_list{2e-5, 5e-5, 1e-4, 2e-4};  // us
    double g_max = mhz_to_rad_per_us(100.0);                  // rad/us
    std::size_t repetitions = 3;
    std::uint64_t seed = 0;
    bool exclusive_mode = true;
    double theta_max = kDefaultThetaMax;
    double t_meas = PublishedReference::t_meas_us;     // us
    double parallel_cores = PublishedReference::parallel_cores;
    double min_cell_seconds = 2e-3;  // cells shorter than this are batched
    double r2_threshold = 0.99;

    void validate() const {
        if (n_list.empty()) throw SchemaError("n_list must not be empty");
        for (auto n : n_list)
            if (n < 1) throw SchemaError("n_list entries must be >= 1");
        if (t_qc_list.size() < 2) throw SchemaError("t_qc_list needs at least two entries");
        for (double t : t_qc_list)
            if (!(t > 0.0) || !std::isfinite(t)) throw SchemaError("t_qc_list entries must be > 0");
        if (repetitions < 3) throw SchemaError("repetitions must be >= 3");
        if (!(g_max > 0.0)) throw SchemaError("g_max must be > 0");
        if (!(theta_max > 0.0 && theta_max <= 0.5)) throw SchemaError("theta_max must lie in (0, 0.5]");
        if (!(t_meas >= 0.0)) throw SchemaError("t_meas must be >= 0");
        if (!(parallel_cores >= 1.0)) throw SchemaError("parallel_cores must be >= 1");
        if (!(min_cell_seconds >= 0.0)) throw SchemaError("min_cell_seconds must be >= 0");
        if (!(r2_threshold > 0.0 && r2_threshold <= 1.0)) throw SchemaError("r2_threshold must lie in (0, 1]");
    }

    bool spans_decade() const {
        const auto [lo, hi] = std::minmax_element(t_qc_list.begin(), t_qc_list.end());
        return *hi >= 10.0 * *lo * (1.0 - 1e-12);
    }
};

/// I.i.d. uniform entries in [-g_max, g_max] on and above the diagonal,
/// row by row, mirrored below.
inline SesHamiltonian random_hamiltonian(std::size_t n, double g_max, std::uint64_t seed) {
    if (n < 1) throw InvalidArgument("random Hamiltonian needs n >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-g_max, g_max);
    const auto dim = static_cast<Eigen::Index>(n);
    RealMatrix h(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = i; j < dim; ++j) h(i, j) = h(j, i) = u(rng);
    return SesHamiltonian(std::move(h));
}

/// Seed of the benchmark instance of size n.
inline std::uint64_t workload_seed(const BenchConfig& cfg, std::size_t n) { return derive_stream_seed(cfg.seed, n); }

struct TimingSample {
    double median = 0.0;  // seconds per run
    double min = 0.0;
    double max = 0.0;
    std::size_t batch = 1;  // runs per timed cell
    std::size_t steps = 0;  // RK4 steps per run (ODE only)
};

/// Source of timings; MeasuredTiming runs the real workloads, tests inject
/// synthetic ones.
class TimingSource {
public:
    virtual ~TimingSource() = default;
    virtual TimingSample ode(std::size_t n, double t_qc) = 0;
    virtual TimingSample diag(std::size_t n, double t_qc) = 0;
    virtual std::string workload_hash(std::size_t n) = 0;
};

namespace detail {

template <typename Run>
TimingSample time_cells(Run&& run, std::size_t repetitions, double min_cell_seconds) {
    using Clock = std::chrono::steady_clock;
    auto seconds_since = [](Clock::time_point t0) {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };
    // warmup, discarded; also sizes the batch
    auto t0 = Clock::now();
    run();
    const double warm = seconds_since(t0);
    std::size_t batch = 1;
    if (warm < min_cell_seconds)
        batch = static_cast<std::size_t>(std::ceil(min_cell_seconds / std::max(warm, 1e-9)));

    std::vector<double> cells;
    cells.reserve(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) {
        t0 = Clock::now();
        for (std::size_t b = 0; b < batch; ++b) run();
        cells.push_back(seconds_since(t0) / static_cast<double>(batch));
    }
    std::sort(cells.begin(), cells.end());
    const std::size_t k = cells.size();
    const double median = k % 2 ? cells[k / 2] : 0.5 * (cells[k / 2 - 1] + cells[k / 2]);
    return {median, cells.front(), cells.back(), batch, 0};
}

}  // namespace detail

class MeasuredTiming final : public TimingSource {
public:
    explicit MeasuredTiming(const BenchConfig& cfg) : cfg_(cfg) {
        if (cfg_.exclusive_mode) Eigen::setNbThreads(1);
    }

    TimingSample ode(std::size_t n, double t_qc) override {
        const auto& w = workload(n);
        std::size_t steps = 0;
        auto sample = detail::time_cells(
            [&] {
                const OdeResult r = evolve_ode(w.h, w.psi, t_qc, cfg_.theta_max);
                steps = r.steps;
            },
            cfg_.repetitions, cfg_.min_cell_seconds);
        sample.steps = steps;
        return sample;
    }

    TimingSample diag(std::size_t n, double t_qc) override {
        const auto& w = workload(n);
        return detail::time_cells([&] { (void)EigenPropagator(w.h).apply(w.psi, t_qc); }, cfg_.repetitions,
                                  cfg_.min_cell_seconds);
    }

    std::string workload_hash(std::size_t n) override {
        const auto& w = workload(n);
        Fnv1a h;
        h.update_matrix(w.h.matrix());
        h.update_matrix(w.psi.amplitudes().real());
        h.update_value(cfg_.theta_max);
        for (double t : cfg_.t_qc_list)
            h.update_value(static_cast<std::uint64_t>(detail::rk4_step_count(t, w.h.row_sum_norm(), cfg_.theta_max)));
        return h.hex();
    }

private:
    struct Workload {
        SesHamiltonian h;
        SesState psi;
    };

    const Workload& workload(std::size_t n) {
        auto it = cache_.find(n);
        if (it == cache_.end())
            it = cache_.emplace(n, Workload{random_hamiltonian(n, cfg_.g_max, workload_seed(cfg_, n)), uniform_state(n)})
                     .first;
        return it->second;
    }

    BenchConfig cfg_;
    std::map<std::size_t, Workload> cache_;
};

/// Exact timings a + b t_qc (+ c t_qc^2) for ODE and a constant for
/// diagonalization. A nonzero c exercises the nonlinear-fit path.
class SyntheticTiming final : public TimingSource {
public:
    SyntheticTiming(double ode_intercept, double ode_slope, double diag_seconds, double curvature = 0.0)
        : a_(ode_intercept), b_(ode_slope), c_(curvature), diag_(diag_seconds) {}

    TimingSample ode(std::size_t, double t_qc) override {
        const double t = a_ + b_ * t_qc + c_ * t_qc * t_qc;
        return {t, t, t, 1, 0};
    }
    TimingSample diag(std::size_t, double) override { return {diag_, diag_, diag_, 1, 0}; }
    std::string workload_hash(std::size_t n) override {
        Fnv1a h;
        h.update("synthetic");
        h.update_value(static_cast<std::uint64_t>(n));
        return h.hex();
    }

private:
    double a_, b_, c_, diag_;
};

inline TimingSample time_ode(std::size_t n, double t_qc, const BenchConfig& cfg) {
    return MeasuredTiming(cfg).ode(n, t_qc);
}

inline TimingSample time_diag(std::size_t n, double t_qc, const BenchConfig& cfg) {
    return MeasuredTiming(cfg).diag(n, t_qc);
}

struct LinearFit {
    double intercept;
    double slope;
    double r2;
};

/// Ordinary least squares y = a + b x.
inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit needs >= 2 paired points");
    const double k = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("fit needs distinct x values");
    const double b = sxy / sxx;
    const double a = my - b * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) ss_res += std::pow(y[i] - (a + b * x[i]), 2);
    const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return {a, b, r2};
}

struct RawTiming {
    std::string kind;  // "ode" or "diag"
    std::size_t n;
    double t_qc;
    TimingSample sample;
};

struct CrossoverRow {
    std::size_t n;
    double ode_slope;      // s per us of t_qc
    double ode_intercept;  // s
    double diag_time;      // s, median over the t_qc sweep
    double diag_cv;        // coefficient of variation of diag medians across t_qc
    std::optional<double> t_star;  // us; empty when there is no crossover
    double fit_r2;
    bool valid;            // R^2 >= threshold
    bool widened = false;  // sweep was extended to reach the threshold
    std::vector<double> t_qc_list;
    std::string workload_hash;
    std::string note;
    std::vector<RawTiming> raw;
};

/// t* = (diag - a) / b, or empty when the crossover is not positive.
inline std::optional<double> crossover_time(double diag_time, double intercept, double slope) {
    if (!(slope > 0.0)) return std::nullopt;
    const double t = (diag_time - intercept) / slope;
    if (!(t > 0.0)) return std::nullopt;
    return t;
}

inline CrossoverRow find_crossover(std::size_t n, const BenchConfig& cfg, TimingSource& timing,
                                   std::ostream* log = nullptr) {
    cfg.validate();
    if (!cfg.spans_decade()) throw SchemaError("t_qc_list must span at least one decade");

    CrossoverRow row{};
    row.n = n;
    row.t_qc_list = cfg.t_qc_list;
    std::sort(row.t_qc_list.begin(), row.t_qc_list.end());
    row.workload_hash = timing.workload_hash(n);

    std::vector<double> xs, ode_times, diag_times;
    auto measure_at = [&](double t) {
        const TimingSample o = timing.ode(n, t);
        const TimingSample d = timing.diag(n, t);
        row.raw.push_back({"ode", n, t, o});
        row.raw.push_back({"diag", n, t, d});
        xs.push_back(t);
        ode_times.push_back(o.median);
        diag_times.push_back(d.median);
    };
    for (double t : row.t_qc_list) measure_at(t);

    LinearFit fit = fit_line(xs, ode_times);
    if (fit.r2 < cfg.r2_threshold) {
        if (log) *log << "warning: n=" << n << " ODE fit R^2=" << fit.r2 << " below threshold, widening sweep\n";
        const double top = row.t_qc_list.back();
        for (double f : {2.0, 4.0}) {
            row.t_qc_list.push_back(top * f);
            measure_at(top * f);
        }
        row.widened = true;
        fit = fit_line(xs, ode_times);
    }

    std::vector<double> sorted = diag_times;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t k = sorted.size();
    row.diag_time = k % 2 ? sorted[k / 2] : 0.5 * (sorted[k / 2 - 1] + sorted[k / 2]);
    double mean = 0, var = 0;
    for (double d : diag_times) mean += d;
    mean /= static_cast<double>(k);
    for (double d : diag_times) var += (d - mean) * (d - mean);
    row.diag_cv = mean > 0.0 ? std::sqrt(var / static_cast<double>(k)) / mean : 0.0;

    row.ode_intercept = fit.intercept;
    row.ode_slope = fit.slope;
    row.fit_r2 = fit.r2;
    row.valid = fit.r2 >= cfg.r2_threshold;
    row.t_star = crossover_time(row.diag_time, fit.intercept, fit.slope);
    if (!row.valid) row.note = "invalid: ODE timing not linear in t_qc (R^2 below threshold)";
    if (!row.t_star) row.note += std::string(row.note.empty() ? "" : "; ") + "no crossover in range";
    return row;
}

/// Quantum run t_qu = t_qc + t_meas (us) beats the perfectly parallelized
/// classical bound diag_seconds / cores.
inline bool speedup_condition(double diag_seconds, double parallel_cores, double t_qc, double t_meas) {
    const double classical_us = diag_seconds / parallel_cores * 1e6;
    return t_qc + t_meas < classical_us;
}

struct SpeedupEntry {
    std::size_t n;
    double t_qc;                // us
    double t_qu;                // us
    double diag_time;           // s
    double classical_bound_us;  // diag_time / cores, us
    bool condition;
};

inline SpeedupEntry speedup_entry(std::size_t n, double diag_seconds, double t_qc, double t_meas,
                                  double parallel_cores) {
    return {n,
            t_qc,
            t_qc + t_meas,
            diag_seconds,
            diag_seconds / parallel_cores * 1e6,
            speedup_condition(diag_seconds, parallel_cores, t_qc, t_meas)};
}

struct MachineDescriptor {
    std::string hostname;
    std::string cpu_model;
    unsigned hardware_threads = 0;
    std::string compiler;
    std::string eigen_version;
    bool exclusive_mode = true;

    static MachineDescriptor detect(bool exclusive_mode) {
        MachineDescriptor m;
        char host[256] = {};
        if (gethostname(host, sizeof host - 1) == 0) m.hostname = host;
        std::ifstream cpuinfo("/proc/cpuinfo");
        for (std::string line; std::getline(cpuinfo, line);) {
            if (line.rfind("model name", 0) == 0) {
                m.cpu_model = line.substr(line.find(':') + 2);
                break;
            }
        }
        m.hardware_threads = std::thread::hardware_concurrency();
#if defined(__clang__)
        m.compiler = "clang " __clang_version__;
#elif defined(__GNUC__)
        m.compiler = "gcc " __VERSION__;
#endif
        m.eigen_version = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION);
        m.exclusive_mode = exclusive_mode;
        return m;
    }
};

struct CrossoverReport {
    std::vector<CrossoverRow> rows;
    std::vector<SpeedupEntry> speedup;
    MachineDescriptor environment;
    double t_meas;
    double parallel_cores;
    double theta_max;
};

/// Crossover rows for every n plus the speedup table for every (n, t_qc).
inline CrossoverReport speedup_report(const BenchConfig& cfg, TimingSource& timing, std::ostream* log = nullptr) {
    cfg.validate();
    CrossoverReport report;
    report.environment = MachineDescriptor::detect(cfg.exclusive_mode);
    report.t_meas = cfg.t_meas;
    report.parallel_cores = cfg.parallel_cores;
    report.theta_max = cfg.theta_max;
    for (std::size_t n : cfg.n_list) {
        if (log) *log << "bench: n=" << n << '\n';
        report.rows.push_back(find_crossover(n, cfg, timing, log));
        const auto& row = report.rows.back();
        for (double t : row.t_qc_list)
            report.speedup.push_back(speedup_entry(n, row.diag_time, t, cfg.t_meas, cfg.parallel_cores));
    }
    return report;
}

}  // namespace ses
