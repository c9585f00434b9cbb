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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <ses/bench.hpp>

#include "oracles.hpp"

namespace ses {
namespace {

TEST(RandomHamiltonian, SymmetricBoundedDeterministic) {
    const double g = mhz_to_rad_per_us(100.0);
    const auto a = random_hamiltonian(50, g, 4);
    const auto b = random_hamiltonian(50, g, 4);
    EXPECT_EQ(a.matrix(), b.matrix());
    EXPECT_NE(a.matrix(), random_hamiltonian(50, g, 5).matrix());
    EXPECT_EQ(a.matrix(), a.matrix().transpose());
    EXPECT_LE(a.max_abs_entry(), g);
}

TEST(RandomHamiltonian, EntriesAreUniform) {
    // one-sample Kolmogorov-Smirnov test on ~1e6 upper-triangle entries
    const std::size_t n = 1414;
    const auto h = random_hamiltonian(n, 1.0, 2026);
    std::vector<double> xs;
    xs.reserve(n * (n + 1) / 2);
    for (Eigen::Index i = 0; i < h.matrix().rows(); ++i)
        for (Eigen::Index j = i; j < h.matrix().cols(); ++j) xs.push_back(h.matrix()(i, j));
    std::sort(xs.begin(), xs.end());
    const double m = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double cdf = (xs[k] + 1.0) / 2.0;
        d = std::max({d, (k + 1) / m - cdf, cdf - k / m});
    }
    EXPECT_GT(ref::kolmogorov_tail(std::sqrt(m) * d), 1e-3) << "D=" << d;
}

TEST(FitLine, RecoversExactLineAndR2) {
    const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
    const auto noisy = fit_line({1, 2, 3, 4}, {1, 3, 2, 4});
    EXPECT_NEAR(noisy.slope, 0.8, 1e-12);
    EXPECT_NEAR(noisy.r2, 0.64, 1e-12);
    EXPECT_THROW(fit_line({1}, {1}), InvalidArgument);
    EXPECT_THROW(fit_line({2, 2}, {1, 3}), InvalidArgument);
}

BenchConfig small_config() {
    BenchConfig cfg;
    cfg.n_list = {8};
    cfg.t_qc_list = {0.1, 0.5, 1.0, 2.0};
    return cfg;
}

TEST(Crossover, SyntheticTimingGivesExactCrossover) {
    // a = 1 ms, b = 2 ms/us, diag = 5 ms -> t* = 2 us
    SyntheticTiming timing(1e-3, 2e-3, 5e-3);
    const auto row = find_crossover(8, small_config(), timing);
    EXPECT_NEAR(row.ode_intercept, 1e-3, 1e-15);
    EXPECT_NEAR(row.ode_slope, 2e-3, 1e-15);
    ASSERT_TRUE(row.t_star.has_value());
    EXPECT_NEAR(*row.t_star, 2.0, 1e-12);
    EXPECT_TRUE(row.valid);
    EXPECT_FALSE(row.widened);
    EXPECT_EQ(row.diag_cv, 0.0);
    EXPECT_EQ(row.raw.size(), 8u);
}

TEST(Crossover, NoCrossoverIsReported) {
    SyntheticTiming timing(1.0, 2e-3, 5e-3);
    const auto row = find_crossover(8, small_config(), timing);
    EXPECT_FALSE(row.t_star.has_value());
    EXPECT_NE(row.note.find("no crossover"), std::string::npos);
    EXPECT_FALSE(crossover_time(1.0, 0.0, 0.0).has_value());
}

class ZigzagTiming final : public TimingSource {
public:
    TimingSample ode(std::size_t, double) override {
        const double t = (calls_++ % 2) ? 1e-3 : 5e-3;
        return {t, t, t, 1, 0};
    }
    TimingSample diag(std::size_t, double) override { return {1e-3, 1e-3, 1e-3, 1, 0}; }
    std::string workload_hash(std::size_t) override { return "zigzag"; }

private:
    int calls_ = 0;
};

TEST(Crossover, NonlinearTimingIsWidenedThenFlagged) {
    ZigzagTiming timing;
    std::ostringstream log;
    const auto row = find_crossover(8, small_config(), timing, &log);
    EXPECT_TRUE(row.widened);
    EXPECT_FALSE(row.valid);
    EXPECT_EQ(row.t_qc_list.size(), 6u);
    EXPECT_DOUBLE_EQ(row.t_qc_list[4], 4.0);
    EXPECT_DOUBLE_EQ(row.t_qc_list[5], 8.0);
    EXPECT_NE(row.note.find("invalid"), std::string::npos);
    EXPECT_NE(log.str().find("widening"), std::string::npos);
}

TEST(Crossover, ConfigValidation) {
    SyntheticTiming timing(0, 1, 1);
    BenchConfig cfg = small_config();
    cfg.t_qc_list = {1.0, 5.0};
    EXPECT_THROW(find_crossover(8, cfg, timing), SchemaError);
    cfg = small_config();
    cfg.repetitions = 2;
    EXPECT_THROW(cfg.validate(), SchemaError);
    cfg = small_config();
    cfg.theta_max = 0.0;
    EXPECT_THROW(cfg.validate(), SchemaError);
    EXPECT_TRUE(BenchConfig{}.spans_decade());
}

TEST(Speedup, ConditionWithReferenceInputs) {
    // 1 s diagonalization over 1e6 cores is 1 us; t_qu = 0.3 us wins
    EXPECT_TRUE(speedup_condition(1.0, 1e6, 0.2, 0.1));
    EXPECT_FALSE(speedup_condition(1.0, 1e6, 0.95, 0.1));
    const auto e = speedup_entry(1000, 1.0, 0.2, 0.1, 1e6);
    EXPECT_NEAR(e.t_qu, 0.3, 1e-15);
    EXPECT_NEAR(e.classical_bound_us, 1.0, 1e-12);
    EXPECT_TRUE(e.condition);
}

TEST(Speedup, ReportCoversEveryCell) {
    SyntheticTiming timing(1e-3, 2e-3, 5e-3);
    BenchConfig cfg = small_config();
    cfg.n_list = {4, 8};
    const auto report = speedup_report(cfg, timing);
    EXPECT_EQ(report.rows.size(), 2u);
    EXPECT_EQ(report.speedup.size(), 8u);
    EXPECT_GE(report.environment.hardware_threads, 1u);
    EXPECT_FALSE(report.environment.eigen_version.empty());
}

TEST(MeasuredTiming, SmallWorkloadSanity) {
    BenchConfig cfg;
    cfg.min_cell_seconds = 1e-4;
    MeasuredTiming timing(cfg);
    const auto short_run = timing.ode(32, 1e-3);
    const auto long_run = timing.ode(32, 1e-1);
    EXPECT_GT(long_run.steps, short_run.steps);
    EXPECT_GT(long_run.median, 0.0);
    EXPECT_LE(long_run.min, long_run.median);
    EXPECT_LE(long_run.median, long_run.max);
    EXPECT_GT(timing.diag(32, 1e-3).median, 0.0);
    EXPECT_EQ(timing.workload_hash(32), MeasuredTiming(cfg).workload_hash(32));
    BenchConfig other = cfg;
    other.seed = 1;
    EXPECT_NE(timing.workload_hash(32), MeasuredTiming(other).workload_hash(32));
}

}  // namespace
}  // namespace ses
