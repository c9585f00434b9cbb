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
#include <numbers>
#include <random>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <ses/algorithms.hpp>

#include "oracles.hpp"

namespace ses {
namespace {

const double kG = mhz_to_rad_per_us(100.0);

TEST(StarNetwork, SpectrumAndPreparation) {
    for (std::size_t n : {2u, 4u, 9u, 50u}) {
        const auto h = star_hamiltonian(n, kG);
        RealVector ev = Eigen::SelfAdjointEigenSolver<RealMatrix>(h.matrix()).eigenvalues();
        const double root = std::sqrt(static_cast<double>(n));
        EXPECT_NEAR(ev(0), kG * (1 - root), 1e-9 * kG);
        EXPECT_NEAR(ev(ev.size() - 1), kG * (1 + root), 1e-9 * kG);
        for (Eigen::Index k = 1; k + 1 < ev.size(); ++k) EXPECT_NEAR(ev(k), 0.0, 1e-9 * kG);
    }
    EXPECT_THROW(star_hamiltonian(1, kG), InvalidArgument);
}

TEST(StarNetwork, PreparationTimesAndFidelity) {
    const auto p4 = prep_uniform(4, kG);
    EXPECT_NEAR(p4.t_qu, std::numbers::pi / (4 * kG), 1e-15);
    EXPECT_NEAR(p4.t_qu, 1.25e-3, 1e-15);
    EXPECT_GE(fidelity(p4.state, uniform_state(4)), 1.0 - 1e-10);

    const auto p = prep_uniform(1000, kG);
    EXPECT_NEAR(p.t_qu, 2.5e-3 / std::sqrt(1000.0), 1e-15);
    EXPECT_GE(fidelity(p.state, uniform_state(1000)), 1.0 - 1e-10);

    const auto half = evolve_exact(star_hamiltonian(1000, kG), ses_basis_state(1000, 1), p.t_qu / 2);
    EXPECT_LT(fidelity(half, uniform_state(1000)), 0.99);
}

TEST(Inversion, OperatorProperties) {
    for (std::size_t n : {1u, 2u, 7u, 40u}) {
        const RealMatrix w = inversion_operator(n);
        const auto dim = static_cast<Eigen::Index>(n);
        EXPECT_LT((w * w - RealMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_LT((w - w.transpose()).cwiseAbs().maxCoeff(), 1e-16);
        const ComplexVector u = uniform_state(n).amplitudes();
        EXPECT_LT((w.cast<Complex>() * u - u).cwiseAbs().maxCoeff(), 1e-14);
        if (n > 1) {
            ComplexVector perp = ComplexVector::Zero(dim);
            perp(0) = 1.0;
            perp(1) = -1.0;
            EXPECT_LT((w.cast<Complex>() * perp + perp).cwiseAbs().maxCoeff(), 1e-14);
        }
    }
}

TEST(Inversion, OracleDiagonal) {
    const RealVector o = oracle(5, 3);
    EXPECT_EQ(o, (RealVector(5) << 1, 1, -1, 1, 1).finished());
    EXPECT_THROW(oracle(5, 0), IndexError);
    EXPECT_THROW(oracle(5, 6), IndexError);
}

TEST(Inversion, EvolvedUnitaryIsPhaseTimesW) {
    for (std::size_t n : {2u, 3u, 5u, 8u, 16u, 64u}) {
        const EvolvedInversion inv(n, kG);
        EXPECT_LE(inv.max_deviation(), 1e-9) << "n=" << n;
        EXPECT_NEAR(inv.phase(), std::remainder(std::numbers::pi / static_cast<double>(n) + std::numbers::pi,
                                                2 * std::numbers::pi),
                    1e-9);
        const RealMatrix w = inversion_operator(n);
        std::mt19937_64 rng(n);
        const ComplexVector v = ref::random_state(n, rng);
        EXPECT_LT((inv.apply(v) - w.cast<Complex>() * v).cwiseAbs().maxCoeff(), 1e-9);
        // independent Pade exponential of the all-to-all generator
        const ComplexVector raw = ref::expm_apply(all_to_all_hamiltonian(n, kG).matrix(), v, inv.time());
        EXPECT_LT((inv.evolve(v) - raw).cwiseAbs().maxCoeff(), 1e-9);
    }
    EXPECT_NEAR(EvolvedInversion(2, kG).phase(), -std::numbers::pi / 2, 1e-12);
    EXPECT_THROW(EvolvedInversion(1, kG), InvalidArgument);
}

TEST(Grover, SmallCases) {
    GroverOptions opts;
    opts.iterations = 1;
    const auto four = grover_search(4, 3, kG, opts);
    EXPECT_NEAR(four.trajectory.back(), 1.0, 1e-9);
    EXPECT_EQ(four.measurement.outcome, 3u);

    // two items: every iteration count leaves the marked probability at 1/2
    for (std::size_t k : {0u, 1u, 2u}) {
        opts.iterations = k;
        const auto two = grover_search(2, 1, kG, opts);
        EXPECT_EQ(two.iterations, k);
        EXPECT_NEAR(two.trajectory.back(), 0.5, 1e-10);
    }

    opts.iterations = 0;
    const auto none = grover_search(6, 2, kG, opts);
    for (double p : none.state.probabilities()) EXPECT_NEAR(p, 1.0 / 6, 1e-10);
}

TEST(Grover, HundredItems) {
    const auto run = grover_search(100, 42, kG);
    EXPECT_EQ(run.iterations, 8u);
    EXPECT_NEAR(run.trajectory.back(), 0.982663957770582, 1e-9);
    EXPECT_NEAR(grover_success_probability(100, 8), 0.982663957770582, 1e-14);
    EXPECT_NEAR(run.protocol_time, prep_uniform_time(100, kG) + 8 * inversion_time(100, kG), 1e-15);
}

TEST(Grover, TrajectoryMatchesBruteForceAndClosedForm) {
    for (std::size_t n : {3u, 10u, 37u, 256u}) {
        const std::size_t marked = n / 2 + 1;
        const std::size_t k = default_grover_iterations(n) + 3;
        GroverOptions opts;
        opts.iterations = k;
        const auto device = grover_search(n, marked, kG, opts);
        opts.mode = GroverMode::Math;
        const auto math = grover_search(n, marked, kG, opts);
        const auto brute = ref::grover_brute_force(n, marked, k);
        ASSERT_EQ(device.trajectory.size(), k + 1);
        for (std::size_t j = 0; j <= k; ++j) {
            EXPECT_NEAR(math.trajectory[j], brute[j], 1e-12);
            EXPECT_NEAR(device.trajectory[j], brute[j], 1e-9);
            EXPECT_NEAR(math.trajectory[j], grover_success_probability(n, j), 1e-12);
        }
        EXPECT_LT((device.state.amplitudes() - math.state.amplitudes()).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Grover, DefaultIterationCount) {
    EXPECT_EQ(default_grover_iterations(4), 2u);
    EXPECT_EQ(default_grover_iterations(100), 8u);
    EXPECT_EQ(default_grover_iterations(1024), 25u);
}

TEST(Grover, PermutationInvariance) {
    const std::size_t n = 20;
    const auto base = grover_search(n, 1, kG);
    for (std::size_t m : {2u, 7u, 20u}) {
        const auto run = grover_search(n, m, kG);
        for (std::size_t j = 0; j < base.trajectory.size(); ++j)
            EXPECT_NEAR(run.trajectory[j], base.trajectory[j], 1e-12);
    }
    EXPECT_THROW(grover_search(n, 0, kG), IndexError);
    EXPECT_THROW(grover_search(1, 1, kG), InvalidArgument);
    GroverOptions quiet;
    quiet.record_trajectory = false;
    EXPECT_TRUE(grover_search(n, 3, kG, quiet).trajectory.empty());
}

TEST(Measurement, BasisStateIsDeterministic) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_EQ(measure(ses_basis_state(9, 4), seed).outcome, 4u);
}

TEST(Measurement, UniformFrequencies) {
    OutcomeSampler sampler(uniform_state(4), 2024);
    std::array<int, 4> counts{};
    const int draws = 40000;
    for (std::size_t o : sampler.draw(draws)) ++counts[o - 1];
    for (int c : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 0.25, 0.01);
}

TEST(Measurement, SeedReproducibility) {
    std::mt19937_64 rng(5);
    const SesState s(ref::random_state(30, rng));
    EXPECT_EQ(OutcomeSampler(s, 99).draw(500), OutcomeSampler(s, 99).draw(500));
    EXPECT_NE(OutcomeSampler(s, 99).draw(500), OutcomeSampler(s, 100).draw(500));
    EXPECT_NE(derive_stream_seed(7, 0), derive_stream_seed(7, 1));
    EXPECT_EQ(derive_stream_seed(7, 3), derive_stream_seed(7, 3));
}

TEST(Solve, DiagonalHamiltonianPhases) {
    RealMatrix h = RealMatrix::Zero(3, 3);
    h.diagonal() << 100.0, -250.0, 40.0;
    const SesState psi0 = uniform_state(3);
    const double t = 0.013;
    const auto r = schrodinger_solve(TargetHamiltonian(h), psi0, t, HardwareBounds{}, 0.1, 1);
    for (std::size_t i = 1; i <= 3; ++i) {
        const Complex expected = psi0[i] * std::polar(1.0, -h(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i - 1)) * t);
        EXPECT_LT(std::abs(r.state[i] - expected), 1e-9);
    }
}

TEST(Solve, StarPreparationThroughCompiler) {
    const std::size_t n = 16;
    const double g = 10.0;
    const auto r = schrodinger_solve(TargetHamiltonian(star_hamiltonian(n, g).matrix()), ses_basis_state(n, 1),
                                     prep_uniform_time(n, g), HardwareBounds{}, 0.1, 3);
    EXPECT_GE(fidelity(r.state, uniform_state(n)), 1.0 - 1e-9);
    const SesState direct = evolve_exact(star_hamiltonian(n, g), ses_basis_state(n, 1), prep_uniform_time(n, g));
    EXPECT_LT((r.state.amplitudes() - direct.amplitudes()).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_THROW(schrodinger_solve(TargetHamiltonian(star_hamiltonian(n, g).matrix()), uniform_state(3), 1.0,
                                   HardwareBounds{}, 0.1, 3),
                 DimensionMismatch);
}

TEST(Solve, SampledDistributionPassesChiSquare) {
    const std::size_t n = 100;
    std::mt19937_64 rng(77);
    const RealMatrix h = ref::random_symmetric(n, 30.0, rng);
    const auto r = schrodinger_solve(TargetHamiltonian(h), ses_basis_state(n, 1), 0.05, HardwareBounds{}, 0.1, 8);
    const RealVector p = r.state.probabilities();
    OutcomeSampler sampler(r.state, 123);
    const std::size_t draws = 200000;
    std::vector<double> counts(n, 0.0);
    for (std::size_t o : sampler.draw(draws)) counts[o - 1] += 1.0;
    // pool outcomes with small expectation into one bin
    double chi2 = 0, pooled_obs = 0, pooled_exp = 0;
    int bins = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = p(static_cast<Eigen::Index>(i)) * draws;
        if (e < 5) {
            pooled_obs += counts[i];
            pooled_exp += e;
            continue;
        }
        chi2 += (counts[i] - e) * (counts[i] - e) / e;
        ++bins;
    }
    if (pooled_exp > 0) {
        chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++bins;
    }
    const double pvalue = boost::math::gamma_q((bins - 1) / 2.0, chi2 / 2.0);
    EXPECT_GT(pvalue, 1e-3) << "chi2=" << chi2 << " bins=" << bins;
}

}  // namespace
}  // namespace ses
