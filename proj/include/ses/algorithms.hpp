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
 * @file algorithms.hpp
 * SES applications: single-step W-state preparation on a star network,
 * Grover search with a Hamiltonian-evolved inversion operator, the compiled
 * Schroedinger-equation solver, and weak-simulation sampling.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "compiler.hpp"
#include "evolution.hpp"
#include "types.hpp"

namespace ses {

// ---------------------------------------------------------------------------
// Measurement
// ---------------------------------------------------------------------------

struct MeasurementRecord {
    std::size_t outcome;       // 1-based label
    RealVector probabilities;  // |a_i|^2
    std::uint64_t seed;
};

/// Weak-simulation sampler over the outcome distribution of one state.
/// Outcomes are 1-based. The stream is std::mt19937_64 seeded with `seed`.
class OutcomeSampler {
public:
    OutcomeSampler(const SesState& s, std::uint64_t seed)
        : probabilities_(s.probabilities()),
          distribution_(probabilities_.data(), probabilities_.data() + probabilities_.size()),
          engine_(seed) {}

    std::size_t next() { return distribution_(engine_) + 1; }

    std::vector<std::size_t> draw(std::size_t count) {
        std::vector<std::size_t> out(count);
        for (auto& o : out) o = next();
        return out;
    }

    const RealVector& probabilities() const noexcept { return probabilities_; }

private:
    RealVector probabilities_;
    std::discrete_distribution<std::size_t> distribution_;
    std::mt19937_64 engine_;
};

inline MeasurementRecord measure(const SesState& s, std::uint64_t seed) {
    OutcomeSampler sampler(s, seed);
    const std::size_t outcome = sampler.next();
    return {outcome, sampler.probabilities(), seed};
}

/// Seed of the k-th independent stream derived from a base seed (splitmix64
/// of seed + k). Used whenever a batch is split into sub-streams.
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t k) noexcept {
    std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Uniform-state preparation
// ---------------------------------------------------------------------------

/// Qubit 1 coupled with strength g to every other qubit, H_11 = 2g.
inline SesHamiltonian star_hamiltonian(std::size_t n, double g) {
    if (n < 2) throw InvalidArgument("star network needs n >= 2");
    if (g == 0.0 || !std::isfinite(g)) throw InvalidArgument("star coupling must be finite and nonzero");
    const auto dim = static_cast<Eigen::Index>(n);
    RealMatrix h = RealMatrix::Zero(dim, dim);
    h(0, 0) = 2.0 * g;
    h.row(0).tail(dim - 1).setConstant(g);
    h.col(0).tail(dim - 1).setConstant(g);
    return SesHamiltonian(std::move(h));
}

/// Half period of the |psi+>,|psi-> splitting 2 sqrt(n) g.
inline double prep_uniform_time(std::size_t n, double g) {
    return std::numbers::pi / (2.0 * std::sqrt(static_cast<double>(n)) * g);
}

struct PrepResult {
    SesState state;
    double t_qu;
};

inline PrepResult prep_uniform(std::size_t n, double g) {
    if (!(g > 0.0)) throw InvalidArgument("prep_uniform needs g > 0");
    const double t = prep_uniform_time(n, g);
    return {evolve_exact(star_hamiltonian(n, g), ses_basis_state(n, 1), t), t};
}

// ---------------------------------------------------------------------------
// Grover search
// ---------------------------------------------------------------------------

/// W = 2|unif)(unif| - I.
inline RealMatrix inversion_operator(std::size_t n) {
    if (n < 1) throw InvalidArgument("inversion operator needs n >= 1");
    const auto dim = static_cast<Eigen::Index>(n);
    const double nd = static_cast<double>(n);
    RealMatrix w = RealMatrix::Constant(dim, dim, 2.0 / nd);
    w.diagonal().setConstant((2.0 - nd) / nd);
    return w;
}

/// Diagonal of O_i: all ones except -1 at label i.
inline RealVector oracle(std::size_t n, std::size_t label) {
    if (label < 1 || label > n) throw IndexError("oracle label outside 1..n");
    RealVector d = RealVector::Ones(static_cast<Eigen::Index>(n));
    d(static_cast<Eigen::Index>(label - 1)) = -1.0;
    return d;
}

/// g times the all-ones matrix with zero diagonal (completely symmetric array).
inline SesHamiltonian all_to_all_hamiltonian(std::size_t n, double g) {
    const auto dim = static_cast<Eigen::Index>(n);
    RealMatrix h = RealMatrix::Constant(dim, dim, g);
    h.diagonal().setZero();
    return SesHamiltonian(std::move(h));
}

inline double inversion_time(std::size_t n, double g) { return std::numbers::pi / (static_cast<double>(n) * g); }

/// W realized by evolving under the all-to-all Hamiltonian for pi/(n g).
/// The evolved unitary equals exp(i phase) W; apply() removes that phase.
class EvolvedInversion {
public:
    static constexpr double kTolerance = 1e-9;

    EvolvedInversion(std::size_t n, double g)
        : n_(n), g_(g), t_(0.0), propagator_(checked_hamiltonian(n, g)) {
        t_ = inversion_time(n, g);
        unitary_ = propagator_.unitary(t_);
        const RealMatrix w = inversion_operator(n);
        phase_ = std::arg((w.cast<Complex>().array().conjugate() * unitary_.array()).sum());
        max_deviation_ = (unitary_ - std::polar(1.0, phase_) * w.cast<Complex>()).cwiseAbs().maxCoeff();
        if (max_deviation_ > kTolerance)
            throw Error("evolved inversion deviates from W by " + std::to_string(max_deviation_));
    }

    std::size_t n() const noexcept { return n_; }
    double g() const noexcept { return g_; }
    double time() const noexcept { return t_; }
    double phase() const noexcept { return phase_; }
    double max_deviation() const noexcept { return max_deviation_; }
    const ComplexMatrix& unitary() const noexcept { return unitary_; }

    /// Raw device evolution exp(-i H t) v.
    ComplexVector evolve(const ComplexVector& v) const { return unitary_ * v; }

    /// exp(-i phase) exp(-i H t) v, i.e. W v up to the fitted tolerance.
    ComplexVector apply(const ComplexVector& v) const { return std::polar(1.0, -phase_) * evolve(v); }

private:
    static SesHamiltonian checked_hamiltonian(std::size_t n, double g) {
        if (n < 2) throw InvalidArgument("evolved inversion needs n >= 2");
        if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("evolved inversion needs finite g > 0");
        return all_to_all_hamiltonian(n, g);
    }

    std::size_t n_;
    double g_;
    double t_;
    EigenPropagator propagator_;
    ComplexMatrix unitary_;
    double phase_ = 0.0;
    double max_deviation_ = 0.0;
};

inline EvolvedInversion inversion_via_evolution(std::size_t n, double g) { return EvolvedInversion(n, g); }

enum class GroverMode {
    Device,  // star-network prep, evolved W, diagonal oracle phase
    Math     // exact |unif) and W applied as a matrix
};

/// round(pi sqrt(n) / 4).
inline std::size_t default_grover_iterations(std::size_t n) {
    return static_cast<std::size_t>(std::llround(std::numbers::pi * std::sqrt(static_cast<double>(n)) / 4.0));
}

/// sin^2((2k+1) asin(1/sqrt(n))).
inline double grover_success_probability(std::size_t n, std::size_t k) {
    const double theta = std::asin(1.0 / std::sqrt(static_cast<double>(n)));
    const double s = std::sin((2.0 * static_cast<double>(k) + 1.0) * theta);
    return s * s;
}

struct GroverOptions {
    std::optional<std::size_t> iterations;
    GroverMode mode = GroverMode::Device;
    std::optional<bool> record_trajectory;  // default: on for n < 4096
    std::uint64_t seed = 0;
};

struct GroverRun {
    std::size_t n;
    std::size_t marked;
    std::size_t iterations;
    double g;
    GroverMode mode;
    std::vector<double> trajectory;  // marked probability after k = 0..K iterations
    SesState state;                  // final state with the device global phase removed
    double global_phase;             // accumulated phase removed in device mode
    double protocol_time;            // t(prep) + K t(W), device-mode time budget (us)
    MeasurementRecord measurement;
};

inline GroverRun grover_search(std::size_t n, std::size_t marked, double g, const GroverOptions& options = {}) {
    if (n < 2) throw InvalidArgument("Grover search needs n >= 2");
    if (marked < 1 || marked > n) throw IndexError("marked label outside 1..n");
    if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("Grover search needs finite g > 0");

    const std::size_t iterations = options.iterations.value_or(default_grover_iterations(n));
    const bool record = options.record_trajectory.value_or(n < 4096);
    const RealVector o = oracle(n, marked);
    const auto m = static_cast<Eigen::Index>(marked - 1);

    ComplexVector psi;
    double global_phase = 0.0;
    double protocol_time = 0.0;
    std::optional<EvolvedInversion> evolved;
    RealMatrix w;
    if (options.mode == GroverMode::Device) {
        const PrepResult prep = prep_uniform(n, g);
        psi = prep.state.amplitudes();
        protocol_time = prep.t_qu;
        global_phase = std::arg(uniform_state(n).amplitudes().dot(psi));
        psi *= std::polar(1.0, -global_phase);
        evolved.emplace(n, g);
    } else {
        psi = uniform_state(n).amplitudes();
        w = inversion_operator(n);
    }

    std::vector<double> trajectory;
    if (record) {
        trajectory.reserve(iterations + 1);
        trajectory.push_back(std::norm(psi(m)));
    }
    for (std::size_t k = 0; k < iterations; ++k) {
        psi = o.cast<Complex>().cwiseProduct(psi);
        if (evolved) {
            psi = evolved->apply(psi);
            global_phase += evolved->phase();
            protocol_time += evolved->time();
        } else {
            psi = w * psi;
        }
        if (record) trajectory.push_back(std::norm(psi(m)));
    }

    SesState final_state = SesState::normalized(psi);
    MeasurementRecord measurement = measure(final_state, options.seed);
    return {n,        marked, iterations, g, options.mode, std::move(trajectory), std::move(final_state),
            std::remainder(global_phase, 2.0 * std::numbers::pi), protocol_time, std::move(measurement)};
}

// ---------------------------------------------------------------------------
// Schroedinger-equation solver
// ---------------------------------------------------------------------------

struct SolveResult {
    CompiledProgram program;
    SesState state;  // phase-restored exp(-i H t_sim) psi0
    MeasurementRecord measurement;
};

/// Compiles H, evolves psi0 under H_qc for t_qc, restores the global phase and
/// draws one weak-simulation sample.
inline SolveResult schrodinger_solve(const TargetHamiltonian& h, const SesState& psi0, double t_sim,
                                     const HardwareBounds& bounds, double t_meas, std::uint64_t seed,
                                     const CompileOptions& options = {}) {
    if (h.n() != psi0.n()) throw DimensionMismatch("initial state and Hamiltonian differ in n");
    CompiledProgram program = compile(h, bounds, t_sim, t_meas, options);
    const SesState evolved = evolve_exact(program.h_qc(), psi0, program.t_qc);
    SesState restored = decompile_evolution(program).restore(evolved);
    MeasurementRecord measurement = measure(restored, seed);
    return {std::move(program), std::move(restored), std::move(measurement)};
}

}  // namespace ses
