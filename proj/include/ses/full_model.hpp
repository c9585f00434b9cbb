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
 * @file full_model.hpp
 * Exact lab-frame model of the coupled array on the full 2^n space:
 *
 *   H = sum_i eps_i c_i^+ c_i + 1/2 sum_{i != i'} g_ii' sum_{mu nu} J_{mu nu} s^mu_i s^nu_i'
 *
 * No rotating-wave approximation is made, so projecting an evolved state
 * back onto the SES measures leakage out of the subspace.
 */
#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "evolution.hpp"
#include "types.hpp"

namespace ses {

inline constexpr std::size_t kMaxFullQubits = 14;
inline constexpr std::size_t kMaxFullEigenQubits = 10;

class FullModel {
public:
    /// One product term coeff * s^mu_i s^nu_j with i < j (0-based qubits),
    /// mu, nu in {0: x, 1: y, 2: z}; pure zz terms are folded into the diagonal.
    struct PairTerm {
        int qubit_i;
        int qubit_j;
        int mu;
        int nu;
        double coeff;
    };

    explicit FullModel(DeviceParams device, CouplingTensor coupling = CouplingTensor::xx())
        : device_(std::move(device)), coupling_(coupling) {
        if (device_.n() > kMaxFullQubits)
            throw SizeLimitError("full model limited to n <= " + std::to_string(kMaxFullQubits) + " qubits");
        if (!coupling_.J.allFinite()) throw InvalidArgument("coupling tensor has non-finite entries");
        build_terms();
    }

    std::size_t n() const noexcept { return device_.n(); }
    std::size_t dim() const noexcept { return std::size_t{1} << n(); }
    const DeviceParams& device() const noexcept { return device_; }
    const CouplingTensor& coupling() const noexcept { return coupling_; }
    const RealVector& diagonal() const noexcept { return diagonal_; }
    const std::vector<PairTerm>& pair_terms() const noexcept { return terms_; }

    /// True when every matrix element is real (no term with exactly one s^y).
    bool is_real() const noexcept { return real_; }

    /// Upper bound on the spectral radius (sum of absolute term weights).
    double spectral_bound() const noexcept { return spectral_bound_; }

    /// out = H * in, matrix-free.
    void apply(const ComplexVector& in, ComplexVector& out) const {
        out = diagonal_.cast<Complex>().cwiseProduct(in);
        const auto d = static_cast<std::uint64_t>(dim());
        for (const auto& term : terms_) {
            const std::uint64_t bi = std::uint64_t{1} << term.qubit_i;
            const std::uint64_t bj = std::uint64_t{1} << term.qubit_j;
            const std::uint64_t flip = (term.mu != 2 ? bi : 0) | (term.nu != 2 ? bj : 0);
            for (std::uint64_t b = 0; b < d; ++b) {
                const Complex f = pauli_factor(term.mu, (b & bi) != 0) * pauli_factor(term.nu, (b & bj) != 0);
                out(static_cast<Eigen::Index>(b ^ flip)) += term.coeff * f * in(static_cast<Eigen::Index>(b));
            }
        }
    }

    /// Dense 2^n x 2^n Hamiltonian.
    ComplexMatrix dense() const {
        const auto d = static_cast<Eigen::Index>(dim());
        ComplexMatrix h = ComplexMatrix::Zero(d, d);
        h.diagonal() = diagonal_.cast<Complex>();
        for (const auto& term : terms_) {
            const std::uint64_t bi = std::uint64_t{1} << term.qubit_i;
            const std::uint64_t bj = std::uint64_t{1} << term.qubit_j;
            const std::uint64_t flip = (term.mu != 2 ? bi : 0) | (term.nu != 2 ? bj : 0);
            for (std::uint64_t b = 0; b < static_cast<std::uint64_t>(d); ++b) {
                const Complex f = pauli_factor(term.mu, (b & bi) != 0) * pauli_factor(term.nu, (b & bj) != 0);
                h(static_cast<Eigen::Index>(b ^ flip), static_cast<Eigen::Index>(b)) += term.coeff * f;
            }
        }
        return h;
    }

    /// s^mu applied to a qubit in state |bit>: the flipped state's coefficient.
    static Complex pauli_factor(int mu, bool bit) noexcept {
        switch (mu) {
            case 0: return {1.0, 0.0};
            case 1: return bit ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
            default: return bit ? Complex{-1.0, 0.0} : Complex{1.0, 0.0};
        }
    }

private:
    void build_terms() {
        const std::size_t n = device_.n();
        const Eigen::Matrix3d js = 0.5 * (coupling_.J + coupling_.J.transpose());
        const RealMatrix& g = device_.g();

        diagonal_ = RealVector::Zero(static_cast<Eigen::Index>(dim()));
        spectral_bound_ = device_.epsilon().cwiseAbs().sum();
        for (std::uint64_t b = 0; b < dim(); ++b) {
            double e = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (b >> i & 1u) e += device_.epsilon()(static_cast<Eigen::Index>(i));
            diagonal_(static_cast<Eigen::Index>(b)) = e;
        }

        real_ = true;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double gij = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (gij == 0.0) continue;
                for (int mu = 0; mu < 3; ++mu) {
                    for (int nu = 0; nu < 3; ++nu) {
                        // the two ordered sums over (i, j) and (j, i) give the
                        // symmetric part of J once per unordered pair
                        const double c = gij * js(mu, nu);
                        if (c == 0.0) continue;
                        spectral_bound_ += std::abs(c);
                        if (mu == 2 && nu == 2) {
                            for (std::uint64_t b = 0; b < dim(); ++b) {
                                const bool zi = b >> i & 1u;
                                const bool zj = b >> j & 1u;
                                diagonal_(static_cast<Eigen::Index>(b)) += (zi == zj) ? c : -c;
                            }
                            continue;
                        }
                        if ((mu == 1) != (nu == 1)) real_ = false;
                        terms_.push_back({static_cast<int>(i), static_cast<int>(j), mu, nu, c});
                    }
                }
            }
        }
    }

    DeviceParams device_;
    CouplingTensor coupling_;
    RealVector diagonal_;
    std::vector<PairTerm> terms_;
    double spectral_bound_ = 0.0;
    bool real_ = true;
};

enum class FullMethod { Auto, EigenExact, OdeRk4 };

struct FullEvolution {
    FullState state;      // renormalized
    double norm_drift;    // | ||psi(t)|| - 1 | before renormalization
    std::size_t steps;    // RK4 steps, 0 for the eigen path
    FullMethod method;    // method actually used
};

/// Propagates under the full Hamiltonian: eigendecomposition for n <= 10,
/// matrix-free RK4 above that (Auto).
inline FullEvolution evolve_full(const FullModel& model, const FullState& f, double t,
                                 FullMethod method = FullMethod::Auto, double theta_max = kDefaultThetaMax) {
    if (model.n() != f.n()) throw DimensionMismatch("full state and model differ in n");
    if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
    if (method == FullMethod::Auto)
        method = model.n() <= kMaxFullEigenQubits ? FullMethod::EigenExact : FullMethod::OdeRk4;
    if (method == FullMethod::EigenExact && model.n() > kMaxFullEigenQubits)
        throw SizeLimitError("dense eigen path limited to n <= " + std::to_string(kMaxFullEigenQubits));

    ComplexVector out;
    std::size_t steps = 0;
    if (method == FullMethod::EigenExact) {
        const ComplexMatrix h = model.dense();
        auto propagate = [&](const auto& matrix) {
            using Mat = std::decay_t<decltype(matrix)>;
            Eigen::SelfAdjointEigenSolver<Mat> solver(matrix);
            if (solver.info() != Eigen::Success) throw NonFiniteError("full-space eigendecomposition failed");
            ComplexVector coeff = solver.eigenvectors().adjoint().template cast<Complex>() * f.amplitudes();
            for (Eigen::Index k = 0; k < coeff.size(); ++k)
                coeff(k) *= std::polar(1.0, -solver.eigenvalues()(k) * t);
            out = solver.eigenvectors().template cast<Complex>() * coeff;
        };
        if (model.is_real()) {
            const RealMatrix hr = h.real();
            propagate(hr);
        } else {
            propagate(h);
        }
    } else {
        if (!(theta_max > 0.0 && theta_max <= 0.5)) throw InvalidArgument("theta_max must lie in (0, 0.5]");
        steps = detail::rk4_step_count(t, model.spectral_bound(), theta_max);
        ComplexVector in_c, out_c;
        auto apply = [&](const Eigen::Matrix<double, Eigen::Dynamic, 2>& in,
                         Eigen::Matrix<double, Eigen::Dynamic, 2>& result) {
            in_c = detail::join_complex(in);
            model.apply(in_c, out_c);
            result = detail::split_complex(out_c);
        };
        out = steps == 0 ? f.amplitudes()
                         : detail::join_complex(detail::rk4_schroedinger(
                               apply, detail::split_complex(f.amplitudes()), t / static_cast<double>(steps), steps));
    }
    const double norm = out.norm();
    return {FullState(f.n(), out / norm), std::abs(norm - 1.0), steps, method};
}

/// Instantaneous phase flip of one qubit's excited state (idealized 2 pi pulse).
inline FullState apply_qubit_phase_flip(const FullState& f, std::size_t label) {
    if (label < 1 || label > f.n()) throw IndexError("qubit label out of range");
    ComplexVector a = f.amplitudes();
    const std::uint64_t mask = std::uint64_t{1} << (label - 1);
    for (Eigen::Index b = 0; b < a.size(); ++b)
        if (static_cast<std::uint64_t>(b) & mask) a(b) = -a(b);
    return FullState(f.n(), std::move(a));
}

}  // namespace ses
