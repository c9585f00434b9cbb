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
 * @file types.hpp
 * Shared domain types of the single-excitation-subspace (SES) simulator.
 *
 * Units: hbar = 1. Energies and couplings are angular frequencies in rad/us,
 * times are in us. Values quoted as ordinary frequencies (MHz) go through
 * mhz_to_rad_per_us().
 *
 * Qubit labels are 1-based (qubit i = 1..n). In the full 2^n space qubit i is
 * bit (i-1) of the basis index (little-endian), so |0..1_i..0> sits at index
 * 1 << (i-1).
 */
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "errors.hpp"

namespace ses {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kNormTolerance = 1e-12;

constexpr double mhz_to_rad_per_us(double mhz) noexcept { return kTwoPi * mhz; }
constexpr double rad_per_us_to_mhz(double w) noexcept { return w / kTwoPi; }

// ---------------------------------------------------------------------------
// Hardware bounds and device parameters
// ---------------------------------------------------------------------------

/// Limits of the tunable knobs: |g_ij| <= g_max, epsilon_i in [eps_min, eps_max].
struct HardwareBounds {
    double g_max = mhz_to_rad_per_us(100.0);
    double eps_min = mhz_to_rad_per_us(5.0e3);
    double eps_max = mhz_to_rad_per_us(6.0e3);

    double eps_center() const noexcept { return 0.5 * (eps_min + eps_max); }
    double eps_half_width() const noexcept { return 0.5 * (eps_max - eps_min); }

    void validate() const {
        if (!(g_max > 0.0) || !std::isfinite(g_max))
            throw InvalidArgument("g_max must be positive and finite");
        if (!(eps_max >= eps_min) || !std::isfinite(eps_min) || !std::isfinite(eps_max))
            throw InvalidArgument("epsilon range must be a finite interval with min <= max");
    }

    friend bool operator==(const HardwareBounds&, const HardwareBounds&) = default;
};

namespace detail {

inline double bound_slack(double bound) { return bound * 1e-12; }

}  // namespace detail

/// Qubit energies and couplings of a fully connected array.
class DeviceParams {
public:
    DeviceParams(RealVector epsilon, RealMatrix g, HardwareBounds bounds = {})
        : epsilon_(std::move(epsilon)), g_(std::move(g)), bounds_(bounds) {
        bounds_.validate();
        const auto n = epsilon_.size();
        if (n < 1) throw InvalidArgument("device needs at least one qubit");
        if (g_.rows() != n || g_.cols() != n)
            throw DimensionMismatch("coupling matrix must be n x n");
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!std::isfinite(epsilon_(i))) throw NonFiniteError("non-finite qubit energy");
            if (epsilon_(i) < bounds_.eps_min - detail::bound_slack(bounds_.eps_max) ||
                epsilon_(i) > bounds_.eps_max + detail::bound_slack(bounds_.eps_max))
                throw InfeasibleBounds("qubit " + std::to_string(i + 1) +
                                       " energy outside epsilon range");
            if (g_(i, i) != 0.0) throw InvalidArgument("coupling matrix diagonal must be zero");
            for (Eigen::Index j = i + 1; j < n; ++j) {
                if (!std::isfinite(g_(i, j)) || !std::isfinite(g_(j, i)))
                    throw NonFiniteError("non-finite coupling");
                if (g_(i, j) != g_(j, i)) throw AsymmetricInput("coupling matrix must be symmetric");
                if (std::abs(g_(i, j)) > bounds_.g_max + detail::bound_slack(bounds_.g_max))
                    throw InfeasibleBounds("coupling (" + std::to_string(i + 1) + "," +
                                           std::to_string(j + 1) + ") exceeds g_max");
            }
        }
    }

    std::size_t n() const noexcept { return static_cast<std::size_t>(epsilon_.size()); }
    const RealVector& epsilon() const noexcept { return epsilon_; }
    const RealMatrix& g() const noexcept { return g_; }
    const HardwareBounds& bounds() const noexcept { return bounds_; }

private:
    RealVector epsilon_;
    RealMatrix g_;
    HardwareBounds bounds_;
};

// ---------------------------------------------------------------------------
// States and Hamiltonians
// ---------------------------------------------------------------------------

/// Normalized amplitude vector over the SES basis |1), ..., |n).
class SesState {
public:
    /// Throws unless sum |a_i|^2 == 1 within kNormTolerance.
    explicit SesState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() < 1) throw InvalidArgument("SES state needs n >= 1");
        if (!amplitudes_.allFinite()) throw NonFiniteError("non-finite SES amplitude");
        const double norm2 = amplitudes_.squaredNorm();
        if (std::abs(norm2 - 1.0) > kNormTolerance)
            throw InvalidArgument("SES state is not normalized (norm^2 = " +
                                  std::to_string(norm2) + ")");
    }

    /// Scales the amplitudes to unit norm first.
    static SesState normalized(ComplexVector amplitudes) {
        const double norm = amplitudes.norm();
        if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("cannot normalize zero vector");
        amplitudes /= norm;
        return SesState(std::move(amplitudes));
    }

    std::size_t n() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t label) const { return amplitudes_(static_cast<Eigen::Index>(label - 1)); }

    RealVector probabilities() const { return amplitudes_.cwiseAbs2(); }

private:
    ComplexVector amplitudes_;
};

/// Real symmetric n x n matrix acting in the SES. The upper triangle is
/// authoritative; the lower triangle is overwritten with its mirror.
class SesHamiltonian {
public:
    explicit SesHamiltonian(RealMatrix matrix) : matrix_(std::move(matrix)) {
        if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
            throw DimensionMismatch("SES Hamiltonian must be square with n >= 1");
        if (!matrix_.allFinite()) throw NonFiniteError("non-finite Hamiltonian entry");
        for (Eigen::Index j = 0; j < matrix_.cols(); ++j)
            for (Eigen::Index i = j + 1; i < matrix_.rows(); ++i) matrix_(i, j) = matrix_(j, i);
    }

    std::size_t n() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    const RealMatrix& matrix() const noexcept { return matrix_; }
    double operator()(std::size_t i, std::size_t j) const {
        return matrix_(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
    }

    /// Largest |H_ij|.
    double max_abs_entry() const { return matrix_.cwiseAbs().maxCoeff(); }

    /// Induced infinity norm (max absolute row sum); bounds the spectral radius.
    double row_sum_norm() const { return matrix_.cwiseAbs().rowwise().sum().maxCoeff(); }

    double expectation(const SesState& s) const {
        return (s.amplitudes().adjoint() * (matrix_.cast<Complex>() * s.amplitudes()))(0).real();
    }

private:
    RealMatrix matrix_;
};

/// Normalized state over the full 2^n computational basis.
class FullState {
public:
    FullState(std::size_t n, ComplexVector amplitudes) : n_(n), amplitudes_(std::move(amplitudes)) {
        if (n_ < 1 || n_ > 30) throw InvalidArgument("full state qubit count out of range");
        if (amplitudes_.size() != (Eigen::Index{1} << n_))
            throw DimensionMismatch("full state needs 2^n amplitudes");
        if (!amplitudes_.allFinite()) throw NonFiniteError("non-finite full-space amplitude");
        if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance)
            throw InvalidArgument("full state is not normalized");
    }

    static FullState ground(std::size_t n) {
        ComplexVector a = ComplexVector::Zero(Eigen::Index{1} << n);
        a(0) = 1.0;
        return FullState(n, std::move(a));
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t dim() const noexcept { return std::size_t{1} << n_; }
    const ComplexVector& amplitudes() const noexcept { return amplitudes_; }

private:
    std::size_t n_;
    ComplexVector amplitudes_;
};

/// Coupling tensor J_{mu nu}, mu, nu in {x, y, z} (rows/cols 0, 1, 2).
struct CouplingTensor {
    Eigen::Matrix3d J = xx().J;

    static CouplingTensor xx() {
        CouplingTensor t{Eigen::Matrix3d::Zero()};
        t.J(0, 0) = 1.0;
        return t;
    }

    static CouplingTensor diagonal(double jxx, double jyy, double jzz) {
        CouplingTensor t{Eigen::Matrix3d::Zero()};
        t.J(0, 0) = jxx;
        t.J(1, 1) = jyy;
        t.J(2, 2) = jzz;
        return t;
    }

    double operator()(int mu, int nu) const { return J(mu, nu); }
};

// ---------------------------------------------------------------------------
// Basic state algebra
// ---------------------------------------------------------------------------

/// |i) for i in 1..n.
inline SesState ses_basis_state(std::size_t n, std::size_t label) {
    if (n < 1) throw InvalidArgument("n must be >= 1");
    if (label < 1 || label > n)
        throw IndexError("basis label " + std::to_string(label) + " outside 1.." + std::to_string(n));
    ComplexVector a = ComplexVector::Zero(static_cast<Eigen::Index>(n));
    a(static_cast<Eigen::Index>(label - 1)) = 1.0;
    return SesState(std::move(a));
}

/// W-type state (|1) + ... + |n)) / sqrt(n).
inline SesState uniform_state(std::size_t n) {
    if (n < 1) throw InvalidArgument("uniform state needs n >= 1");
    return SesState(ComplexVector::Constant(static_cast<Eigen::Index>(n), 1.0 / std::sqrt(static_cast<double>(n))));
}

/// |<a|b>|^2.
inline double fidelity(const SesState& a, const SesState& b) {
    if (a.n() != b.n()) throw DimensionMismatch("fidelity of states with different n");
    return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

inline double fidelity(const FullState& a, const FullState& b) {
    if (a.n() != b.n()) throw DimensionMismatch("fidelity of states with different n");
    return std::min(1.0, std::norm(a.amplitudes().dot(b.amplitudes())));
}

constexpr std::size_t ses_full_index(std::size_t label) noexcept { return std::size_t{1} << (label - 1); }

inline FullState embed_ses_in_full(const SesState& s) {
    const std::size_t n = s.n();
    if (n > 30) throw SizeLimitError("cannot embed n > 30 into a full state vector");
    ComplexVector full = ComplexVector::Zero(Eigen::Index{1} << n);
    for (std::size_t i = 1; i <= n; ++i) full(static_cast<Eigen::Index>(ses_full_index(i))) = s[i];
    return FullState(n, std::move(full));
}

struct SesProjection {
    SesState state;
    double leakage;  // 1 - sum_i |a_i|^2, in [0, 1]
};

inline SesProjection project_full_to_ses(const FullState& f) {
    const std::size_t n = f.n();
    ComplexVector a(static_cast<Eigen::Index>(n));
    for (std::size_t i = 1; i <= n; ++i)
        a(static_cast<Eigen::Index>(i - 1)) = f.amplitudes()(static_cast<Eigen::Index>(ses_full_index(i)));
    const double weight = a.squaredNorm();
    if (weight < 1e-15) throw DegenerateProjection("state has no single-excitation weight");
    // Sum of the complement avoids cancellation in 1 - weight.
    double outside = 0.0;
    for (Eigen::Index b = 0; b < f.amplitudes().size(); ++b)
        if (std::popcount(static_cast<std::uint64_t>(b)) != 1) outside += std::norm(f.amplitudes()(b));
    const double leakage = std::clamp(outside / (outside + weight), 0.0, 1.0);
    a /= std::sqrt(weight);
    return {SesState(std::move(a)), leakage};
}

}  // namespace ses
