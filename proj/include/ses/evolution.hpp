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
 * @file evolution.hpp
 * SES propagators: exact propagation through the eigendecomposition of the
 * real symmetric Hamiltonian, and fixed-step classical RK4 integration of
 * d/dt psi = -i H psi.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

#include <Eigen/Eigenvalues>

#include "types.hpp"

namespace ses {

/// Cached eigendecomposition H = V diag(w) V^T.
class EigenPropagator {
public:
    explicit EigenPropagator(const SesHamiltonian& h) : n_(h.n()) {
        if (!h.matrix().allFinite()) throw NonFiniteError("Hamiltonian has non-finite entries");
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h.matrix());
        if (solver.info() != Eigen::Success) throw NonFiniteError("eigendecomposition failed");
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors();
    }

    std::size_t n() const noexcept { return n_; }
    const RealVector& eigenvalues() const noexcept { return eigenvalues_; }
    const RealMatrix& eigenvectors() const noexcept { return eigenvectors_; }

    /// V exp(-i diag(w) t) V^T psi.
    ComplexVector apply(const ComplexVector& psi, double t) const {
        if (static_cast<std::size_t>(psi.size()) != n_) throw DimensionMismatch("state and Hamiltonian differ in n");
        if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
        if (t == 0.0) return psi;  // exact identity, no V V^T rounding
        ComplexVector coeff = eigenvectors_.transpose() * psi;
        for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::polar(1.0, -eigenvalues_(k) * t);
        return eigenvectors_ * coeff;
    }

    SesState apply(const SesState& psi, double t) const {
        // Orthogonal V keeps the norm to ~n eps; absorb the last ulps.
        return SesState::normalized(apply(psi.amplitudes(), t));
    }

    /// exp(-i H t) as a dense matrix.
    ComplexMatrix unitary(double t) const {
        ComplexVector phases(eigenvalues_.size());
        for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -eigenvalues_(k) * t);
        return eigenvectors_.cast<Complex>() * phases.asDiagonal() * eigenvectors_.transpose().cast<Complex>();
    }

private:
    std::size_t n_;
    RealVector eigenvalues_;
    RealMatrix eigenvectors_;
};

inline SesState evolve_exact(const SesHamiltonian& h, const SesState& psi, double t) {
    if (h.n() != psi.n()) throw DimensionMismatch("state and Hamiltonian differ in n");
    return EigenPropagator(h).apply(psi, t);
}

inline constexpr double kDefaultThetaMax = 0.05;

struct OdeResult {
    SesState state;        // renormalized final state
    double norm_drift;     // | ||psi(t)|| - 1 | before renormalization
    std::size_t steps;
};

namespace detail {

/// Fixed-step RK4 for d/dt y = -i A y with y stored as [re, im] columns.
/// apply(Y, out) must write A*Y into out.
template <typename Apply>
Eigen::Matrix<double, Eigen::Dynamic, 2> rk4_schroedinger(Apply&& apply, Eigen::Matrix<double, Eigen::Dynamic, 2> y,
                                                          double h, std::size_t steps) {
    using Block = Eigen::Matrix<double, Eigen::Dynamic, 2>;
    const auto rows = y.rows();
    Block ay(rows, 2), k1(rows, 2), k2(rows, 2), k3(rows, 2), k4(rows, 2), tmp(rows, 2);
    // -i (re + i im) = im - i re
    auto rhs = [&](const Block& in, Block& out) {
        apply(in, ay);
        out.col(0) = ay.col(1);
        out.col(1) = -ay.col(0);
    };
    for (std::size_t s = 0; s < steps; ++s) {
        rhs(y, k1);
        tmp.noalias() = y + (0.5 * h) * k1;
        rhs(tmp, k2);
        tmp.noalias() = y + (0.5 * h) * k2;
        rhs(tmp, k3);
        tmp.noalias() = y + h * k3;
        rhs(tmp, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if ((s & 1023u) == 1023u && !y.allFinite()) throw NonFiniteError("RK4 produced non-finite amplitudes");
    }
    if (!y.allFinite()) throw NonFiniteError("RK4 produced non-finite amplitudes");
    return y;
}

inline Eigen::Matrix<double, Eigen::Dynamic, 2> split_complex(const ComplexVector& v) {
    Eigen::Matrix<double, Eigen::Dynamic, 2> y(v.size(), 2);
    y.col(0) = v.real();
    y.col(1) = v.imag();
    return y;
}

inline ComplexVector join_complex(const Eigen::Matrix<double, Eigen::Dynamic, 2>& y) {
    ComplexVector v(y.rows());
    v.real() = y.col(0);
    v.imag() = y.col(1);
    return v;
}

/// Step count for a run of length |t| when no step may advance any phase by
/// more than theta_max, given an upper bound on the spectral radius.
inline std::size_t rk4_step_count(double t, double spectral_bound, double theta_max) {
    if (t == 0.0 || spectral_bound == 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(std::abs(t) * spectral_bound / theta_max));
}

}  // namespace detail

/// Classical fixed-step RK4. The step is h = theta_max / ||H||_inf (max
/// absolute row sum, an upper bound on the spectral radius), rounded down so
/// that ceil(|t| / h) equal steps cover t exactly. The trajectory is never
/// renormalized; only the returned state is, with the drift reported.
inline OdeResult evolve_ode(const SesHamiltonian& h, const SesState& psi, double t,
                            double theta_max = kDefaultThetaMax) {
    if (h.n() != psi.n()) throw DimensionMismatch("state and Hamiltonian differ in n");
    if (!(theta_max > 0.0 && theta_max <= 0.5)) throw InvalidArgument("theta_max must lie in (0, 0.5]");
    if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
    if (!h.matrix().allFinite()) throw NonFiniteError("Hamiltonian has non-finite entries");

    const std::size_t steps = detail::rk4_step_count(t, h.row_sum_norm(), theta_max);
    if (steps == 0) return {psi, 0.0, 0};

    const RealMatrix& m = h.matrix();
    auto apply = [&m](const Eigen::Matrix<double, Eigen::Dynamic, 2>& in, Eigen::Matrix<double, Eigen::Dynamic, 2>& out) {
        out.noalias() = m * in;
    };
    const auto y = detail::rk4_schroedinger(apply, detail::split_complex(psi.amplitudes()),
                                            t / static_cast<double>(steps), steps);
    ComplexVector out = detail::join_complex(y);
    const double norm = out.norm();
    return {SesState(out / norm), std::abs(norm - 1.0), steps};
}

enum class Method { EigenExact, OdeRk4 };

/// Immutable propagator bound to one Hamiltonian and method.
class Propagator {
public:
    Propagator(SesHamiltonian h, Method method, double theta_max = kDefaultThetaMax)
        : h_(std::move(h)), method_(method), theta_max_(theta_max) {
        if (method_ == Method::EigenExact) eigen_.emplace(h_);
        if (!(theta_max_ > 0.0 && theta_max_ <= 0.5)) throw InvalidArgument("theta_max must lie in (0, 0.5]");
    }

    Method method() const noexcept { return method_; }
    const SesHamiltonian& hamiltonian() const noexcept { return h_; }
    double theta_max() const noexcept { return theta_max_; }
    const EigenPropagator* eigen() const noexcept { return eigen_ ? &*eigen_ : nullptr; }

    OdeResult evolve(const SesState& psi, double t) const {
        if (eigen_) {
            ComplexVector out = eigen_->apply(psi.amplitudes(), t);
            const double norm = out.norm();
            return {SesState(out / norm), std::abs(norm - 1.0), 0};
        }
        return evolve_ode(h_, psi, t, theta_max_);
    }

private:
    SesHamiltonian h_;
    Method method_;
    double theta_max_;
    std::optional<EigenPropagator> eigen_;
};

}  // namespace ses
