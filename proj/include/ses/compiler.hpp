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
 * @file compiler.hpp
 * Maps device parameters to SES matrix elements and target Hamiltonians to
 * device parameters (shift + lambda scaling into the hardware coupling bound).
 */
#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "types.hpp"

namespace ses {

/// SES matrix of the sigma^x (x) sigma^x array: H_ii' = eps_i delta_ii' + g_ii'.
inline SesHamiltonian ses_matrix_elements(const DeviceParams& device) {
    RealMatrix h = device.g();
    h.diagonal() = device.epsilon();
    return SesHamiltonian(std::move(h));
}

enum class ConstantShift { Keep, Drop };

/// Throws CouplingConditionViolated if J has no exchange component or if
/// J_xy != J_yx.
inline void check_coupling_conditions(const CouplingTensor& t) {
    const double scale = std::max(1.0, t.J.cwiseAbs().maxCoeff());
    if (!t.J.allFinite()) throw InvalidArgument("coupling tensor has non-finite entries");
    if (std::abs(t(0, 0) + t(1, 1)) <= 1e-14 * scale)
        throw CouplingConditionViolated(CouplingConditionViolated::Condition::ExchangeComponent,
                                        "coupling tensor violates J_xx + J_yy != 0 (no exchange component)");
    if (std::abs(t(0, 1) - t(1, 0)) > 1e-12 * scale)
        throw CouplingConditionViolated(CouplingConditionViolated::Condition::SymmetricXY,
                                        "coupling tensor violates J_xy == J_yx (complex SES couplings)");
}

/// SES matrix elements for a general two-qubit coupling tensor J.
///
/// Diagonal: eps_i - 2 (sum_j g_ij) J_zz + (sum_{j<j'} g_jj') J_zz.
/// Off-diagonal: (J_xx + J_yy) g_ii'.
/// With ConstantShift::Keep the result equals the exact projection of the full
/// Hamiltonian; Drop removes the i-independent last diagonal term.
inline SesHamiltonian ses_matrix_elements_general(const DeviceParams& device, const CouplingTensor& t,
                                                  ConstantShift shift = ConstantShift::Keep) {
    check_coupling_conditions(t);
    const RealMatrix& g = device.g();
    const double jzz = t(2, 2);
    const double pair_sum = g.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().sum();
    RealMatrix h = (t(0, 0) + t(1, 1)) * g;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        h(i, i) = device.epsilon()(i) - 2.0 * g.row(i).sum() * jzz;
        if (shift == ConstantShift::Keep) h(i, i) += pair_sum * jzz;
    }
    return SesHamiltonian(std::move(h));
}

// ---------------------------------------------------------------------------
// Target Hamiltonians and the lambda-scaling compiler
// ---------------------------------------------------------------------------

/// Real symmetric problem Hamiltonian. Ingest rejects asymmetry beyond
/// 1e-12 relative to the largest entry, then mirrors the upper triangle.
class TargetHamiltonian {
public:
    explicit TargetHamiltonian(RealMatrix matrix, std::string unit_scale = "dimensionless")
        : unit_scale_(std::move(unit_scale)) {
        if (matrix.rows() != matrix.cols() || matrix.rows() < 1)
            throw DimensionMismatch("target Hamiltonian must be square with n >= 1");
        if (!matrix.allFinite()) throw NonFiniteError("non-finite target Hamiltonian entry");
        const double tol = 1e-12 * matrix.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < matrix.rows(); ++i)
            for (Eigen::Index j = i + 1; j < matrix.cols(); ++j)
                if (std::abs(matrix(i, j) - matrix(j, i)) > tol)
                    throw AsymmetricInput("target Hamiltonian asymmetric at (" + std::to_string(i + 1) + "," +
                                          std::to_string(j + 1) + ")");
        matrix_ = SesHamiltonian(std::move(matrix)).matrix();
    }

    std::size_t n() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    const RealMatrix& matrix() const noexcept { return matrix_; }
    const std::string& unit_scale() const noexcept { return unit_scale_; }
    SesHamiltonian as_ses() const { return SesHamiltonian(matrix_); }

private:
    RealMatrix matrix_;
    std::string unit_scale_;
};

struct CompileOptions {
    /// Enlarge lambda instead of failing when a detuning exceeds the
    /// epsilon-range half width.
    bool auto_relax = false;
};

/// Output of compile(): device settings plus the scaling that relates the
/// device evolution to the target evolution.
struct CompiledProgram {
    DeviceParams device;
    double lambda;
    double shift;
    double t_sim;
    double t_qc;    // lambda * t_sim
    double t_meas;
    double t_qu;    // t_qc + t_meas
    bool relaxed;
    /// (H - shift I) / lambda. Equals the device SES matrix minus the common
    /// rotating-frame offset eps_center, without the rounding of that offset.
    RealMatrix scaled;

    SesHamiltonian h_qc() const { return SesHamiltonian(scaled); }
};

inline CompiledProgram compile(const TargetHamiltonian& target, const HardwareBounds& bounds, double t_sim,
                               double t_meas, const CompileOptions& options = {}) {
    bounds.validate();
    if (!(t_sim >= 0.0) || !std::isfinite(t_sim)) throw InvalidArgument("t_sim must be finite and >= 0");
    if (!(t_meas >= 0.0) || !std::isfinite(t_meas)) throw InvalidArgument("t_meas must be finite and >= 0");

    const RealMatrix& h = target.matrix();
    const auto n = h.rows();
    const double shift = 0.5 * (h.diagonal().maxCoeff() + h.diagonal().minCoeff());
    const double diag_extent = (h.diagonal().array() - shift).abs().maxCoeff();
    double off_extent = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) off_extent = std::max(off_extent, std::abs(h(i, j)));

    const double extent = std::max(diag_extent, off_extent);
    double lambda = extent > 0.0 ? extent / bounds.g_max : 1.0;

    bool relaxed = false;
    const double half_width = bounds.eps_half_width();
    if (diag_extent / lambda > half_width * (1.0 + 1e-12)) {
        if (!options.auto_relax)
            throw InfeasibleBounds("required detuning " + std::to_string(diag_extent / lambda) +
                                   " rad/us exceeds epsilon half-width " + std::to_string(half_width));
        if (!(half_width > 0.0)) throw InfeasibleBounds("epsilon range has zero width");
        lambda = diag_extent / half_width;
        relaxed = true;
    }

    RealMatrix scaled = h;
    scaled.diagonal().array() -= shift;
    scaled /= lambda;

    RealVector epsilon(n);
    RealMatrix g = RealMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        epsilon(i) = std::clamp(bounds.eps_center() + scaled(i, i), bounds.eps_min, bounds.eps_max);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double gij = std::clamp(scaled(i, j), -bounds.g_max, bounds.g_max);
            g(i, j) = gij;
            g(j, i) = gij;
        }
    }

    const double t_qc = lambda * t_sim;
    return CompiledProgram{DeviceParams(std::move(epsilon), std::move(g), bounds),
                           lambda,
                           shift,
                           t_sim,
                           t_qc,
                           t_meas,
                           t_qc + t_meas,
                           relaxed,
                           std::move(scaled)};
}

/// Global phase relating the two evolutions:
///   exp(-i H t_sim) psi = phase * exp(-i H_qc t_qc) psi.
struct PhaseCorrection {
    Complex phase;

    ComplexVector restore(const ComplexVector& evolved_qc) const { return phase * evolved_qc; }
    SesState restore(const SesState& evolved_qc) const { return SesState(restore(evolved_qc.amplitudes())); }
};

inline PhaseCorrection decompile_evolution(const CompiledProgram& p) {
    return {std::polar(1.0, -p.shift * p.t_sim)};
}

}  // namespace ses
