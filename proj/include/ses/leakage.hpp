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
 * @file leakage.hpp
 * Runs SES protocols in the full lab-frame model and compares the projected
 * result against the ideal SES evolution, as a function of g / eps.
 */
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "algorithms.hpp"
#include "full_model.hpp"

namespace ses {

enum class LeakageProtocol { PrepUniform, GroverStep, RandomH };

inline std::string_view to_string(LeakageProtocol p) {
    switch (p) {
        case LeakageProtocol::PrepUniform: return "prep_uniform";
        case LeakageProtocol::GroverStep: return "grover_step";
        case LeakageProtocol::RandomH: return "random_H";
    }
    return "?";
}

inline LeakageProtocol parse_leakage_protocol(std::string_view s) {
    if (s == "prep_uniform") return LeakageProtocol::PrepUniform;
    if (s == "grover_step") return LeakageProtocol::GroverStep;
    if (s == "random_H") return LeakageProtocol::RandomH;
    throw InvalidArgument("unknown leakage protocol '" + std::string(s) + "'");
}

struct LeakageScanConfig {
    std::size_t n = 4;
    LeakageProtocol protocol = LeakageProtocol::PrepUniform;
    CouplingTensor coupling = CouplingTensor::xx();
    double epsilon = mhz_to_rad_per_us(5.5e3);  // common qubit energy, rad/us
    std::uint64_t seed = 0;                     // random_H only
    FullMethod method = FullMethod::Auto;
    /// When set, the couplers are switched off (ratio only sets the time scale).
    bool zero_coupling = false;
};

struct LeakageRow {
    double ratio;
    double leakage;
    double ses_fidelity;
};

namespace detail {

/// Bounds that admit exactly the given device settings.
inline HardwareBounds covering_bounds(const RealVector& eps, const RealMatrix& g) {
    HardwareBounds b;
    b.eps_min = eps.minCoeff();
    b.eps_max = eps.maxCoeff();
    b.g_max = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
    return b;
}

struct ProtocolSetup {
    DeviceParams device;
    SesState initial;
    double time;
    std::optional<std::size_t> phase_flip;  // qubit flipped before evolving
};

inline ProtocolSetup setup_protocol(const LeakageScanConfig& cfg, double ratio) {
    const std::size_t n = cfg.n;
    const auto dim = static_cast<Eigen::Index>(n);
    const double g = ratio * cfg.epsilon;
    RealVector eps = RealVector::Constant(dim, cfg.epsilon);
    RealMatrix coupling = RealMatrix::Zero(dim, dim);
    std::optional<std::size_t> flip;
    SesState initial = ses_basis_state(n, 1);
    double time = 0.0;

    switch (cfg.protocol) {
        case LeakageProtocol::PrepUniform: {
            const RealMatrix star = star_hamiltonian(n, g).matrix();
            eps(0) += star(0, 0);
            coupling = star;
            coupling(0, 0) = 0.0;
            time = prep_uniform_time(n, g);
            break;
        }
        case LeakageProtocol::GroverStep: {
            coupling = all_to_all_hamiltonian(n, g).matrix();
            initial = uniform_state(n);
            flip = 1;
            time = inversion_time(n, g);
            break;
        }
        case LeakageProtocol::RandomH: {
            std::mt19937_64 rng(cfg.seed);
            std::uniform_real_distribution<double> u(-g, g);
            for (Eigen::Index i = 0; i < dim; ++i) {
                eps(i) += u(rng);
                for (Eigen::Index j = i + 1; j < dim; ++j) coupling(i, j) = coupling(j, i) = u(rng);
            }
            initial = ses_basis_state(n, 1);
            time = std::numbers::pi / (2.0 * g);
            break;
        }
    }
    if (cfg.zero_coupling) coupling.setZero();
    HardwareBounds bounds = covering_bounds(eps, coupling);
    return {DeviceParams(std::move(eps), std::move(coupling), bounds), std::move(initial), time, flip};
}

}  // namespace detail

/// One row per ratio g/eps, in input order.
inline std::vector<LeakageRow> leakage_scan(const LeakageScanConfig& cfg, const std::vector<double>& ratios) {
    if (cfg.n < 2) throw InvalidArgument("leakage scan needs n >= 2");
    if (cfg.n > kMaxFullQubits) throw SizeLimitError("leakage scan limited to n <= " + std::to_string(kMaxFullQubits));
    std::vector<LeakageRow> rows;
    rows.reserve(ratios.size());
    for (double ratio : ratios) {
        if (!(ratio > 0.0) || !std::isfinite(ratio)) throw InvalidArgument("ratios must be positive");
        auto setup = detail::setup_protocol(cfg, ratio);

        SesState ses_in = setup.initial;
        FullState full_in = embed_ses_in_full(setup.initial);
        if (setup.phase_flip) {
            ses_in = SesState(oracle(cfg.n, *setup.phase_flip).cast<Complex>().cwiseProduct(ses_in.amplitudes()));
            full_in = apply_qubit_phase_flip(full_in, *setup.phase_flip);
        }
        const SesState ideal = evolve_exact(ses_matrix_elements_general(setup.device, cfg.coupling), ses_in, setup.time);

        const FullModel model(setup.device, cfg.coupling);
        const FullEvolution full = evolve_full(model, full_in, setup.time, cfg.method);
        const SesProjection projected = project_full_to_ses(full.state);
        rows.push_back({ratio, projected.leakage, fidelity(projected.state, ideal)});
    }
    return rows;
}

}  // namespace ses
