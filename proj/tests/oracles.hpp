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

// Independent reference computations used only by the tests. Nothing here
// shares code paths with the library implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace ses::ref {

using Cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(int mu) {
    Mat m(2, 2);
    switch (mu) {
        case 0: m << 0, 1, 1, 0; break;
        case 1: m << 0, Cd(0, -1), Cd(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

/// Operator `single` on qubit `label` (1-based) of n qubits, qubit label at bit
/// (label-1): the rightmost Kronecker factor is qubit 1.
inline Mat on_qubit(std::size_t n, std::size_t label, const Mat& single) {
    Mat out = Mat::Identity(1, 1);
    for (std::size_t q = n; q >= 1; --q) {
        const Mat factor = q == label ? single : Mat(Mat::Identity(2, 2));
        out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return out;
}

/// sum_i eps_i c^+c + 1/2 sum_{i != i'} g_ii' sum J_{mu nu} s^mu_i s^nu_i', by Kronecker products.
inline Mat kron_hamiltonian(const Eigen::VectorXd& eps, const Eigen::MatrixXd& g, const Eigen::Matrix3d& J) {
    const auto n = static_cast<std::size_t>(eps.size());
    Mat number(2, 2);
    number << 0, 0, 0, 1;
    const auto dim = Eigen::Index{1} << n;
    Mat h = Mat::Zero(dim, dim);
    for (std::size_t i = 1; i <= n; ++i) h += eps(static_cast<Eigen::Index>(i - 1)) * on_qubit(n, i, number);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
            if (i == j) continue;
            const double gij = g(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(j - 1));
            for (int mu = 0; mu < 3; ++mu)
                for (int nu = 0; nu < 3; ++nu)
                    if (J(mu, nu) != 0.0)
                        h += 0.5 * gij * J(mu, nu) * on_qubit(n, i, pauli(mu)) * on_qubit(n, j, pauli(nu));
        }
    return h;
}

/// <i|H|i'> over the SES basis vectors e_{2^(i-1)}.
inline Mat project_ses(const Mat& full, std::size_t n) {
    Mat out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                full(Eigen::Index{1} << i, Eigen::Index{1} << j);
    return out;
}

/// exp(-i H t) psi through Pade scaling-and-squaring (Eigen MatrixFunctions).
inline Eigen::VectorXcd expm_apply(const Eigen::MatrixXd& h, const Eigen::VectorXcd& psi, double t) {
    const Mat a = Cd(0, -t) * h.cast<Cd>();
    const Mat u = a.exp();
    return u * psi;
}

inline Eigen::MatrixXd random_symmetric(std::size_t n, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> d(0.0, scale);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i; j < m.cols(); ++j) m(i, j) = m(j, i) = d(rng);
    return m;
}

inline Eigen::VectorXcd random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> d;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Cd(d(rng), d(rng));
    return v / v.norm();
}

/// Marked-state probability of Grover search by repeated explicit
/// reflections on a real vector.
inline std::vector<double> grover_brute_force(std::size_t n, std::size_t marked, std::size_t k) {
    std::vector<double> a(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> out{a[marked - 1] * a[marked - 1]};
    for (std::size_t it = 0; it < k; ++it) {
        a[marked - 1] = -a[marked - 1];
        double mean = 0;
        for (double x : a) mean += x;
        mean /= static_cast<double>(n);
        for (double& x : a) x = 2 * mean - x;
        out.push_back(a[marked - 1] * a[marked - 1]);
    }
    return out;
}

/// Asymptotic Kolmogorov distribution tail P(K > x).
inline double kolmogorov_tail(double x) {
    if (x < 1e-3) return 1.0;
    double sum = 0;
    for (int k = 1; k < 200; ++k) sum += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace ses::ref
