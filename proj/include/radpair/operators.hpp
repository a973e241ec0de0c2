// Copyright 2026 The radpair Authors
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

#ifndef RADPAIR_OPERATORS_HPP
#define RADPAIR_OPERATORS_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "radpair/spin_system.hpp"

namespace radpair {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

/// Cartesian spin matrices for a single spin in the z basis, ordered m = S, S-1, ..., -S.
struct SpinMatrices {
    CMatrix x, y, z;

    const CMatrix& operator[](std::size_t axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
};

inline SpinMatrices spin_matrices(double spin) {
    const auto n = static_cast<Eigen::Index>(std::lround(2.0 * spin)) + 1;
    CMatrix raise = CMatrix::Zero(n, n);
    CMatrix z = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double m = spin - static_cast<double>(k);
        z(k, k) = m;
        // S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1.
        if (k > 0) raise(k - 1, k) = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
    }
    const CMatrix lower = raise.adjoint();
    SpinMatrices s;
    s.x = 0.5 * (raise + lower);
    s.y = Complex(0.0, -0.5) * (raise - lower);
    s.z = std::move(z);
    return s;
}

/// Kronecker product a (x) b.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Dense operators on the full space electron1 (x) electron2 (x) nucleus_1 (x) ... (x) nucleus_n.
struct OperatorSet {
    std::size_t dim = 0;
    CMatrix h;             // total Hamiltonian, rad/us
    CMatrix q_singlet;     // Q_S
    CMatrix q_triplet;     // Q_T = 1 - Q_S
    CMatrix s1z_plus_s2z;  // electron Zeeman operator without omega
    /// Total z angular momentum s1z + s2z + sum_j I_jz; conserved whenever the
    /// couplings are isotropic.
    CMatrix total_z;
};

namespace detail {

/// Embeds a single-site operator into the product space given the site dimensions.
inline CMatrix embed(const std::vector<Eigen::Index>& dims, std::size_t site, const CMatrix& op) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (std::size_t k = 0; k < dims.size(); ++k) {
        out = kron(out, k == site ? op : CMatrix::Identity(dims[k], dims[k]));
    }
    return out;
}

}  // namespace detail

/// Builds H = omega (s1z + s2z) + sum_ij s_i . A_ij . I_j together with the
/// singlet/triplet projectors Q_S = 1/4 - s1 . s2 and Q_T = 1 - Q_S.
inline OperatorSet build_operators(const SpinSystem& system,
                                   std::size_t max_dimension = kDefaultMaxDimension) {
    system.validate();
    const std::size_t d = system.dimension();
    if (d > max_dimension) {
        throw DimensionError("Hilbert-space dimension " + std::to_string(d) + " exceeds cap " +
                             std::to_string(max_dimension));
    }

    std::vector<Eigen::Index> dims{2, 2};
    for (const auto& n : system.nuclei) dims.push_back(static_cast<Eigen::Index>(n.multiplicity()));

    const SpinMatrices half = spin_matrices(0.5);
    std::array<std::array<CMatrix, 3>, 2> electron;
    for (std::size_t e = 0; e < 2; ++e) {
        for (std::size_t a = 0; a < 3; ++a) electron[e][a] = detail::embed(dims, e, half[a]);
    }

    const auto di = static_cast<Eigen::Index>(d);
    OperatorSet ops;
    ops.dim = d;
    ops.s1z_plus_s2z = electron[0][2] + electron[1][2];
    ops.h = system.omega() * ops.s1z_plus_s2z;
    ops.total_z = ops.s1z_plus_s2z;

    for (std::size_t j = 0; j < system.nuclei.size(); ++j) {
        const NucleusSpec& nucleus = system.nuclei[j];
        const SpinMatrices iso = spin_matrices(nucleus.spin);
        std::array<CMatrix, 3> nuc;
        for (std::size_t b = 0; b < 3; ++b) nuc[b] = detail::embed(dims, j + 2, iso[b]);
        ops.total_z += nuc[2];

        const auto& s = electron[nucleus.electron == Electron::first ? 0 : 1];
        const Eigen::Matrix3d& tensor = nucleus.hyperfine.tensor();
        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t b = 0; b < 3; ++b) {
                const double t = tensor(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                if (t != 0.0) ops.h += t * (s[a] * nuc[b]);
            }
        }
    }

    CMatrix s1s2 = CMatrix::Zero(di, di);
    for (std::size_t a = 0; a < 3; ++a) s1s2 += electron[0][a] * electron[1][a];
    ops.q_singlet = 0.25 * CMatrix::Identity(di, di) - s1s2;
    ops.q_triplet = CMatrix::Identity(di, di) - ops.q_singlet;
    return ops;
}

/// Largest |eigenvalue| of a Hermitian matrix.
inline double spectral_radius(const CMatrix& hermitian) {
    if (hermitian.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace radpair

#endif  // RADPAIR_OPERATORS_HPP
