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

#include <gtest/gtest.h>

#include <random>

#include "radpair/operators.hpp"
#include "radpair/presets.hpp"

namespace radpair {
namespace {

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

SpinSystem mixed_system(std::vector<double> spins) {
    SpinSystem s;
    s.field_mT = 0.3;
    for (std::size_t j = 0; j < spins.size(); ++j) {
        s.nuclei.push_back({spins[j], j % 2 ? Electron::second : Electron::first,
                            HyperfineCoupling::isotropic(3.0 + static_cast<double>(j))});
    }
    return s;
}

void expect_projector_algebra(const OperatorSet& ops) {
    const auto d = static_cast<Eigen::Index>(ops.dim);
    const CMatrix id = CMatrix::Identity(d, d);
    EXPECT_LT(max_abs(ops.q_singlet * ops.q_singlet - ops.q_singlet), 1e-12);
    EXPECT_LT(max_abs(ops.q_triplet * ops.q_triplet - ops.q_triplet), 1e-12);
    EXPECT_LT(max_abs(ops.q_singlet + ops.q_triplet - id), 1e-12);
    EXPECT_LT(max_abs(ops.q_singlet * ops.q_triplet), 1e-12);
    EXPECT_NEAR(ops.q_singlet.trace().real(), static_cast<double>(ops.dim) / 4.0, 1e-12);
    EXPECT_LT(max_abs(ops.h - ops.h.adjoint()), 1e-12);
    EXPECT_LT(max_abs(ops.q_singlet - ops.q_singlet.adjoint()), 1e-12);
}

TEST(SpinMatrices, SpinHalfIsPauliOverTwo) {
    const SpinMatrices s = spin_matrices(0.5);
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    x << 0, 0.5, 0.5, 0;
    y << 0, Complex(0, -0.5), Complex(0, 0.5), 0;
    z << 0.5, 0, 0, -0.5;
    EXPECT_EQ(s.x, x);
    EXPECT_EQ(s.y, y);
    EXPECT_EQ(s.z, z);
}

TEST(SpinMatrices, CommutationAndCasimir) {
    for (double spin : {0.5, 1.0, 1.5, 2.5}) {
        const SpinMatrices s = spin_matrices(spin);
        const CMatrix comm = s.x * s.y - s.y * s.x;
        EXPECT_LT(max_abs(comm - Complex(0, 1) * s.z), 1e-12) << spin;
        const CMatrix casimir = s.x * s.x + s.y * s.y + s.z * s.z;
        const auto n = casimir.rows();
        EXPECT_LT(max_abs(casimir - spin * (spin + 1.0) * CMatrix::Identity(n, n)), 1e-12) << spin;
        EXPECT_DOUBLE_EQ(s.z(0, 0).real(), spin);  // highest m first
    }
}

TEST(Kron, MatchesBlockDefinition) {
    CMatrix a(2, 2), b(2, 3);
    a << 1, 2, 3, 4;
    b << 0, 1, 2, 3, 4, 5;
    const CMatrix k = kron(a, b);
    ASSERT_EQ(k.rows(), 4);
    ASSERT_EQ(k.cols(), 6);
    EXPECT_EQ(k(1, 4), a(0, 1) * b(1, 1));
    EXPECT_EQ(k(3, 5), a(1, 1) * b(1, 2));
}

TEST(SpinSystem, DimensionFormula) {
    EXPECT_EQ(SpinSystem{}.dimension(), 4u);
    EXPECT_EQ(one_nucleus_system(1.0, 0.0).dimension(), 8u);
    EXPECT_EQ(mixed_system({1.0, 0.5, 1.5}).dimension(), 4u * 3u * 2u * 4u);
    EXPECT_EQ(kPyDmaPresets[0].system().dimension(), 16u);
}

TEST(SpinSystem, RejectsInvalidSpinAndField) {
    SpinSystem s = one_nucleus_system(1.0, 0.0);
    s.nuclei[0].spin = 0.7;
    EXPECT_THROW(s.validate(), InvalidArgument);
    s.nuclei[0].spin = 0.0;
    EXPECT_THROW(s.validate(), InvalidArgument);
    s = one_nucleus_system(1.0, -1.0);
    EXPECT_THROW(s.validate(), InvalidArgument);
    EXPECT_THROW(HyperfineCoupling(Eigen::Matrix3d::Constant(std::nan(""))), InvalidArgument);
}

TEST(HyperfineCoupling, IsotropicConstructor) {
    const auto a = HyperfineCoupling::isotropic(4.0);
    EXPECT_TRUE(a.is_isotropic());
    EXPECT_EQ(a.tensor(), 4.0 * Eigen::Matrix3d::Identity());
    EXPECT_DOUBLE_EQ(HyperfineCoupling::isotropic_mT(1.0).isotropic_value(), kGammaElectron);
}

TEST(BuildOperators, ProjectorAlgebraForSeveralSystems) {
    const std::vector<std::vector<double>> cases{{}, {0.5}, {1.0}, {0.5, 0.5}, {0.5, 1.0}, {1.0, 1.0}};
    for (const auto& spins : cases) {
        SCOPED_TRACE(spins.size());
        expect_projector_algebra(build_operators(mixed_system(spins)));
    }
}

TEST(BuildOperators, RandomAnisotropicSystemsKeepInvariants) {
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int trial = 0; trial < 8; ++trial) {
        SpinSystem s;
        s.field_mT = 0.5 * std::abs(u(gen));
        const int n = 1 + trial % 3;
        for (int j = 0; j < n; ++j) {
            Eigen::Matrix3d t;
            for (int k = 0; k < 9; ++k) t(k / 3, k % 3) = u(gen);
            s.nuclei.push_back({(trial + j) % 2 ? 1.0 : 0.5, j % 2 ? Electron::second : Electron::first,
                                HyperfineCoupling(t)});
        }
        expect_projector_algebra(build_operators(s));
    }
}

TEST(BuildOperators, SingletProjectorMatchesExplicitSingletState) {
    // Electron basis |uu>, |ud>, |du>, |dd>; |S> = (|ud> - |du>) / sqrt(2).
    Eigen::VectorXcd singlet = Eigen::VectorXcd::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    const CMatrix expected = kron(singlet * singlet.adjoint(), CMatrix::Identity(2, 2));
    const OperatorSet ops = build_operators(one_nucleus_system(4.0, 0.05));
    EXPECT_LT(max_abs(ops.q_singlet - expected), 1e-15);
}

TEST(BuildOperators, ZeroNucleiZeemanEigenvalues) {
    SpinSystem s;
    s.field_mT = 0.05;
    const OperatorSet ops = build_operators(s);
    const double omega = 0.05 * 176.0859;
    EXPECT_NEAR(s.omega(), 8.8043, 1e-4);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(ops.h);
    const Eigen::Vector4d expected(-omega, 0.0, 0.0, omega);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(eig.eigenvalues()(k), expected(k), 1e-12);
}

TEST(BuildOperators, OneNucleusHamiltonianByHand) {
    const double a = 3.7;
    const double b = 0.2;
    const OperatorSet ops = build_operators(one_nucleus_system(a, b));
    CMatrix px(2, 2), py(2, 2), pz(2, 2);
    px << 0, 1, 1, 0;
    py << 0, Complex(0, -1), Complex(0, 1), 0;
    pz << 1, 0, 0, -1;
    const CMatrix id = CMatrix::Identity(2, 2);
    auto e1 = [&](const CMatrix& p) { return kron(kron(0.5 * p, id), id); };
    auto e2 = [&](const CMatrix& p) { return kron(kron(id, 0.5 * p), id); };
    auto nuc = [&](const CMatrix& p) { return kron(kron(id, id), 0.5 * p); };
    const double omega = 176.0859 * b;
    const CMatrix h = omega * (e1(pz) + e2(pz)) + a * (e1(px) * nuc(px) + e1(py) * nuc(py) + e1(pz) * nuc(pz));
    EXPECT_LT(max_abs(ops.h - h), 1e-12);
}

TEST(BuildOperators, SecondElectronCouplingUsesSecondSite) {
    SpinSystem s;
    s.nuclei.push_back({0.5, Electron::second, HyperfineCoupling::isotropic(2.0)});
    const OperatorSet ops = build_operators(s);
    const CMatrix id = CMatrix::Identity(2, 2);
    const SpinMatrices h = spin_matrices(0.5);
    CMatrix expected = CMatrix::Zero(8, 8);
    for (std::size_t a = 0; a < 3; ++a) expected += 2.0 * kron(kron(id, h[a]), h[a]);
    EXPECT_LT(max_abs(ops.h - expected), 1e-14);
}

TEST(BuildOperators, IsotropicCouplingConservesTotalZ) {
    for (double field : {0.0, 0.05, 3.0}) {
        const OperatorSet ops = build_operators(one_nucleus_system(7.5, field));
        EXPECT_LT(max_abs(ops.h * ops.total_z - ops.total_z * ops.h), 1e-12);
    }
}

TEST(BuildOperators, Deterministic) {
    const SpinSystem s = mixed_system({0.5, 1.0});
    const OperatorSet a = build_operators(s);
    const OperatorSet b = build_operators(s);
    EXPECT_TRUE((a.h.array() == b.h.array()).all());
    EXPECT_TRUE((a.q_singlet.array() == b.q_singlet.array()).all());
}

TEST(BuildOperators, ZeroHyperfineCommutesWithSinglet) {
    SpinSystem s = mixed_system({0.5, 1.0});
    for (auto& n : s.nuclei) n.hyperfine = HyperfineCoupling::isotropic(0.0);
    const OperatorSet ops = build_operators(s);
    EXPECT_LT(max_abs(ops.h * ops.q_singlet - ops.q_singlet * ops.h), 1e-12);
}

TEST(BuildOperators, DimensionCap) {
    const SpinSystem big = mixed_system({1.5, 1.5, 1.5, 1.5});  // 4 * 256
    EXPECT_THROW(build_operators(big), DimensionError);
    EXPECT_THROW(build_operators(mixed_system({0.5, 0.5}), 8), DimensionError);
    EXPECT_NO_THROW(build_operators(mixed_system({0.5, 0.5}), 16));
}

TEST(SpectralRadius, MatchesLargestMagnitudeEigenvalue) {
    CMatrix m(2, 2);
    m << 1.0, Complex(0, 2), Complex(0, -2), -3.0;
    // Eigenvalues -1 -+ sqrt(8).
    EXPECT_NEAR(spectral_radius(m), 1.0 + std::sqrt(8.0), 1e-12);
}

}  // namespace
}  // namespace radpair
