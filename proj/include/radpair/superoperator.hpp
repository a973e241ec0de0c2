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

#ifndef RADPAIR_SUPEROPERATOR_HPP
#define RADPAIR_SUPEROPERATOR_HPP

#include <unsupported/Eigen/MatrixFunctions>

#include "radpair/master_equation.hpp"

namespace radpair {

/// Liouville-space dimension cap (d^2).
inline constexpr std::size_t kMaxLiouvilleDimension = 65536;

// Column-stacking vectorization: vec(A X B) = (B^T (x) A) vec(X).

inline Eigen::VectorXcd vectorize(const CMatrix& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

inline CMatrix unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim) {
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

/// d^2 x d^2 Liouvillian of the selected master equation.
inline CMatrix liouvillian(const OperatorSet& ops, const RatePair& rates, Theory theory) {
    const auto d = static_cast<Eigen::Index>(ops.dim);
    if (ops.dim * ops.dim > kMaxLiouvilleDimension) {
        throw DimensionError("Liouville space d^2 = " + std::to_string(ops.dim * ops.dim) +
                             " exceeds cap " + std::to_string(kMaxLiouvilleDimension));
    }
    const CMatrix id = CMatrix::Identity(d, d);
    auto left = [&](const CMatrix& a) { return kron(id, a); };                // A X
    auto right = [&](const CMatrix& b) { return kron(b.transpose(), id); };   // X B

    CMatrix l = Complex(0.0, -1.0) * (left(ops.h) - right(ops.h));
    const CMatrix& qs = ops.q_singlet;
    if (theory == Theory::quantum) {
        l -= rates.total() * (left(qs) + right(qs) - 2.0 * kron(qs.transpose(), qs));
    } else {
        const CMatrix& qt = ops.q_triplet;
        l -= rates.k_s * (left(qs) + right(qs)) + rates.k_t * (left(qt) + right(qt));
    }
    return l;
}

/// rho(t) = unvec(exp(L t) vec(rho0)) by Pade scaling-and-squaring.
inline DensityState propagate_superoperator(const OperatorSet& ops, const RatePair& rates,
                                            Theory theory, const CMatrix& rho0, double t_us) {
    rates.validate();
    require_valid_density(rho0, ops.dim);
    if (!(t_us >= 0.0) || !std::isfinite(t_us)) throw InvalidArgument("t must be finite and >= 0");
    DensityState out;
    out.time_us = t_us;
    if (t_us == 0.0) {
        out.rho = rho0;
        return out;
    }
    const CMatrix l = liouvillian(ops, rates, theory);
    const CMatrix propagator = (l * t_us).exp();
    out.rho = unvectorize(propagator * vectorize(rho0), static_cast<Eigen::Index>(ops.dim));
    return out;
}

inline DensityState propagate_superoperator(const SpinSystem& system, const RatePair& rates,
                                            Theory theory, const CMatrix& rho0, double t_us) {
    return propagate_superoperator(build_operators(system), rates, theory, rho0, t_us);
}

/// Reusable propagator exp(L dt) for stepping a fixed time grid.
class LiouvilleStepper {
public:
    LiouvilleStepper(const OperatorSet& ops, const RatePair& rates, Theory theory, double dt)
        : dim_(static_cast<Eigen::Index>(ops.dim)),
          propagator_((liouvillian(ops, rates, theory) * dt).exp()) {}

    CMatrix advance(const CMatrix& rho) const {
        return unvectorize(propagator_ * vectorize(rho), dim_);
    }

private:
    Eigen::Index dim_;
    CMatrix propagator_;
};

}  // namespace radpair

#endif  // RADPAIR_SUPEROPERATOR_HPP
