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

#ifndef RADPAIR_MASTER_EQUATION_HPP
#define RADPAIR_MASTER_EQUATION_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "radpair/operators.hpp"

namespace radpair {

/// Which master equation drives the density matrix.
///
/// phenomenological: d rho/dt = -i[H,rho] - kS {Q_S, rho} - kT {Q_T, rho}
/// quantum:          d rho/dt = -i[H,rho] - (kS + kT)(Q_S rho + rho Q_S - 2 Q_S rho Q_S)
///
/// The quantum equation is trace preserving: recombination enters only through
/// the jump probabilities dP_S = 2 kS <Q_S> dt and dP_T = 2 kT <Q_T> dt.
enum class Theory { quantum, phenomenological };

inline std::string_view to_string(Theory t) {
    return t == Theory::quantum ? "quantum" : "phenomenological";
}

/// Short column suffix used in CSV headers.
inline std::string_view column_suffix(Theory t) { return t == Theory::quantum ? "quantum" : "phenom"; }

/// Singlet and triplet recombination rates in us^-1.
struct RatePair {
    double k_s = 0.0;
    double k_t = 0.0;

    void validate() const {
        if (!std::isfinite(k_s) || !std::isfinite(k_t) || k_s < 0.0 || k_t < 0.0) {
            throw InvalidArgument("recombination rates must be finite and >= 0");
        }
    }

    double total() const { return k_s + k_t; }
    bool any() const { return k_s > 0.0 || k_t > 0.0; }

    bool operator==(const RatePair&) const = default;
};

/// Spin density matrix at a point in time.
struct DensityState {
    CMatrix rho;
    double time_us = 0.0;
};

/// Electron singlet with maximally mixed nuclei, Q_S / tr Q_S.
inline CMatrix singlet_initial_state(const OperatorSet& ops) {
    return ops.q_singlet / ops.q_singlet.trace().real();
}

inline double expectation(const CMatrix& op, const CMatrix& rho) {
    // tr(op rho) without forming the product.
    return (op.transpose().cwiseProduct(rho)).sum().real();
}

inline double hermiticity_error(const CMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

inline double min_eigenvalue(const CMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (hermitian + hermitian.adjoint()),
                                                  Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

/// Diagnostics against the DensityState invariants (Hermitian, PSD, trace in [0, 1]).
struct DensityCheck {
    double hermiticity = 0.0;
    double min_eigenvalue = 0.0;
    double trace = 0.0;

    bool ok(double herm_tol = 1e-10, double psd_tol = 1e-9, double trace_tol = 1e-9) const {
        return hermiticity < herm_tol && min_eigenvalue > -psd_tol && trace >= -trace_tol &&
               trace <= 1.0 + trace_tol;
    }
};

inline DensityCheck check_density(const CMatrix& rho) {
    return {hermiticity_error(rho), min_eigenvalue(rho), rho.trace().real()};
}

/// Throws unless `rho` is a valid square density matrix of dimension `dim`.
inline void require_valid_density(const CMatrix& rho, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    if (rho.rows() != d || rho.cols() != d) {
        throw InvalidArgument("density matrix has wrong shape");
    }
    if (!rho.allFinite()) throw InvalidArgument("density matrix has non-finite entries");
    if (!check_density(rho).ok()) {
        throw InvalidArgument("density matrix is not Hermitian positive semidefinite with trace <= 1");
    }
}

/// Right-hand side of the selected master equation on the full space.
inline CMatrix master_rhs(Theory theory, const OperatorSet& ops, const RatePair& rates,
                          const CMatrix& rho) {
    static const Complex minus_i(0.0, -1.0);
    const CMatrix hr = ops.h * rho;
    CMatrix out = minus_i * (hr - hr.adjoint());
    const CMatrix qr = ops.q_singlet * rho;
    if (theory == Theory::quantum) {
        out -= rates.total() * (qr + qr.adjoint() - 2.0 * qr * ops.q_singlet);
    } else {
        const CMatrix tr = ops.q_triplet * rho;
        out -= rates.k_s * (qr + qr.adjoint()) + rates.k_t * (tr + tr.adjoint());
    }
    return out;
}

/// Stiffness measure driving both the default step and the stability guard.
inline double stiffness(const OperatorSet& ops, const RatePair& rates) {
    return std::max(spectral_radius(ops.h), 2.0 * rates.total());
}

/// Default step fraction: dt = fraction / max(spectral_radius(H), 2 (kS + kT)).
inline constexpr double kDefaultStepFraction = 0.02;

inline double default_time_step(const OperatorSet& ops, const RatePair& rates,
                                 double fraction = kDefaultStepFraction) {
    const double s = stiffness(ops, rates);
    return s > 0.0 ? fraction / s : fraction;
}

/// Stability guard: dt * (spectral_radius(H) + 2 (kS + kT)) <= 0.5.
inline void check_step_size(double dt, double spectral, const RatePair& rates) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw StepSizeError("time step must be positive and finite");
    }
    const double product = dt * (spectral + 2.0 * rates.total());
    if (product > 0.5) {
        throw StepSizeError("time step " + std::to_string(dt) +
                            " us violates stability guard dt*(rho(H)+2(kS+kT)) = " +
                            std::to_string(product) + " > 0.5");
    }
}

namespace detail {

inline DensityState rk4_step(Theory theory, const DensityState& state, const OperatorSet& ops,
                             const RatePair& rates, double dt) {
    rates.validate();
    check_step_size(dt, spectral_radius(ops.h), rates);
    const CMatrix& r = state.rho;
    const CMatrix k1 = master_rhs(theory, ops, rates, r);
    const CMatrix k2 = master_rhs(theory, ops, rates, r + (0.5 * dt) * k1);
    const CMatrix k3 = master_rhs(theory, ops, rates, r + (0.5 * dt) * k2);
    const CMatrix k4 = master_rhs(theory, ops, rates, r + dt * k3);
    CMatrix next = r + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    DensityState out;
    out.rho = 0.5 * (next + next.adjoint());
    out.time_us = state.time_us + dt;
    return out;
}

}  // namespace detail

/// One RK4 step of the phenomenological master equation (trace decreases).
inline DensityState step_phenomenological(const DensityState& state, const OperatorSet& ops,
                                          const RatePair& rates, double dt) {
    return detail::rk4_step(Theory::phenomenological, state, ops, rates, dt);
}

/// One RK4 step of the trace-preserving quantum-measurement master equation.
inline DensityState step_quantum(const DensityState& state, const OperatorSet& ops,
                                 const RatePair& rates, double dt) {
    return detail::rk4_step(Theory::quantum, state, ops, rates, dt);
}

inline DensityState step(Theory theory, const DensityState& state, const OperatorSet& ops,
                         const RatePair& rates, double dt) {
    return detail::rk4_step(theory, state, ops, rates, dt);
}

}  // namespace radpair

#endif  // RADPAIR_MASTER_EQUATION_HPP
