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

#ifndef RADPAIR_EVOLUTION_HPP
#define RADPAIR_EVOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "radpair/master_equation.hpp"

namespace radpair {

/// RK4 propagator for one master equation with survival and yield bookkeeping.
///
/// The state is held in the singlet/triplet working basis (S, T+, T0, T-) (x) 1_nuc,
/// where Q_S is diagonal and both recombination terms act entrywise:
///   quantum:          (D rho)_ab = (kS + kT) [q_a != q_b] rho_ab
///   phenomenological: (D rho)_ab = (kappa_a + kappa_b) rho_ab,  kappa = kS q + kT (1 - q)
/// The working basis is split into the connected components of the nonzero
/// pattern of H and rho0; the flow never couples different components, so each
/// block is integrated as its own dense matrix.
///
/// Scalars ride along in the same RK4 stages:
///   quantum:          p' = -2 (kS <Q_S> + kT <Q_T>) p,  Y_S' = 2 kS <Q_S> p,  Y_T' = 2 kT <Q_T> p
///   phenomenological: Y_S' = 2 kS tr(Q_S rho),  Y_T' = 2 kT tr(Q_T rho),  survival = tr rho
/// so Y_S + Y_T + survival = 1 holds to round-off at every step.
class Integrator {
public:
    Integrator(const OperatorSet& ops, const RatePair& rates, Theory theory, const CMatrix& rho0,
               double dt)
        : theory_(theory), rates_(rates), dt_(dt), dim_(static_cast<Eigen::Index>(ops.dim)) {
        rates_.validate();
        require_valid_density(rho0, ops.dim);
        spectral_ = spectral_radius(ops.h);
        check_step_size(dt_, spectral_, rates_);
        build_working_basis(ops, rho0);
    }

    Theory theory() const noexcept { return theory_; }
    double dt() const noexcept { return dt_; }
    double time() const noexcept { return time_; }
    std::size_t steps() const noexcept { return steps_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }

    /// Survival probability p(t) (quantum) or tr rho (phenomenological).
    double survival() const { return theory_ == Theory::quantum ? p_ : trace(); }
    double yield_s() const noexcept { return yield_s_; }
    double yield_t() const noexcept { return yield_t_; }

    double trace() const {
        double t = 0.0;
        for (const auto& b : blocks_) t += b.rho.diagonal().real().sum();
        return t;
    }

    /// tr(Q_S rho) of the propagated matrix.
    double singlet_population() const {
        double qs = 0.0;
        for (const auto& b : blocks_) qs += b.q.dot(b.rho.diagonal().real());
        return qs;
    }

    /// <Q_S> as recorded: normalized for the quantum scheme, tr(Q_S rho) otherwise.
    double recorded_singlet() const {
        const double qs = singlet_population();
        if (theory_ == Theory::quantum) {
            const double tr = trace();
            return tr > 0.0 ? qs / tr : qs;
        }
        return qs;
    }

    double max_hermiticity_drift() const noexcept { return max_drift_; }

    double min_eigenvalue() const {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& b : blocks_) {
            Eigen::SelfAdjointEigenSolver<CMatrix> solver(b.rho, Eigen::EigenvaluesOnly);
            m = std::min(m, solver.eigenvalues().minCoeff());
        }
        return m;
    }

    /// rho in the original product basis.
    CMatrix density() const {
        CMatrix w = CMatrix::Zero(dim_, dim_);
        for (const auto& b : blocks_) {
            for (Eigen::Index r = 0; r < b.size(); ++r) {
                for (Eigen::Index c = 0; c < b.size(); ++c) w(b.index[r], b.index[c]) = b.rho(r, c);
            }
        }
        return basis_ * w * basis_.adjoint();
    }

    void step() { step(dt_); }

    /// One RK4 step of length h (0 < h <= dt), used to land exactly on a target time.
    void step(double h) {
        if (!(h > 0.0) || h > dt_ * (1.0 + 1e-12)) {
            throw StepSizeError("partial step must lie in (0, dt]");
        }
        Scalars s0{p_, yield_s_, yield_t_};

        evaluate(false, s0, g1_);
        axpy_into(stage_, h * 0.5, f_);
        copy_into(acc_, f_);
        Scalars s1 = s0 + (h * 0.5) * g1_;

        evaluate(true, s1, g2_);
        axpy_into(stage_, h * 0.5, f_);
        add_scaled(acc_, 2.0, f_);
        Scalars s2 = s0 + (h * 0.5) * g2_;

        evaluate(true, s2, g3_);
        axpy_into(stage_, h, f_);
        add_scaled(acc_, 2.0, f_);
        Scalars s3 = s0 + h * g3_;

        evaluate(true, s3, g4_);
        add_scaled(acc_, 1.0, f_);

        for (std::size_t k = 0; k < blocks_.size(); ++k) {
            CMatrix& r = blocks_[k].rho;
            r.noalias() += (h / 6.0) * acc_[k];
            const double drift = (r - r.adjoint()).cwiseAbs().maxCoeff();
            max_drift_ = std::max(max_drift_, drift);
            tmp_[k] = r.adjoint();
            r = 0.5 * (r + tmp_[k]);
        }
        const Scalars inc = (h / 6.0) * (g1_ + 2.0 * g2_ + 2.0 * g3_ + g4_);
        p_ += inc.p;
        yield_s_ += inc.ys;
        yield_t_ += inc.yt;
        time_ += h;
        ++steps_;
    }

private:
    struct Block {
        std::vector<Eigen::Index> index;  // positions in the working basis
        CMatrix h;
        Eigen::MatrixXd decay;            // entrywise recombination coefficients
        Eigen::VectorXd q;                // diagonal of Q_S in this block (0 or 1)
        CMatrix rho;

        Eigen::Index size() const { return static_cast<Eigen::Index>(index.size()); }
    };

    struct Scalars {
        double p = 0.0, ys = 0.0, yt = 0.0;

        Scalars operator+(const Scalars& o) const { return {p + o.p, ys + o.ys, yt + o.yt}; }
        friend Scalars operator*(double a, const Scalars& s) { return {a * s.p, a * s.ys, a * s.yt}; }
    };

    using BlockMats = std::vector<CMatrix>;

    // f_ = rhs(rho or stage), ds = scalar derivatives at the same stage.
    void evaluate(bool from_stage, const Scalars& s, Scalars& ds) {
        static const Complex plus_i(0.0, 1.0);
        double qs = 0.0, tr = 0.0;
        for (std::size_t k = 0; k < blocks_.size(); ++k) {
            const Block& b = blocks_[k];
            const CMatrix& r = from_stage ? stage_[k] : b.rho;
            tmp_[k].noalias() = b.h * r;
            // -i [H, rho] = i ((H rho)^dagger - H rho) for Hermitian H and rho.
            f_[k] = plus_i * (tmp_[k].adjoint() - tmp_[k]) - b.decay.cwiseProduct(r);
            const auto diag = r.diagonal().real();
            qs += b.q.dot(diag);
            tr += diag.sum();
        }
        const double qt = tr - qs;
        if (theory_ == Theory::quantum) {
            const double rs = 2.0 * rates_.k_s * qs * s.p;
            const double rt = 2.0 * rates_.k_t * qt * s.p;
            ds = {-(rs + rt), rs, rt};
        } else {
            ds = {0.0, 2.0 * rates_.k_s * qs, 2.0 * rates_.k_t * qt};
        }
    }

    // stage = rho + a * f
    void axpy_into(BlockMats& stage, double a, const BlockMats& f) const {
        for (std::size_t k = 0; k < blocks_.size(); ++k) stage[k] = blocks_[k].rho + a * f[k];
    }

    static void copy_into(BlockMats& dst, const BlockMats& src) {
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k];
    }

    static void add_scaled(BlockMats& dst, double a, const BlockMats& src) {
        for (std::size_t k = 0; k < src.size(); ++k) dst[k] += a * src[k];
    }

    void build_working_basis(const OperatorSet& ops, const CMatrix& rho0) {
        const double r2 = 1.0 / std::sqrt(2.0);
        CMatrix electron = CMatrix::Zero(4, 4);
        // Columns S, T+, T0, T- in the |up up>, |up dn>, |dn up>, |dn dn> basis.
        electron(1, 0) = r2;
        electron(2, 0) = -r2;
        electron(0, 1) = 1.0;
        electron(1, 2) = r2;
        electron(2, 2) = r2;
        electron(3, 3) = 1.0;
        const Eigen::Index nuc = dim_ / 4;
        basis_ = kron(electron, CMatrix::Identity(nuc, nuc));

        const CMatrix hw = basis_.adjoint() * ops.h * basis_;
        const CMatrix qw = basis_.adjoint() * ops.q_singlet * basis_;
        const CMatrix rw = basis_.adjoint() * rho0 * basis_;

        Eigen::VectorXd q(dim_);
        for (Eigen::Index a = 0; a < dim_; ++a) q(a) = std::round(qw(a, a).real());
        CMatrix q_check = qw;
        q_check.diagonal() -= q.cast<Complex>();
        if (q_check.cwiseAbs().maxCoeff() > 1e-12) {
            throw NumericsError("singlet projector is not diagonal in the working basis");
        }

        // Union-find over the working basis; entries below tolerance are round-off
        // from the basis change.
        const double h_tol = 1e-13 * std::max(1.0, hw.cwiseAbs().maxCoeff());
        const double r_tol = 1e-15;
        std::vector<Eigen::Index> parent(static_cast<std::size_t>(dim_));
        std::iota(parent.begin(), parent.end(), Eigen::Index{0});
        auto find = [&](Eigen::Index x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                auto& px = parent[static_cast<std::size_t>(x)];
                px = parent[static_cast<std::size_t>(px)];
                x = px;
            }
            return x;
        };
        for (Eigen::Index a = 0; a < dim_; ++a) {
            for (Eigen::Index b = a + 1; b < dim_; ++b) {
                if (std::abs(hw(a, b)) > h_tol || std::abs(rw(a, b)) > r_tol) {
                    parent[static_cast<std::size_t>(find(a))] = find(b);
                }
            }
        }
        std::vector<Eigen::Index> root_to_block(static_cast<std::size_t>(dim_), -1);
        for (Eigen::Index a = 0; a < dim_; ++a) {
            const Eigen::Index root = find(a);
            auto& slot = root_to_block[static_cast<std::size_t>(root)];
            if (slot < 0) {
                slot = static_cast<Eigen::Index>(blocks_.size());
                blocks_.emplace_back();
            }
            blocks_[static_cast<std::size_t>(slot)].index.push_back(a);
        }

        const double kappa_s = rates_.k_s, kappa_t = rates_.k_t;
        for (auto& b : blocks_) {
            const Eigen::Index n = b.size();
            b.h.resize(n, n);
            b.rho.resize(n, n);
            b.decay.resize(n, n);
            b.q.resize(n);
            for (Eigen::Index r = 0; r < n; ++r) {
                b.q(r) = q(b.index[r]);
                for (Eigen::Index c = 0; c < n; ++c) {
                    b.h(r, c) = hw(b.index[r], b.index[c]);
                    b.rho(r, c) = rw(b.index[r], b.index[c]);
                }
            }
            b.h = 0.5 * (b.h + b.h.adjoint()).eval();
            b.rho = 0.5 * (b.rho + b.rho.adjoint()).eval();
            for (Eigen::Index r = 0; r < n; ++r) {
                for (Eigen::Index c = 0; c < n; ++c) {
                    if (theory_ == Theory::quantum) {
                        b.decay(r, c) = b.q(r) != b.q(c) ? rates_.total() : 0.0;
                    } else {
                        const double ka = kappa_s * b.q(r) + kappa_t * (1.0 - b.q(r));
                        const double kb = kappa_s * b.q(c) + kappa_t * (1.0 - b.q(c));
                        b.decay(r, c) = ka + kb;
                    }
                }
            }
        }

        const std::size_t nb = blocks_.size();
        f_.resize(nb);
        acc_.resize(nb);
        stage_.resize(nb);
        tmp_.resize(nb);
        for (std::size_t k = 0; k < nb; ++k) {
            const Eigen::Index n = blocks_[k].size();
            f_[k] = acc_[k] = stage_[k] = tmp_[k] = CMatrix::Zero(n, n);
        }
        p_ = 1.0;
    }

    Theory theory_;
    RatePair rates_;
    double dt_;
    Eigen::Index dim_;
    double spectral_ = 0.0;
    CMatrix basis_;
    std::vector<Block> blocks_;
    BlockMats f_, acc_, stage_, tmp_;
    Scalars g1_, g2_, g3_, g4_;
    double p_ = 1.0;
    double yield_s_ = 0.0;
    double yield_t_ = 0.0;
    double time_ = 0.0;
    std::size_t steps_ = 0;
    double max_drift_ = 0.0;
};

/// Solver knobs shared by evolve and the sweeps.
struct SolverOptions {
    std::optional<double> dt_us;            // overrides the default step
    double step_fraction = kDefaultStepFraction;
    double epsilon_survival = 1e-6;
    std::size_t record_stride = 0;          // 0: automatic (about 4000 samples at most)

    bool operator==(const SolverOptions&) const = default;
};

struct EvolveOptions {
    SolverOptions solver;
    std::optional<double> t_max_us;   // default 50 / min(kS, kT)
    bool stop_on_survival = true;     // stop once survival < epsilon_survival
    bool check_positivity = true;     // min eigenvalue at every recorded sample
    std::optional<CMatrix> rho0;      // default Q_S / tr Q_S
};

/// Time series of one propagation.
struct EvolutionRecord {
    Theory theory = Theory::quantum;
    bool unitary = false;
    double dt_us = 0.0;
    double t_max_us = 0.0;
    std::vector<double> times;
    std::vector<double> q_s_expect;
    std::vector<double> survival;
    std::vector<double> yield_s;
    std::vector<double> yield_t;
    /// survival < epsilon_survival at the end of the run.
    bool converged = false;
    double residual_survival = 1.0;
    std::size_t steps = 0;
    std::size_t blocks = 0;
    double max_hermiticity_drift = 0.0;
    double min_eigenvalue_seen = 0.0;
    CMatrix final_rho;

    double final_yield_s() const { return yield_s.empty() ? 0.0 : yield_s.back(); }
    double final_yield_t() const { return yield_t.empty() ? 0.0 : yield_t.back(); }

    /// <Q_S> of the trace-one state at every sample, for both theories.
    std::vector<double> normalized_q_s() const {
        std::vector<double> out(q_s_expect.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double tr = theory == Theory::quantum ? 1.0 : survival[i];
            out[i] = tr > 0.0 ? q_s_expect[i] / tr : 0.0;
        }
        return out;
    }
};

/// Default horizon 50 / min(kS, kT); a single zero rate falls back to the other one.
inline double default_t_max(const RatePair& rates) {
    if (!rates.any()) {
        throw InvalidArgument("t_max_us is required when both recombination rates are zero");
    }
    const double lo = std::min(rates.k_s, rates.k_t);
    return 50.0 / (lo > 0.0 ? lo : std::max(rates.k_s, rates.k_t));
}

inline EvolutionRecord evolve(const OperatorSet& ops, const RatePair& rates, Theory theory,
                              const EvolveOptions& options = {}) {
    rates.validate();
    const double dt = options.solver.dt_us.value_or(
        default_time_step(ops, rates, options.solver.step_fraction));
    const double t_max = options.t_max_us ? *options.t_max_us : default_t_max(rates);
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidArgument("t_max_us must be positive");

    const CMatrix rho0 = options.rho0 ? *options.rho0 : singlet_initial_state(ops);
    Integrator integrator(ops, rates, theory, rho0, dt);

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-9));
    std::size_t stride = options.solver.record_stride;
    if (stride == 0) stride = std::max<std::size_t>(1, (n_steps + 3999) / 4000);

    EvolutionRecord rec;
    rec.theory = theory;
    rec.unitary = !rates.any();
    rec.dt_us = dt;
    rec.t_max_us = t_max;
    rec.min_eigenvalue_seen = std::numeric_limits<double>::infinity();

    auto sample = [&] {
        rec.times.push_back(integrator.time());
        rec.q_s_expect.push_back(integrator.recorded_singlet());
        rec.survival.push_back(integrator.survival());
        rec.yield_s.push_back(integrator.yield_s());
        rec.yield_t.push_back(integrator.yield_t());
        if (options.check_positivity) {
            rec.min_eigenvalue_seen = std::min(rec.min_eigenvalue_seen, integrator.min_eigenvalue());
        }
    };

    sample();
    const double eps = options.solver.epsilon_survival;
    bool sampled_last = true;
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double remaining = t_max - integrator.time();
        if (remaining <= dt * 1e-9) break;
        integrator.step(std::min(dt, remaining));
        sampled_last = false;
        if ((n + 1) % stride == 0) {
            sample();
            sampled_last = true;
        }
        if (options.stop_on_survival && integrator.survival() < eps) break;
    }
    if (!sampled_last) sample();

    rec.steps = integrator.steps();
    rec.blocks = integrator.block_count();
    rec.residual_survival = integrator.survival();
    rec.converged = rec.residual_survival < eps;
    rec.max_hermiticity_drift = integrator.max_hermiticity_drift();
    if (!options.check_positivity) rec.min_eigenvalue_seen = integrator.min_eigenvalue();
    rec.final_rho = integrator.density();
    return rec;
}

inline EvolutionRecord evolve(const SpinSystem& system, const RatePair& rates, Theory theory,
                              const EvolveOptions& options = {}) {
    return evolve(build_operators(system), rates, theory, options);
}

/// Recombination-free evolution: survival stays 1 and yields stay 0.
inline EvolutionRecord evolve_unitary(const SpinSystem& system, double t_max_us,
                                      EvolveOptions options = {}) {
    options.t_max_us = t_max_us;
    options.stop_on_survival = false;
    return evolve(build_operators(system), RatePair{}, Theory::quantum, options);
}

}  // namespace radpair

#endif  // RADPAIR_EVOLUTION_HPP
