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

#ifndef RADPAIR_YIELDS_HPP
#define RADPAIR_YIELDS_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "radpair/evolution.hpp"
#include "radpair/parallel.hpp"

namespace radpair {

struct TerminalYields {
    double y_s = 0.0;
    double y_t = 0.0;
    bool converged = false;
    double residual_survival = 1.0;
};

/// Runs the selected scheme until survival < epsilon_survival (or the default
/// horizon) and returns the accumulated product yields. Slow kinetics are
/// reported through `converged`, never thrown.
inline TerminalYields terminal_yields(const OperatorSet& ops, const RatePair& rates, Theory theory,
                                      const SolverOptions& solver = {},
                                      const std::optional<CMatrix>& rho0 = std::nullopt) {
    rates.validate();
    if (!rates.any()) throw InvalidArgument("terminal yields need a nonzero recombination rate");
    EvolveOptions opts;
    opts.solver = solver;
    opts.check_positivity = false;
    opts.rho0 = rho0;
    // Only the final sample is consumed.
    opts.solver.record_stride = std::numeric_limits<std::size_t>::max();
    const EvolutionRecord rec = evolve(ops, rates, theory, opts);
    return {rec.final_yield_s(), rec.final_yield_t(), rec.converged, rec.residual_survival};
}

inline TerminalYields terminal_yields(const SpinSystem& system, const RatePair& rates,
                                      Theory theory, const SolverOptions& solver = {},
                                      const std::optional<CMatrix>& rho0 = std::nullopt) {
    return terminal_yields(build_operators(system), rates, theory, solver, rho0);
}

enum class SweepAxis { field_mT, hyperfine_rad_per_us };

inline std::string_view axis_column(SweepAxis axis) {
    return axis == SweepAxis::field_mT ? "B_mT" : "A_rad_per_us";
}

/// Terminal yields of one theory along a sweep axis.
struct YieldCurve {
    std::vector<double> y_s;
    std::vector<double> y_t;
    std::vector<bool> converged;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::field_mT;
    std::vector<double> axis_values;
    std::optional<YieldCurve> quantum;
    std::optional<YieldCurve> phenomenological;

    const YieldCurve& curve(Theory t) const {
        const auto& c = t == Theory::quantum ? quantum : phenomenological;
        if (!c) throw InvalidArgument("theory was not part of this sweep");
        return *c;
    }

    /// Every computed theory converged at point i.
    bool converged_at(std::size_t i) const {
        bool ok = true;
        if (quantum) ok = ok && quantum->converged[i];
        if (phenomenological) ok = ok && phenomenological->converged[i];
        return ok;
    }
};

struct SweepOptions {
    bool quantum = true;
    bool phenomenological = true;
    SolverOptions solver;
    std::size_t workers = 0;  // 0: hardware concurrency
};

namespace detail {

template <typename MakeSystem>
SweepResult run_sweep(SweepAxis axis, const std::vector<double>& values, const RatePair& rates,
                      const SweepOptions& options, MakeSystem&& make_system) {
    if (values.empty()) throw InvalidArgument("sweep axis is empty");
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("sweep axis values must be finite");
    }
    if (!options.quantum && !options.phenomenological) {
        throw InvalidArgument("sweep needs at least one theory");
    }
    std::vector<Theory> theories;
    if (options.quantum) theories.push_back(Theory::quantum);
    if (options.phenomenological) theories.push_back(Theory::phenomenological);

    const std::size_t n = values.size();
    std::vector<TerminalYields> out(n * theories.size());
    // Each point owns its model and state; results land at fixed indices.
    parallel_for(
        out.size(),
        [&](std::size_t task) {
            const std::size_t point = task / theories.size();
            const Theory theory = theories[task % theories.size()];
            out[task] = terminal_yields(make_system(values[point]), rates, theory, options.solver);
        },
        options.workers);

    SweepResult result;
    result.axis = axis;
    result.axis_values = values;
    for (std::size_t k = 0; k < theories.size(); ++k) {
        YieldCurve c;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& ty = out[i * theories.size() + k];
            c.y_s.push_back(ty.y_s);
            c.y_t.push_back(ty.y_t);
            c.converged.push_back(ty.converged);
        }
        (theories[k] == Theory::quantum ? result.quantum : result.phenomenological) = std::move(c);
    }
    return result;
}

}  // namespace detail

/// Terminal yields under both (or the selected) theories for each field value.
inline SweepResult sweep_field(const SpinSystem& system_template, const RatePair& rates,
                               const std::vector<double>& field_values_mT,
                               const SweepOptions& options = {}) {
    system_template.validate();
    return detail::run_sweep(SweepAxis::field_mT, field_values_mT, rates, options,
                             [&](double b) {
                                 SpinSystem s = system_template;
                                 s.field_mT = b;
                                 return s;
                             });
}

/// Terminal yields versus the isotropic coupling (rad/us) of one nucleus,
/// at the template's field.
inline SweepResult sweep_hyperfine(const SpinSystem& system_template, const RatePair& rates,
                                   const std::vector<double>& a_values_rad_per_us,
                                   const SweepOptions& options = {},
                                   std::size_t nucleus_index = 0) {
    system_template.validate();
    if (nucleus_index >= system_template.nuclei.size()) {
        throw InvalidArgument("hyperfine sweep needs a nucleus at the requested index");
    }
    for (double a : a_values_rad_per_us) {
        if (!(a >= 0.0)) throw InvalidArgument("hyperfine sweep values must be >= 0");
    }
    return detail::run_sweep(SweepAxis::hyperfine_rad_per_us, a_values_rad_per_us, rates, options,
                             [&](double a) {
                                 SpinSystem s = system_template;
                                 s.nuclei[nucleus_index].hyperfine = HyperfineCoupling::isotropic(a);
                                 return s;
                             });
}

/// n evenly spaced values from start to stop inclusive.
inline std::vector<double> linspace(double start, double stop, std::size_t n) {
    if (n == 0) throw InvalidArgument("linspace needs at least one point");
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? start
                      : start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    if (n > 1) v.back() = stop;
    return v;
}

/// <Q_S>(t) of the one-nucleus model at coupling a_value over [0, t_max].
/// With recombination the selected theory runs over the full window (no early
/// stop); without it the record is the unitary evolution.
inline EvolutionRecord trace_qs(const SpinSystem& one_nucleus_template, const RatePair& rates,
                                double a_value_rad_per_us, bool with_recombination,
                                double t_max_us, std::optional<double> dt_us = std::nullopt,
                                Theory theory = Theory::quantum, SolverOptions solver = {}) {
    if (one_nucleus_template.nuclei.size() != 1) {
        throw InvalidArgument("trace_qs needs a one-nucleus template");
    }
    SpinSystem s = one_nucleus_template;
    s.nuclei[0].hyperfine = HyperfineCoupling::isotropic(a_value_rad_per_us);
    if (dt_us) solver.dt_us = dt_us;
    EvolveOptions opts;
    opts.solver = solver;
    if (!with_recombination) return evolve_unitary(s, t_max_us, opts);
    opts.t_max_us = t_max_us;
    opts.stop_on_survival = false;
    return evolve(s, rates, theory, opts);
}

}  // namespace radpair

#endif  // RADPAIR_YIELDS_HPP
