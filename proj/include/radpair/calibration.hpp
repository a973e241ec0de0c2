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

#ifndef RADPAIR_CALIBRATION_HPP
#define RADPAIR_CALIBRATION_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "radpair/yields.hpp"

namespace radpair {

enum class ParameterKind { hyperfine_rad_per_us, hyperfine_mT, k_s, k_t };

enum class Observable { singlet_yield, triplet_yield };

struct FreeParameter {
    ParameterKind kind = ParameterKind::hyperfine_rad_per_us;
    std::size_t nucleus = 0;  // hyperfine kinds only
    double lower = 0.0;
    double upper = 1.0;
    double start = 0.5;

    std::string name() const {
        switch (kind) {
            case ParameterKind::hyperfine_rad_per_us: return "A_rad_per_us[" + std::to_string(nucleus) + "]";
            case ParameterKind::hyperfine_mT: return "A_mT[" + std::to_string(nucleus) + "]";
            case ParameterKind::k_s: return "k_s_per_us";
            case ParameterKind::k_t: return "k_t_per_us";
        }
        return "?";
    }

    std::string unit() const {
        switch (kind) {
            case ParameterKind::hyperfine_rad_per_us: return "rad/us";
            case ParameterKind::hyperfine_mT: return "mT";
            default: return "1/us";
        }
    }
};

/// Least-squares recovery of model parameters from a target yield curve.
struct FitProblem {
    SpinSystem model;
    RatePair rates;
    Theory theory = Theory::quantum;
    SweepAxis axis = SweepAxis::field_mT;
    std::vector<double> axis_values;
    Observable observable = Observable::singlet_yield;
    std::vector<double> target;
    std::vector<FreeParameter> free;
    /// Fit target ~ scale * model + offset, with scale and offset solved in closed form.
    bool affine = false;
    SolverOptions solver;

    void validate() const {
        model.validate();
        rates.validate();
        if (free.empty() || free.size() > 6) {
            throw InvalidArgument("a fit needs between 1 and 6 free parameters");
        }
        if (axis_values.empty() || axis_values.size() != target.size()) {
            throw InvalidArgument("target curve must match the axis length");
        }
        for (const auto& p : free) {
            if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !(p.lower < p.upper)) {
                throw InvalidArgument("bounds of " + p.name() + " must be finite with lower < upper");
            }
            if (!(p.start >= p.lower && p.start <= p.upper)) {
                throw InvalidArgument("start of " + p.name() + " lies outside its bounds");
            }
            const bool hyperfine = p.kind == ParameterKind::hyperfine_rad_per_us ||
                                   p.kind == ParameterKind::hyperfine_mT;
            if (hyperfine && p.nucleus >= model.nuclei.size()) {
                throw InvalidArgument(p.name() + " refers to a missing nucleus");
            }
            if (hyperfine && axis == SweepAxis::hyperfine_rad_per_us && p.nucleus == 0) {
                throw InvalidArgument(p.name() + " is the swept axis and cannot be free");
            }
        }
    }
};

struct FitConfig {
    std::size_t max_iters = 400;  // per restart
    double tol = 1e-6;            // simplex spread in bound-normalized coordinates
    std::size_t restarts = 5;
    std::uint64_t seed = 0;
};

struct FittedParameter {
    std::string name;
    double value = 0.0;
    std::string unit;
};

struct FitReport {
    std::vector<double> best_params;
    std::vector<FittedParameter> parameters;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    bool converged = false;
    double scale = 1.0;   // affine fit only
    double offset = 0.0;  // affine fit only
    /// Loss of every evaluated vertex, in evaluation order.
    std::vector<double> evaluated_losses;
};

/// Model and rates with the free parameters substituted.
inline std::pair<SpinSystem, RatePair> apply_parameters(const FitProblem& problem,
                                                        const std::vector<double>& values) {
    SpinSystem s = problem.model;
    RatePair r = problem.rates;
    for (std::size_t i = 0; i < problem.free.size(); ++i) {
        const FreeParameter& p = problem.free[i];
        switch (p.kind) {
            case ParameterKind::hyperfine_rad_per_us:
                s.nuclei[p.nucleus].hyperfine = HyperfineCoupling::isotropic(values[i]);
                break;
            case ParameterKind::hyperfine_mT:
                s.nuclei[p.nucleus].hyperfine = HyperfineCoupling::isotropic_mT(values[i]);
                break;
            case ParameterKind::k_s: r.k_s = values[i]; break;
            case ParameterKind::k_t: r.k_t = values[i]; break;
        }
    }
    return {s, r};
}

/// Forward model: the observable along the problem's axis at the given parameters.
inline std::vector<double> model_curve(const FitProblem& problem, const std::vector<double>& values) {
    const auto [system, rates] = apply_parameters(problem, values);
    SweepOptions opts;
    opts.quantum = problem.theory == Theory::quantum;
    opts.phenomenological = !opts.quantum;
    opts.solver = problem.solver;
    const SweepResult sweep = problem.axis == SweepAxis::field_mT
                                  ? sweep_field(system, rates, problem.axis_values, opts)
                                  : sweep_hyperfine(system, rates, problem.axis_values, opts);
    const YieldCurve& c = sweep.curve(problem.theory);
    return problem.observable == Observable::singlet_yield ? c.y_s : c.y_t;
}

struct LossValue {
    double loss = 0.0;
    double scale = 1.0;
    double offset = 0.0;
};

inline LossValue curve_loss(const std::vector<double>& model, const std::vector<double>& target,
                            bool affine) {
    LossValue out;
    const auto n = static_cast<double>(model.size());
    if (affine) {
        double mm = 0.0, mt = 0.0;
        for (std::size_t i = 0; i < model.size(); ++i) {
            mm += model[i];
            mt += target[i];
        }
        mm /= n;
        mt /= n;
        double cov = 0.0, var = 0.0;
        for (std::size_t i = 0; i < model.size(); ++i) {
            cov += (model[i] - mm) * (target[i] - mt);
            var += (model[i] - mm) * (model[i] - mm);
        }
        out.scale = var > 0.0 ? cov / var : 0.0;
        out.offset = mt - out.scale * mm;
    }
    for (std::size_t i = 0; i < model.size(); ++i) {
        const double r = target[i] - (out.scale * model[i] + out.offset);
        out.loss += r * r;
    }
    return out;
}

namespace detail {

/// Radical-inverse Halton coordinate.
inline double halton(std::uint64_t index, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

using Point = std::vector<double>;

struct NelderMeadResult {
    Point best;
    double best_value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Nelder-Mead on the unit box [0, 1]^n with trial points clamped to the box.
inline NelderMeadResult nelder_mead(const std::function<double(const Point&)>& f, Point start,
                                    std::size_t max_iters, double tol) {
    const std::size_t n = start.size();
    auto clamp = [](Point p) {
        for (double& v : p) v = std::clamp(v, 0.0, 1.0);
        return p;
    };
    std::vector<Point> x{clamp(start)};
    for (std::size_t i = 0; i < n; ++i) {
        Point v = x[0];
        v[i] += v[i] + 0.1 <= 1.0 ? 0.1 : -0.1;
        x.push_back(clamp(v));
    }
    std::vector<double> fx;
    for (const auto& v : x) {
        fx.push_back(f(v));
        if (!std::isfinite(fx.back())) throw InvalidArgument("loss is not finite at the initial simplex");
    }

    auto order = [&] {
        std::vector<std::size_t> idx(x.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return fx[a] < fx[b]; });
        std::vector<Point> xs;
        std::vector<double> fs;
        for (auto i : idx) {
            xs.push_back(x[i]);
            fs.push_back(fx[i]);
        }
        x = std::move(xs);
        fx = std::move(fs);
    };
    auto spread = [&] {
        double s = 0.0;
        for (std::size_t i = 1; i < x.size(); ++i) {
            for (std::size_t k = 0; k < n; ++k) s = std::max(s, std::abs(x[i][k] - x[0][k]));
        }
        return s;
    };
    auto combine = [&](const Point& a, const Point& b, double t) {
        Point p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = a[k] + t * (b[k] - a[k]);
        return clamp(p);
    };

    NelderMeadResult out;
    order();
    for (out.iterations = 0; out.iterations < max_iters; ++out.iterations) {
        if (spread() < tol) {
            out.converged = true;
            break;
        }
        Point centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) centroid[k] += x[i][k] / static_cast<double>(n);
        }
        const Point reflected = combine(centroid, x[n], -1.0);
        const double fr = f(reflected);
        if (fr < fx[0]) {
            const Point expanded = combine(centroid, x[n], -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                x[n] = expanded;
                fx[n] = fe;
            } else {
                x[n] = reflected;
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            x[n] = reflected;
            fx[n] = fr;
        } else {
            const bool outside = fr < fx[n];
            const Point contracted = combine(centroid, outside ? reflected : x[n], 0.5);
            const double fc = f(contracted);
            if (fc < std::min(fr, fx[n])) {
                x[n] = contracted;
                fx[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    x[i] = combine(x[0], x[i], 0.5);
                    fx[i] = f(x[i]);
                }
            }
        }
        order();
    }
    out.best = x[0];
    out.best_value = fx[0];
    return out;
}

}  // namespace detail

/// Bounded Nelder-Mead with quasi-random restarts (Halton points offset by the seed).
/// The first run starts from each parameter's `start`.
inline FitReport fit(const FitProblem& problem, const FitConfig& config = {}) {
    problem.validate();
    const std::size_t n = problem.free.size();
    auto to_params = [&](const detail::Point& u) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = problem.free[i];
            v[i] = p.lower + u[i] * (p.upper - p.lower);
        }
        return v;
    };

    FitReport report;
    detail::Point best_u;
    LossValue best_loss;
    auto objective = [&](const detail::Point& u) {
        const std::vector<double> params = to_params(u);
        const LossValue lv = curve_loss(model_curve(problem, params), problem.target, problem.affine);
        ++report.evaluations;
        report.evaluated_losses.push_back(lv.loss);
        if (!std::isfinite(lv.loss)) return std::numeric_limits<double>::infinity();
        if (lv.loss < report.best_loss) {
            report.best_loss = lv.loss;
            best_u = u;
            best_loss = lv;
        }
        return lv.loss;
    };

    static constexpr std::array<std::uint64_t, 6> primes{2, 3, 5, 7, 11, 13};
    const std::size_t runs = std::max<std::size_t>(1, config.restarts);
    for (std::size_t r = 0; r < runs; ++r) {
        detail::Point start(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = problem.free[i];
            start[i] = r == 0 ? (p.start - p.lower) / (p.upper - p.lower)
                              : detail::halton(config.seed + r, primes[i]);
        }
        const auto nm = detail::nelder_mead(objective, start, config.max_iters, config.tol);
        report.iterations += nm.iterations;
        if (nm.best_value <= report.best_loss) report.converged = nm.converged;
    }

    report.best_params = to_params(best_u);
    report.scale = best_loss.scale;
    report.offset = best_loss.offset;
    for (std::size_t i = 0; i < n; ++i) {
        report.parameters.push_back({problem.free[i].name(), report.best_params[i], problem.free[i].unit()});
    }
    return report;
}

}  // namespace radpair

#endif  // RADPAIR_CALIBRATION_HPP
