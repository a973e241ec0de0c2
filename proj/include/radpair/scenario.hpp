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

#ifndef RADPAIR_SCENARIO_HPP
#define RADPAIR_SCENARIO_HPP

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "radpair/config.hpp"
#include "radpair/version.hpp"

namespace radpair {

/// Fixed-width scientific, 9 significant digits.
inline std::string format_number(double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%15.8e", v);
    return buf;
}

/// Assembles a CSV document: comment header lines, a column header, numeric rows.
class CsvTable {
public:
    void comment(const std::string& line) { comments_.push_back(line); }

    void columns(std::vector<std::string> names) { columns_ = std::move(names); }

    void row(const std::vector<std::string>& cells) { rows_.push_back(cells); }

    std::string str() const {
        std::ostringstream out;
        for (const auto& c : comments_) out << "# " << c << '\n';
        write_line(out, columns_);
        for (const auto& r : rows_) write_line(out, r);
        return out.str();
    }

    void write(const std::string& path) const { write_text(path, str()); }

    static void write_text(const std::string& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open output file '" + path + "' for writing");
        f << text;
        f.flush();
        if (!f) throw IoError("failed writing output file '" + path + "'");
    }

private:
    static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    }

    std::vector<std::string> comments_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

struct ScenarioOutcome {
    int exit_code = 0;
    bool warning = false;   // flagged non-convergence
    std::string summary;    // one line, also written to the summary stream
    std::string csv;        // document written to output.path
};

namespace detail {

inline std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string header_line(const ScenarioConfig& c, const std::string& dt_text,
                               const std::string& seed_text) {
    const SolverOptions s = c.solver.options();
    std::string stride = s.record_stride ? std::to_string(s.record_stride) : std::string("auto");
    return "radpair " + std::string(kVersion) + " run=" + std::string(to_string(c.run.kind)) +
           " theory=" + std::string(to_string(c.theory)) + " dt_us=" + dt_text +
           " step_fraction=" + fmt_short(s.step_fraction) +
           " epsilon_survival=" + fmt_short(s.epsilon_survival) + " record_stride=" + stride +
           " seed=" + seed_text;
}

inline std::string model_line(const ResolvedPreset& m) {
    std::string out = "model field_mT=" + fmt_short(m.system.field_mT) +
                      " k_s_per_us=" + fmt_short(m.rates.k_s) + " k_t_per_us=" + fmt_short(m.rates.k_t);
    for (std::size_t j = 0; j < m.system.nuclei.size(); ++j) {
        const auto& n = m.system.nuclei[j];
        out += " nucleus" + std::to_string(j) + "=(I=" + fmt_short(n.spin) +
               ",e=" + std::to_string(static_cast<int>(n.electron));
        if (n.hyperfine.is_isotropic()) {
            out += ",A_rad_per_us=" + fmt_short(n.hyperfine.isotropic_value());
        } else {
            out += ",tensor";
        }
        out += ")";
    }
    return out;
}

inline std::string dt_text(const SolverOptions& s, const std::optional<double>& resolved = {}) {
    if (s.dt_us) return fmt_short(*s.dt_us);
    if (resolved) return fmt_short(*resolved);
    return "auto";
}

inline ScenarioOutcome run_evolve(const ScenarioConfig& c, const ResolvedPreset& m) {
    const auto theories = theories_of(c.theory);
    const OperatorSet ops = build_operators(m.system);
    EvolveOptions opts;
    opts.solver = c.solver.options();
    opts.t_max_us = c.run.t_max_us;

    std::vector<EvolutionRecord> recs;
    for (Theory t : theories) recs.push_back(evolve(ops, m.rates, t, opts));
    if (recs.size() == 2 && (recs[0].times.back() != recs[1].times.back() ||
                             recs[0].times.size() != recs[1].times.size())) {
        // Common time grid: rerun both over the longer window without early stop.
        opts.t_max_us = std::max(recs[0].times.back(), recs[1].times.back());
        opts.stop_on_survival = false;
        for (std::size_t k = 0; k < 2; ++k) recs[k] = evolve(ops, m.rates, theories[k], opts);
    }

    CsvTable table;
    table.comment(header_line(c, dt_text(opts.solver, recs[0].dt_us), "none"));
    table.comment(model_line(m));
    std::vector<std::string> cols{"t_us"};
    for (Theory t : theories) {
        const std::string sfx(column_suffix(t));
        for (const char* base : {"Q_S_", "survival_", "Y_S_", "Y_T_"}) cols.push_back(base + sfx);
    }
    table.columns(cols);
    for (std::size_t i = 0; i < recs[0].times.size(); ++i) {
        std::vector<std::string> row{format_number(recs[0].times[i])};
        for (const auto& r : recs) {
            row.push_back(format_number(r.q_s_expect[i]));
            row.push_back(format_number(r.survival[i]));
            row.push_back(format_number(r.yield_s[i]));
            row.push_back(format_number(r.yield_t[i]));
        }
        table.row(row);
    }

    ScenarioOutcome out;
    std::string summary = "evolve";
    for (std::size_t k = 0; k < recs.size(); ++k) {
        const auto& r = recs[k];
        summary += " " + std::string(to_string(theories[k])) + ": Y_S=" + fmt_short(r.final_yield_s()) +
                   " Y_T=" + fmt_short(r.final_yield_t()) + " survival=" + fmt_short(r.residual_survival) +
                   " converged=" + (r.converged ? "1" : "0");
        if (!r.converged && !r.unitary) out.warning = true;
    }
    if (out.warning) summary = "warning: run not converged; " + summary;
    out.summary = summary;
    out.csv = table.str();
    return out;
}

inline ScenarioOutcome run_sweep(const ScenarioConfig& c, const ResolvedPreset& m) {
    SweepOptions opts;
    opts.quantum = c.theory != TheoryChoice::phenomenological;
    opts.phenomenological = c.theory != TheoryChoice::quantum;
    opts.solver = c.solver.options();

    SweepResult res;
    if (c.run.kind == RunKind::sweep_field) {
        const auto axis = linspace(c.run.field_start_mT.value_or(0.0), c.run.field_stop_mT.value_or(10.0),
                                   c.run.points.value_or(101));
        res = sweep_field(m.system, m.rates, axis, opts);
    } else {
        if (m.system.nuclei.empty()) throw ConfigError("/model", "sweep-hfc needs at least one nucleus");
        const auto axis = linspace(c.run.a_start_rad_per_us.value_or(1.0),
                                   c.run.a_stop_rad_per_us.value_or(30.0), c.run.points.value_or(30));
        res = sweep_hyperfine(m.system, m.rates, axis, opts);
    }

    CsvTable table;
    table.comment(header_line(c, dt_text(opts.solver), "none"));
    table.comment(model_line(m));
    std::vector<std::string> cols{std::string(axis_column(res.axis))};
    for (Theory t : theories_of(c.theory)) {
        cols.push_back("Y_S_" + std::string(column_suffix(t)));
        cols.push_back("Y_T_" + std::string(column_suffix(t)));
    }
    cols.push_back("converged");
    table.columns(cols);
    std::size_t unconverged = 0;
    for (std::size_t i = 0; i < res.axis_values.size(); ++i) {
        std::vector<std::string> row{format_number(res.axis_values[i])};
        for (Theory t : theories_of(c.theory)) {
            row.push_back(format_number(res.curve(t).y_s[i]));
            row.push_back(format_number(res.curve(t).y_t[i]));
        }
        const bool ok = res.converged_at(i);
        if (!ok) ++unconverged;
        row.push_back(ok ? "1" : "0");
        table.row(row);
    }

    ScenarioOutcome out;
    std::string summary = std::string(to_string(c.run.kind)) + ": " +
                          std::to_string(res.axis_values.size()) + " points";
    for (Theory t : theories_of(c.theory)) {
        const auto& cv = res.curve(t);
        const auto [lo, hi] = std::minmax_element(cv.y_t.begin(), cv.y_t.end());
        summary += " " + std::string(to_string(t)) + " Y_T in [" + fmt_short(*lo) + ", " + fmt_short(*hi) + "]";
    }
    if (unconverged) {
        out.warning = true;
        summary = "warning: " + std::to_string(unconverged) + " unconverged points; " + summary;
    }
    out.summary = summary;
    out.csv = table.str();
    return out;
}

inline ScenarioOutcome run_trace(const ScenarioConfig& c, const ResolvedPreset& m) {
    if (m.system.nuclei.size() != 1) throw ConfigError("/model", "trace-qs needs a one-nucleus model");
    const bool with_recombination = c.run.with_recombination.value_or(true);
    const double t_max = c.run.t_max_us.value_or(0.05);
    const SolverOptions solver = c.solver.options();

    std::vector<std::pair<std::string, EvolutionRecord>> recs;
    if (with_recombination) {
        for (Theory t : theories_of(c.theory)) {
            recs.emplace_back("Q_S_" + std::string(column_suffix(t)),
                              trace_qs(m.system, m.rates, *c.run.a_rad_per_us, true, t_max,
                                       std::nullopt, t, solver));
        }
    } else {
        recs.emplace_back("Q_S_unitary", trace_qs(m.system, m.rates, *c.run.a_rad_per_us, false, t_max,
                                                  std::nullopt, Theory::quantum, solver));
    }

    CsvTable table;
    ResolvedPreset traced = m;
    traced.system.nuclei[0].hyperfine = HyperfineCoupling::isotropic(*c.run.a_rad_per_us);
    table.comment(header_line(c, dt_text(solver, recs[0].second.dt_us), "none"));
    table.comment(model_line(traced));
    std::vector<std::string> cols{"t_us"};
    for (const auto& [name, r] : recs) cols.push_back(name);
    table.columns(cols);
    const auto& times = recs[0].second.times;
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<std::string> row{format_number(times[i])};
        for (const auto& [name, r] : recs) row.push_back(format_number(r.q_s_expect[i]));
        table.row(row);
    }
    ScenarioOutcome out;
    out.summary = "trace-qs: " + std::to_string(times.size()) + " samples";
    for (const auto& [name, r] : recs) {
        const auto mn = *std::min_element(r.q_s_expect.begin(), r.q_s_expect.end());
        out.summary += " min(" + name + ")=" + fmt_short(mn);
    }
    out.csv = table.str();
    return out;
}

inline FitProblem fit_problem(const ScenarioConfig& c, const ResolvedPreset& m) {
    FitProblem p;
    p.model = m.system;
    p.rates = m.rates;
    p.theory = c.theory == TheoryChoice::quantum ? Theory::quantum : Theory::phenomenological;
    p.axis = *c.run.axis == "field_mT" ? SweepAxis::field_mT : SweepAxis::hyperfine_rad_per_us;
    p.axis_values = *c.run.axis_values;
    p.observable = *c.run.observable == "Y_S" ? Observable::singlet_yield : Observable::triplet_yield;
    p.affine = c.run.affine.value_or(false);
    p.solver = c.solver.options();
    for (std::size_t i = 0; i < c.run.free->size(); ++i) {
        const auto& f = (*c.run.free)[i];
        FreeParameter fp;
        fp.kind = f.param == "A_rad_per_us" ? ParameterKind::hyperfine_rad_per_us
                  : f.param == "A_mT"       ? ParameterKind::hyperfine_mT
                  : f.param == "k_s_per_us" ? ParameterKind::k_s
                                            : ParameterKind::k_t;
        fp.nucleus = f.nucleus;
        fp.lower = f.lower;
        fp.upper = f.upper;
        fp.start = f.start;
        const bool hyperfine = fp.kind == ParameterKind::hyperfine_rad_per_us ||
                               fp.kind == ParameterKind::hyperfine_mT;
        if (hyperfine && fp.nucleus >= m.system.nuclei.size()) {
            throw ConfigError("/run/free/" + std::to_string(i) + "/nucleus", "no such nucleus in the model");
        }
        if (hyperfine && fp.nucleus == 0 && p.axis == SweepAxis::hyperfine_rad_per_us) {
            throw ConfigError("/run/free/" + std::to_string(i) + "/nucleus",
                              "nucleus 0 is the swept hyperfine axis");
        }
        p.free.push_back(fp);
    }
    if (c.run.target) {
        p.target = *c.run.target;
    } else {
        p.target = model_curve(p, *c.run.synthetic_truth);
    }
    return p;
}

inline ScenarioOutcome run_fit(const ScenarioConfig& c, const ResolvedPreset& m) {
    const FitProblem problem = fit_problem(c, m);
    FitConfig cfg;
    if (c.run.max_iters) cfg.max_iters = *c.run.max_iters;
    if (c.run.tol) cfg.tol = *c.run.tol;
    if (c.run.restarts) cfg.restarts = *c.run.restarts;
    if (c.run.seed) cfg.seed = *c.run.seed;
    const FitReport rep = fit(problem, cfg);

    CsvTable table;
    table.comment(header_line(c, dt_text(problem.solver), std::to_string(cfg.seed)));
    table.comment(model_line(m));
    table.comment("fit best_loss=" + fmt_short(rep.best_loss) + " iterations=" + std::to_string(rep.iterations) +
                  " evaluations=" + std::to_string(rep.evaluations) + " converged=" + (rep.converged ? "1" : "0") +
                  " restarts=" + std::to_string(cfg.restarts) + " tol=" + fmt_short(cfg.tol));
    table.columns({"parameter", "value", "unit", "lower", "upper"});
    for (std::size_t i = 0; i < rep.parameters.size(); ++i) {
        const auto& p = rep.parameters[i];
        table.row({p.name, format_number(p.value), p.unit, format_number(problem.free[i].lower),
                   format_number(problem.free[i].upper)});
    }

    ScenarioOutcome out;
    std::string summary = "fit:";
    for (const auto& p : rep.parameters) summary += " " + p.name + "=" + fmt_short(p.value);
    summary += " best_loss=" + fmt_short(rep.best_loss) + " converged=" + (rep.converged ? "1" : "0");
    if (!rep.converged) {
        out.warning = true;
        summary = "warning: fit did not converge; " + summary;
    }
    out.summary = summary;
    out.csv = table.str();
    return out;
}

}  // namespace detail

/// Executes the configured run, writes the CSV to output.path and the one-line
/// summary to `summary`. Non-convergence is flagged, not an error.
inline ScenarioOutcome run_scenario(const ScenarioConfig& config, std::ostream& summary) {
    const ResolvedPreset model = resolve_model(config);
    ScenarioOutcome out;
    switch (config.run.kind) {
        case RunKind::evolve: out = detail::run_evolve(config, model); break;
        case RunKind::sweep_field:
        case RunKind::sweep_hfc: out = detail::run_sweep(config, model); break;
        case RunKind::trace_qs: out = detail::run_trace(config, model); break;
        case RunKind::fit: out = detail::run_fit(config, model); break;
    }
    CsvTable::write_text(config.output.path, out.csv);
    summary << out.summary << '\n';
    return out;
}

}  // namespace radpair

#endif  // RADPAIR_SCENARIO_HPP
