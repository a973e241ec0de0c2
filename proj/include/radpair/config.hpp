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

#ifndef RADPAIR_CONFIG_HPP
#define RADPAIR_CONFIG_HPP

// Scenario files are JSON objects:
//
//   {
//     "model":  {"preset": "Py-h10-DMA-h11", "field_mT": 0.0}
//            |  {"custom": {"field_mT": 0.05,
//                           "nuclei": [{"spin": 0.5, "electron": 1, "A_rad_per_us": 4.0}]}},
//     "rates":  {"k_s_per_us": 20.0, "k_t_per_us": 0.5},      (optional with a preset)
//     "theory": "quantum" | "phenomenological" | "both",
//     "run":    {"kind": "evolve" | "sweep-field" | "sweep-hfc" | "trace-qs" | "fit", ...},
//     "solver": {"dt_us", "step_fraction", "epsilon_survival", "record_stride"},  (optional)
//     "output": {"path": "out.csv", "format": "csv"}
//   }
//
// A nucleus carries exactly one of A_mT, A_rad_per_us or tensor_rad_per_us
// (3x3 nested list). Unknown keys anywhere are rejected.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "radpair/calibration.hpp"
#include "radpair/presets.hpp"

namespace radpair {

using Json = nlohmann::json;

enum class TheoryChoice { quantum, phenomenological, both };
enum class RunKind { evolve, sweep_field, sweep_hfc, trace_qs, fit };

inline std::string_view to_string(TheoryChoice t) {
    switch (t) {
        case TheoryChoice::quantum: return "quantum";
        case TheoryChoice::phenomenological: return "phenomenological";
        case TheoryChoice::both: return "both";
    }
    return "?";
}

inline std::string_view to_string(RunKind k) {
    switch (k) {
        case RunKind::evolve: return "evolve";
        case RunKind::sweep_field: return "sweep-field";
        case RunKind::sweep_hfc: return "sweep-hfc";
        case RunKind::trace_qs: return "trace-qs";
        case RunKind::fit: return "fit";
    }
    return "?";
}

inline std::optional<RunKind> parse_run_kind(std::string_view s) {
    for (RunKind k : {RunKind::evolve, RunKind::sweep_field, RunKind::sweep_hfc, RunKind::trace_qs,
                      RunKind::fit}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

inline std::vector<Theory> theories_of(TheoryChoice t) {
    switch (t) {
        case TheoryChoice::quantum: return {Theory::quantum};
        case TheoryChoice::phenomenological: return {Theory::phenomenological};
        case TheoryChoice::both: return {Theory::quantum, Theory::phenomenological};
    }
    return {};
}

struct NucleusConfig {
    double spin = 0.5;
    int electron = 1;
    std::optional<double> a_mT;
    std::optional<double> a_rad_per_us;
    std::optional<std::array<double, 9>> tensor_rad_per_us;  // row major

    bool operator==(const NucleusConfig&) const = default;
};

struct ModelConfig {
    std::optional<std::string> preset;
    std::optional<double> field_mT;  // required for custom, optional override for a preset
    std::vector<NucleusConfig> nuclei;

    bool custom() const { return !preset.has_value(); }
    bool operator==(const ModelConfig&) const = default;
};

struct FreeParameterConfig {
    std::string param;  // A_rad_per_us | A_mT | k_s_per_us | k_t_per_us
    std::size_t nucleus = 0;
    double lower = 0.0;
    double upper = 1.0;
    double start = 0.5;

    bool operator==(const FreeParameterConfig&) const = default;
};

struct RunConfig {
    RunKind kind = RunKind::evolve;
    // evolve, trace-qs
    std::optional<double> t_max_us;
    // sweep-field
    std::optional<double> field_start_mT, field_stop_mT;
    // sweep-hfc
    std::optional<double> a_start_rad_per_us, a_stop_rad_per_us;
    // sweep-field, sweep-hfc
    std::optional<std::size_t> points;
    // trace-qs
    std::optional<double> a_rad_per_us;
    std::optional<bool> with_recombination;
    // fit
    std::optional<std::string> axis;        // field_mT | hyperfine_rad_per_us
    std::optional<std::vector<double>> axis_values;
    std::optional<std::string> observable;  // Y_S | Y_T
    std::optional<std::vector<double>> target;
    std::optional<std::vector<double>> synthetic_truth;
    std::optional<std::vector<FreeParameterConfig>> free;
    std::optional<std::size_t> max_iters, restarts;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    std::optional<bool> affine;

    bool operator==(const RunConfig&) const = default;
};

struct SolverConfig {
    std::optional<double> dt_us, step_fraction, epsilon_survival;
    std::optional<std::size_t> record_stride;

    SolverOptions options() const {
        SolverOptions s;
        s.dt_us = dt_us;
        if (step_fraction) s.step_fraction = *step_fraction;
        if (epsilon_survival) s.epsilon_survival = *epsilon_survival;
        if (record_stride) s.record_stride = *record_stride;
        return s;
    }

    bool operator==(const SolverConfig&) const = default;
};

struct OutputConfig {
    std::string path;
    std::string format = "csv";

    bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
    ModelConfig model;
    std::optional<RatePair> rates;
    TheoryChoice theory = TheoryChoice::both;
    RunConfig run;
    SolverConfig solver;
    OutputConfig output;

    bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

/// Reads one JSON object, remembering which keys were consumed so leftovers
/// can be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
    }

    std::string child(std::string_view key) const { return path_ + "/" + std::string(key); }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    const Json& require(const std::string& key) {
        if (!has(key)) throw ConfigError(child(key), "missing required key");
        return raw(key);
    }

    std::optional<double> number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return as_number(raw(key), child(key));
    }

    double require_number(const std::string& key) { return as_number(require(key), child(key)); }

    std::optional<std::size_t> count(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const Json& v = raw(key);
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            throw ConfigError(child(key), "expected a non-negative integer");
        }
        return v.get<std::size_t>();
    }

    std::optional<bool> boolean(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const Json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(child(key), "expected true or false");
        return v.get<bool>();
    }

    std::optional<std::string> string(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const Json& v = raw(key);
        if (!v.is_string()) throw ConfigError(child(key), "expected a string");
        return v.get<std::string>();
    }

    std::string require_string(const std::string& key) {
        require(key);
        return *string(key);
    }

    std::optional<std::vector<double>> numbers(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const Json& v = raw(key);
        if (!v.is_array()) throw ConfigError(child(key), "expected a list of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(as_number(v[i], child(key) + "/" + std::to_string(i)));
        }
        return out;
    }

    /// Rejects every key that was not read.
    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!used_.count(key)) throw ConfigError(child(key), "unknown key");
        }
    }

    static double as_number(const Json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
        return d;
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> used_;
};

inline void require_positive(const std::optional<double>& v, const std::string& path) {
    if (v && !(*v > 0.0)) throw ConfigError(path, "must be > 0");
}

inline void require_non_negative(const std::optional<double>& v, const std::string& path) {
    if (v && !(*v >= 0.0)) throw ConfigError(path, "must be >= 0");
}

inline NucleusConfig parse_nucleus(const Json& j, const std::string& path) {
    ObjectReader r(j, path);
    NucleusConfig n;
    n.spin = r.require_number("spin");
    const double twice = 2.0 * n.spin;
    if (n.spin <= 0.0 || std::abs(twice - std::round(twice)) > 1e-12) {
        throw ConfigError(r.child("spin"), "must be a positive multiple of 1/2");
    }
    const double e = r.require_number("electron");
    if (e != 1.0 && e != 2.0) throw ConfigError(r.child("electron"), "must be 1 or 2");
    n.electron = static_cast<int>(e);

    n.a_mT = r.number("A_mT");
    n.a_rad_per_us = r.number("A_rad_per_us");
    if (r.has("tensor_rad_per_us")) {
        const Json& t = r.raw("tensor_rad_per_us");
        const std::string tp = r.child("tensor_rad_per_us");
        if (!t.is_array() || t.size() != 3) throw ConfigError(tp, "expected a 3x3 nested list");
        std::array<double, 9> m{};
        for (std::size_t i = 0; i < 3; ++i) {
            const std::string rp = tp + "/" + std::to_string(i);
            if (!t[i].is_array() || t[i].size() != 3) throw ConfigError(rp, "expected a row of 3 numbers");
            for (std::size_t k = 0; k < 3; ++k) {
                m[3 * i + k] = ObjectReader::as_number(t[i][k], rp + "/" + std::to_string(k));
            }
        }
        n.tensor_rad_per_us = m;
    }
    std::vector<std::string> given;
    if (n.a_mT) given.push_back(r.child("A_mT"));
    if (n.a_rad_per_us) given.push_back(r.child("A_rad_per_us"));
    if (n.tensor_rad_per_us) given.push_back(r.child("tensor_rad_per_us"));
    if (given.empty()) {
        throw ConfigError(path, "nucleus needs one of A_mT, A_rad_per_us, tensor_rad_per_us");
    }
    if (given.size() > 1) {
        std::string all;
        for (const auto& g : given) all += (all.empty() ? "" : " and ") + g;
        throw ConfigError(given[0], "ambiguous hyperfine units: " + all + " both given");
    }
    r.finish();
    return n;
}

inline ModelConfig parse_model(const Json& j) {
    ObjectReader r(j, "/model");
    ModelConfig m;
    const bool has_preset = r.has("preset");
    const bool has_custom = r.has("custom");
    if (has_preset == has_custom) {
        throw ConfigError("/model", has_preset ? "give exactly one of /model/preset and /model/custom"
                                               : "missing /model/preset or /model/custom");
    }
    if (has_preset) {
        m.preset = r.require_string("preset");
        if (!find_preset(*m.preset)) throw ConfigError("/model/preset", "unknown preset '" + *m.preset + "'");
        m.field_mT = r.number("field_mT");
        require_non_negative(m.field_mT, "/model/field_mT");
    } else {
        ObjectReader c(r.raw("custom"), "/model/custom");
        m.field_mT = c.require_number("field_mT");
        require_non_negative(m.field_mT, "/model/custom/field_mT");
        const Json& nuclei = c.require("nuclei");
        if (!nuclei.is_array()) throw ConfigError("/model/custom/nuclei", "expected a list");
        for (std::size_t i = 0; i < nuclei.size(); ++i) {
            m.nuclei.push_back(parse_nucleus(nuclei[i], "/model/custom/nuclei/" + std::to_string(i)));
        }
        c.finish();
    }
    r.finish();
    return m;
}

inline RunConfig parse_run(const Json& j, TheoryChoice theory) {
    ObjectReader r(j, "/run");
    RunConfig run;
    const std::string kind = r.require_string("kind");
    const auto k = parse_run_kind(kind);
    if (!k) throw ConfigError("/run/kind", "unknown run kind '" + kind + "'");
    run.kind = *k;
    switch (run.kind) {
        case RunKind::evolve:
            run.t_max_us = r.number("t_max_us");
            require_positive(run.t_max_us, "/run/t_max_us");
            break;
        case RunKind::sweep_field:
            run.field_start_mT = r.number("field_start_mT");
            run.field_stop_mT = r.number("field_stop_mT");
            run.points = r.count("points");
            require_non_negative(run.field_start_mT, "/run/field_start_mT");
            require_non_negative(run.field_stop_mT, "/run/field_stop_mT");
            break;
        case RunKind::sweep_hfc:
            run.a_start_rad_per_us = r.number("a_start_rad_per_us");
            run.a_stop_rad_per_us = r.number("a_stop_rad_per_us");
            run.points = r.count("points");
            require_non_negative(run.a_start_rad_per_us, "/run/a_start_rad_per_us");
            require_non_negative(run.a_stop_rad_per_us, "/run/a_stop_rad_per_us");
            break;
        case RunKind::trace_qs:
            run.a_rad_per_us = r.require_number("a_rad_per_us");
            run.t_max_us = r.number("t_max_us");
            run.with_recombination = r.boolean("with_recombination");
            require_non_negative(run.a_rad_per_us, "/run/a_rad_per_us");
            require_positive(run.t_max_us, "/run/t_max_us");
            break;
        case RunKind::fit: {
            if (theory == TheoryChoice::both) {
                throw ConfigError("/theory", "a fit needs a single theory, not 'both'");
            }
            run.axis = r.require_string("axis");
            if (*run.axis != "field_mT" && *run.axis != "hyperfine_rad_per_us") {
                throw ConfigError("/run/axis", "expected field_mT or hyperfine_rad_per_us");
            }
            r.require("axis_values");
            run.axis_values = r.numbers("axis_values");
            if (run.axis_values->empty()) throw ConfigError("/run/axis_values", "must not be empty");
            run.observable = r.require_string("observable");
            if (*run.observable != "Y_S" && *run.observable != "Y_T") {
                throw ConfigError("/run/observable", "expected Y_S or Y_T");
            }
            run.target = r.numbers("target");
            run.synthetic_truth = r.numbers("synthetic_truth");
            if (run.target.has_value() == run.synthetic_truth.has_value()) {
                throw ConfigError("/run", "give exactly one of /run/target and /run/synthetic_truth");
            }
            if (run.target && run.target->size() != run.axis_values->size()) {
                throw ConfigError("/run/target", "length must match /run/axis_values");
            }
            const Json& free = r.require("free");
            if (!free.is_array() || free.empty() || free.size() > 6) {
                throw ConfigError("/run/free", "expected a list of 1 to 6 free parameters");
            }
            run.free.emplace();
            for (std::size_t i = 0; i < free.size(); ++i) {
                const std::string fp = "/run/free/" + std::to_string(i);
                ObjectReader f(free[i], fp);
                FreeParameterConfig p;
                p.param = f.require_string("param");
                if (p.param != "A_rad_per_us" && p.param != "A_mT" && p.param != "k_s_per_us" &&
                    p.param != "k_t_per_us") {
                    throw ConfigError(fp + "/param", "unknown parameter '" + p.param + "'");
                }
                if (auto nu = f.count("nucleus")) p.nucleus = *nu;
                p.lower = f.require_number("lower");
                p.upper = f.require_number("upper");
                p.start = f.require_number("start");
                if (!(p.lower < p.upper)) throw ConfigError(fp + "/upper", "must exceed lower");
                if (p.start < p.lower || p.start > p.upper) {
                    throw ConfigError(fp + "/start", "must lie within [lower, upper]");
                }
                f.finish();
                run.free->push_back(p);
            }
            if (run.synthetic_truth && run.synthetic_truth->size() != run.free->size()) {
                throw ConfigError("/run/synthetic_truth", "needs one value per free parameter");
            }
            run.max_iters = r.count("max_iters");
            run.restarts = r.count("restarts");
            run.tol = r.number("tol");
            require_positive(run.tol, "/run/tol");
            if (auto s = r.count("seed")) run.seed = *s;
            run.affine = r.boolean("affine");
            break;
        }
    }
    if (run.points && *run.points < 1) throw ConfigError("/run/points", "must be >= 1");
    r.finish();
    return run;
}

}  // namespace detail

/// Strict parse of a scenario document. Throws ConfigError naming the key path.
inline ScenarioConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError("/", std::string("malformed JSON: ") + e.what());
    }
    detail::ObjectReader r(j, "");
    ScenarioConfig c;

    c.model = detail::parse_model(r.require("model"));

    if (r.has("rates")) {
        detail::ObjectReader rr(r.raw("rates"), "/rates");
        RatePair rates{rr.require_number("k_s_per_us"), rr.require_number("k_t_per_us")};
        detail::require_non_negative(rates.k_s, "/rates/k_s_per_us");
        detail::require_non_negative(rates.k_t, "/rates/k_t_per_us");
        rr.finish();
        c.rates = rates;
    } else if (c.model.custom()) {
        throw ConfigError("/rates", "missing required key (custom models carry no rates)");
    }

    const std::string theory = r.require_string("theory");
    if (theory == "quantum") {
        c.theory = TheoryChoice::quantum;
    } else if (theory == "phenomenological") {
        c.theory = TheoryChoice::phenomenological;
    } else if (theory == "both") {
        c.theory = TheoryChoice::both;
    } else {
        throw ConfigError("/theory", "expected quantum, phenomenological or both");
    }

    c.run = detail::parse_run(r.require("run"), c.theory);

    if (r.has("solver")) {
        detail::ObjectReader s(r.raw("solver"), "/solver");
        c.solver.dt_us = s.number("dt_us");
        c.solver.step_fraction = s.number("step_fraction");
        c.solver.epsilon_survival = s.number("epsilon_survival");
        c.solver.record_stride = s.count("record_stride");
        detail::require_positive(c.solver.dt_us, "/solver/dt_us");
        detail::require_positive(c.solver.step_fraction, "/solver/step_fraction");
        detail::require_positive(c.solver.epsilon_survival, "/solver/epsilon_survival");
        s.finish();
    }

    {
        detail::ObjectReader o(r.require("output"), "/output");
        c.output.path = o.require_string("path");
        if (c.output.path.empty()) throw ConfigError("/output/path", "must not be empty");
        if (auto f = o.string("format")) {
            if (*f != "csv") throw ConfigError("/output/format", "only csv is supported");
            c.output.format = *f;
        }
        o.finish();
    }
    r.finish();
    return c;
}

/// Canonical JSON form: sorted keys, only the keys that were given.
inline Json to_json(const ScenarioConfig& c) {
    Json j;
    Json model;
    if (c.model.preset) {
        model["preset"] = *c.model.preset;
        if (c.model.field_mT) model["field_mT"] = *c.model.field_mT;
    } else {
        Json custom;
        custom["field_mT"] = c.model.field_mT.value_or(0.0);
        custom["nuclei"] = Json::array();
        for (const auto& n : c.model.nuclei) {
            Json nj;
            nj["spin"] = n.spin;
            nj["electron"] = n.electron;
            if (n.a_mT) nj["A_mT"] = *n.a_mT;
            if (n.a_rad_per_us) nj["A_rad_per_us"] = *n.a_rad_per_us;
            if (n.tensor_rad_per_us) {
                const auto& t = *n.tensor_rad_per_us;
                nj["tensor_rad_per_us"] = {{t[0], t[1], t[2]}, {t[3], t[4], t[5]}, {t[6], t[7], t[8]}};
            }
            custom["nuclei"].push_back(nj);
        }
        model["custom"] = custom;
    }
    j["model"] = model;
    if (c.rates) j["rates"] = {{"k_s_per_us", c.rates->k_s}, {"k_t_per_us", c.rates->k_t}};
    j["theory"] = std::string(to_string(c.theory));

    const RunConfig& r = c.run;
    Json run;
    run["kind"] = std::string(to_string(r.kind));
    auto put = [&](const char* key, const auto& opt) {
        if (opt) run[key] = *opt;
    };
    put("t_max_us", r.t_max_us);
    put("field_start_mT", r.field_start_mT);
    put("field_stop_mT", r.field_stop_mT);
    put("a_start_rad_per_us", r.a_start_rad_per_us);
    put("a_stop_rad_per_us", r.a_stop_rad_per_us);
    put("points", r.points);
    put("a_rad_per_us", r.a_rad_per_us);
    put("with_recombination", r.with_recombination);
    put("axis", r.axis);
    put("axis_values", r.axis_values);
    put("observable", r.observable);
    put("target", r.target);
    put("synthetic_truth", r.synthetic_truth);
    if (r.free) {
        Json free = Json::array();
        for (const auto& p : *r.free) {
            free.push_back({{"param", p.param}, {"nucleus", p.nucleus}, {"lower", p.lower},
                            {"upper", p.upper}, {"start", p.start}});
        }
        run["free"] = free;
    }
    put("max_iters", r.max_iters);
    put("restarts", r.restarts);
    put("tol", r.tol);
    put("seed", r.seed);
    put("affine", r.affine);
    j["run"] = run;

    Json solver = Json::object();
    if (c.solver.dt_us) solver["dt_us"] = *c.solver.dt_us;
    if (c.solver.step_fraction) solver["step_fraction"] = *c.solver.step_fraction;
    if (c.solver.epsilon_survival) solver["epsilon_survival"] = *c.solver.epsilon_survival;
    if (c.solver.record_stride) solver["record_stride"] = *c.solver.record_stride;
    if (!solver.empty()) j["solver"] = solver;

    j["output"] = {{"path", c.output.path}, {"format", c.output.format}};
    return j;
}

inline std::string serialize_config(const ScenarioConfig& c) { return to_json(c).dump(2) + "\n"; }

/// Spin system and rates described by the model and rates sections.
inline ResolvedPreset resolve_model(const ScenarioConfig& c) {
    ResolvedPreset out;
    if (c.model.preset) {
        out = *find_preset(*c.model.preset);
        if (c.model.field_mT) out.system.field_mT = *c.model.field_mT;
    } else {
        out.system.field_mT = c.model.field_mT.value_or(0.0);
        for (const auto& n : c.model.nuclei) {
            NucleusSpec spec;
            spec.spin = n.spin;
            spec.electron = n.electron == 1 ? Electron::first : Electron::second;
            if (n.a_mT) {
                spec.hyperfine = HyperfineCoupling::isotropic_mT(*n.a_mT);
            } else if (n.a_rad_per_us) {
                spec.hyperfine = HyperfineCoupling::isotropic(*n.a_rad_per_us);
            } else {
                const auto& t = *n.tensor_rad_per_us;
                Eigen::Matrix3d m;
                m << t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], t[8];
                spec.hyperfine = HyperfineCoupling(m);
            }
            out.system.nuclei.push_back(spec);
        }
    }
    if (c.rates) out.rates = *c.rates;
    return out;
}

}  // namespace radpair

#endif  // RADPAIR_CONFIG_HPP
