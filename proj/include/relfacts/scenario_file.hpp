// Copyright 2026 The relfacts Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * JSON scenario files: systems, initial state, variables, interaction
 * sequences and report plan.
 *
 * Complex numbers are [re, im] pairs (a bare number is read as real).
 * Matrices are flat row-major lists of pairs. Composite indices put the
 * first listed system first, matching the library convention.
 *
 * Example:
 *
 *     {
 *       "name": "wigners-friend",
 *       "systems": [{"label": "S", "dim": 2, "role": "S"},
 *                   {"label": "F", "dim": 2, "role": "F"},
 *                   {"label": "W", "dim": 2, "role": "W"}],
 *       "initial_state": "plus",
 *       "variables": [
 *         {"label": "Z_S", "targets": ["S"],
 *          "basis": [{"value": "0", "vector": [1, 0]},
 *                    {"value": "1", "vector": [0, 1]}]},
 *         {"label": "bell", "targets": ["S", "F"],
 *          "basis": [{"value": "phi+", "vector": [0.7071067811865476, 0, 0,
 *                                                  0.7071067811865476]}],
 *          "completion": "other"}],
 *       "sequences": [{"name": "main", "interactions": [
 *         {"kind": "premeasure", "variable": "Z_S", "pointer": "F"},
 *         {"kind": "premeasure", "variable": "bell", "pointer": "W"}]}],
 *       "reports": [{"label": "audit", "kind": "audit", "sequence": "main",
 *                    "b": {"step": 1, "value": "phi+"}, "partition": 0}]
 *     }
 */
#pragma once

#include "relfacts/composite.hpp"
#include "relfacts/error.hpp"
#include "relfacts/plan.hpp"
#include "relfacts/registry.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace relfacts {

using json = nlohmann::ordered_json;

namespace detail {

inline const json &require(const json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(where + ": missing '" + key + "'");
    }
    return j.at(key);
}

template <typename T>
T get_as(const json &j, const std::string &where) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ValidationError(where + ": value has the wrong type");
    }
}

inline void reject_unknown(const json &j, std::initializer_list<const char *> allowed,
                           const std::string &where) {
    if (!j.is_object()) {
        throw ValidationError(where + ": expected an object");
    }
    for (const auto &item : j.items()) {
        bool ok = false;
        for (const char *a : allowed) {
            ok = ok || item.key() == a;
        }
        if (!ok) {
            throw ValidationError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

inline cplx parse_complex(const json &j, const std::string &where) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        return {j[0].get<double>(), j[1].get<double>()};
    }
    throw ValidationError(where + ": complex numbers are [re, im] pairs");
}

inline std::vector<cplx> parse_complex_list(const json &j, const std::string &where) {
    if (!j.is_array()) {
        throw ValidationError(where + ": expected a list of complex numbers");
    }
    std::vector<cplx> out;
    out.reserve(j.size());
    for (const auto &x : j) {
        out.push_back(parse_complex(x, where));
    }
    return out;
}

inline json complex_list(std::span<const cplx> v) {
    json a = json::array();
    for (const auto &x : v) {
        a.push_back(json::array({x.real(), x.imag()}));
    }
    return a;
}

inline Operator parse_square(const json &j, std::size_t dim, const std::string &where) {
    auto entries = parse_complex_list(j, where);
    if (entries.size() != dim * dim) {
        throw ValidationError(where + ": expected " + std::to_string(dim * dim) +
                              " matrix entries, got " + std::to_string(entries.size()));
    }
    return Operator(dim, dim, std::move(entries));
}

inline std::vector<std::string> parse_labels(const json &j, const std::string &where) {
    if (!j.is_array()) {
        throw ValidationError(where + ": expected a list of system labels");
    }
    std::vector<std::string> out;
    for (const auto &x : j) {
        out.push_back(get_as<std::string>(x, where));
    }
    return out;
}

inline FactRef parse_fact(const json &j, const std::string &where) {
    reject_unknown(j, {"step", "value"}, where);
    return {get_as<std::size_t>(require(j, "step", where), where),
            get_as<std::string>(require(j, "value", where), where)};
}

inline json fact_json(const FactRef &f) { return {{"step", f.step}, {"value", f.value}}; }

inline StabilityProbe parse_probe(const json &j, const std::string &where) {
    reject_unknown(j, {"pointer", "prefix"}, where);
    return {get_as<std::string>(require(j, "pointer", where), where),
            get_as<std::size_t>(require(j, "prefix", where), where)};
}

inline json probe_json(const StabilityProbe &p) {
    return {{"pointer", p.pointer}, {"prefix", p.prefix}};
}

inline Variable parse_variable(const json &j, const SystemRegistry &reg) {
    const std::string where = "variable";
    reject_unknown(j, {"label", "targets", "basis", "outcomes", "completion"}, where);
    const auto label = get_as<std::string>(require(j, "label", where), where);
    const auto w = "variable '" + label + "'";
    auto targets = parse_labels(require(j, "targets", w), w);
    const std::size_t d = reg.dim_of(targets);
    if (j.contains("basis")) {
        std::vector<BasisVector> basis;
        for (const auto &b : j.at("basis")) {
            reject_unknown(b, {"value", "vector"}, w);
            basis.push_back({get_as<std::string>(require(b, "value", w), w),
                             parse_complex_list(require(b, "vector", w), w)});
        }
        std::optional<std::string> completion;
        if (j.contains("completion")) {
            completion = get_as<std::string>(j.at("completion"), w);
        }
        return pvm_from_basis(label, std::move(targets), basis, reg, completion);
    }
    std::vector<Outcome> outcomes;
    for (const auto &o : require(j, "outcomes", w)) {
        reject_unknown(o, {"value", "projector"}, w);
        outcomes.push_back({get_as<std::string>(require(o, "value", w), w),
                            parse_square(require(o, "projector", w), d, w)});
    }
    Variable v(label, std::move(targets), std::move(outcomes));
    v.check_against(reg);
    return v;
}

inline json variable_json(const Variable &v) {
    json outcomes = json::array();
    for (const auto &o : v.outcomes()) {
        outcomes.push_back({{"value", o.value}, {"projector", complex_list(o.projector.data())}});
    }
    return {{"label", v.label()}, {"targets", v.targets()}, {"outcomes", outcomes}};
}

inline Interaction parse_interaction(const json &j, const NamedScenario &ns,
                                     const std::string &where) {
    const auto kind = get_as<std::string>(require(j, "kind", where), where);
    const bool inv = j.contains("inverse") && get_as<bool>(j.at("inverse"), where);
    std::optional<std::string> label;
    if (j.contains("label")) {
        label = get_as<std::string>(j.at("label"), where);
    }
    Interaction it;
    if (kind == "premeasure") {
        reject_unknown(j, {"kind", "label", "variable", "pointer", "context", "inverse"}, where);
        std::optional<std::string> context;
        if (j.contains("context")) {
            context = get_as<std::string>(j.at("context"), where);
        }
        it = premeasurement_unitary(
            ns.variable(get_as<std::string>(require(j, "variable", where), where)),
            get_as<std::string>(require(j, "pointer", where), where), ns.registry, context);
    } else if (kind == "couple") {
        reject_unknown(j, {"kind", "label", "variable", "env", "angle", "inverse"}, where);
        it = controlled_coupling(
            ns.variable(get_as<std::string>(require(j, "variable", where), where)),
            get_as<std::string>(require(j, "env", where), where),
            get_as<double>(require(j, "angle", where), where), ns.registry);
    } else if (kind == "unitary") {
        reject_unknown(j, {"kind", "label", "targets", "matrix", "fact", "inverse"}, where);
        auto targets = parse_labels(require(j, "targets", where), where);
        auto u = parse_square(require(j, "matrix", where), ns.registry.dim_of(targets), where);
        std::optional<std::string> context;
        std::optional<Variable> var;
        if (j.contains("fact")) {
            const auto &f = j.at("fact");
            reject_unknown(f, {"context", "variable"}, where + " fact");
            context = get_as<std::string>(require(f, "context", where), where);
            var = ns.variable(get_as<std::string>(require(f, "variable", where), where));
        }
        it = unitary_interaction(label.value_or("unitary"), std::move(targets), std::move(u),
                                 ns.registry, context, var);
    } else {
        throw ValidationError(where + ": unknown interaction kind '" + kind + "'");
    }
    if (inv) {
        it = inverse(it);
    }
    if (label) {
        it.label = *label;
    }
    return it;
}

inline json interaction_json(const Interaction &it) {
    const auto &o = it.origin;
    json j;
    switch (o.kind) {
    case InteractionKind::Premeasure:
        j = {{"kind", "premeasure"}, {"label", it.label}, {"variable", o.variable},
             {"pointer", o.pointer}};
        if (!o.inverse && it.fact_context && *it.fact_context != o.pointer) {
            j["context"] = *it.fact_context;
        }
        break;
    case InteractionKind::Couple:
        j = {{"kind", "couple"}, {"label", it.label}, {"variable", o.variable},
             {"env", o.pointer}, {"angle", o.angle}};
        break;
    case InteractionKind::Unitary:
        j = {{"kind", "unitary"}, {"label", it.label}, {"targets", it.targets},
             {"matrix", complex_list(it.unitary.data())}};
        if (it.establishes_fact()) {
            j["fact"] = {{"context", *it.fact_context},
                         {"variable", it.fact_variable->label()}};
        }
        break;
    }
    if (o.inverse) {
        j["inverse"] = true;
    }
    return j;
}

inline ReportSpec parse_report(const json &j, const std::string &where) {
    const auto kind = get_as<std::string>(require(j, "kind", where), where);
    const auto label = j.contains("label") ? get_as<std::string>(j.at("label"), where) : kind;
    auto seq = [&] { return get_as<std::string>(require(j, "sequence", where), where); };
    auto step = [&](const char *key) {
        return get_as<std::size_t>(require(j, key, where), where);
    };
    if (kind == "probability") {
        reject_unknown(j, {"label", "kind", "sequence", "facts"}, where);
        ProbabilitySpec s{seq(), {}};
        for (const auto &f : require(j, "facts", where)) {
            s.facts.push_back(parse_fact(f, where));
        }
        return {label, s};
    }
    if (kind == "conditional") {
        reject_unknown(j, {"label", "kind", "sequence", "query", "given"}, where);
        ConditionalSpec s{seq(), parse_fact(require(j, "query", where), where), {}};
        for (const auto &f : require(j, "given", where)) {
            s.given.push_back(parse_fact(f, where));
        }
        return {label, s};
    }
    if (kind == "audit") {
        reject_unknown(j, {"label", "kind", "sequence", "b", "partition", "stability"}, where);
        AuditSpec s{seq(), parse_fact(require(j, "b", where), where), step("partition"), {}};
        if (j.contains("stability")) {
            s.stability = parse_probe(j.at("stability"), where);
        }
        return {label, s};
    }
    if (kind == "witness") {
        reject_unknown(j, {"label", "kind", "sequence", "b", "partition"}, where);
        return {label,
                WitnessSpec{seq(), parse_fact(require(j, "b", where), where), step("partition")}};
    }
    if (kind == "epsilon" || kind == "eta") {
        reject_unknown(j, {"label", "kind", "sequence", "pointer", "prefix"}, where);
        const StabilityProbe p{get_as<std::string>(require(j, "pointer", where), where),
                               step("prefix")};
        if (kind == "epsilon") {
            return {label, EpsilonSpec{seq(), p}};
        }
        return {label, EtaSpec{seq(), p}};
    }
    if (kind == "agreement") {
        reject_unknown(j, {"label", "kind", "sequence", "first", "second"}, where);
        return {label, AgreementSpec{seq(), step("first"), step("second")}};
    }
    if (kind == "chsh") {
        reject_unknown(j, {"label", "kind", "correlators"}, where);
        const auto &cs = require(j, "correlators", where);
        if (!cs.is_array() || cs.size() != 4) {
            throw ValidationError(where + ": chsh needs exactly four correlators");
        }
        ChshSpec s;
        for (std::size_t k = 0; k < 4; ++k) {
            const auto &c = cs[k];
            reject_unknown(c, {"sequence", "a", "b", "friends"}, where);
            CorrelatorSpec cor{get_as<std::string>(require(c, "sequence", where), where),
                               get_as<std::size_t>(require(c, "a", where), where),
                               get_as<std::size_t>(require(c, "b", where), where),
                               {}};
            if (c.contains("friends")) {
                cor.friend_steps = get_as<std::vector<std::size_t>>(c.at("friends"), where);
            }
            s.correlators[k] = std::move(cor);
        }
        return {label, s};
    }
    throw ValidationError(where + ": unknown report kind '" + kind + "'");
}

inline json report_json(const ReportSpec &r) {
    json j{{"label", r.label}, {"kind", report_kind(r.body)}};
    std::visit(
        [&](const auto &b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, ProbabilitySpec>) {
                j["sequence"] = b.sequence;
                j["facts"] = json::array();
                for (const auto &f : b.facts) {
                    j["facts"].push_back(fact_json(f));
                }
            } else if constexpr (std::is_same_v<T, ConditionalSpec>) {
                j["sequence"] = b.sequence;
                j["query"] = fact_json(b.query);
                j["given"] = json::array();
                for (const auto &f : b.given) {
                    j["given"].push_back(fact_json(f));
                }
            } else if constexpr (std::is_same_v<T, AuditSpec>) {
                j["sequence"] = b.sequence;
                j["b"] = fact_json(b.b);
                j["partition"] = b.partition_step;
                if (b.stability) {
                    j["stability"] = probe_json(*b.stability);
                }
            } else if constexpr (std::is_same_v<T, WitnessSpec>) {
                j["sequence"] = b.sequence;
                j["b"] = fact_json(b.b);
                j["partition"] = b.partition_step;
            } else if constexpr (std::is_same_v<T, EpsilonSpec> || std::is_same_v<T, EtaSpec>) {
                j["sequence"] = b.sequence;
                j["pointer"] = b.probe.pointer;
                j["prefix"] = b.probe.prefix;
            } else if constexpr (std::is_same_v<T, AgreementSpec>) {
                j["sequence"] = b.sequence;
                j["first"] = b.first_step;
                j["second"] = b.second_step;
            } else if constexpr (std::is_same_v<T, ChshSpec>) {
                j["correlators"] = json::array();
                for (const auto &c : b.correlators) {
                    j["correlators"].push_back({{"sequence", c.sequence},
                                                {"a", c.a_step},
                                                {"b", c.b_step},
                                                {"friends", c.friend_steps}});
                }
            }
        },
        r.body);
    return j;
}

inline InitialSpec parse_initial(const json &j) {
    const std::string where = "initial_state";
    if (j.is_string()) {
        auto name = j.get<std::string>();
        if (name == "|0...0>" || name == "|0…0⟩") {
            name = "zero";
        }
        return PresetState{name};
    }
    reject_unknown(j, {"preset", "product", "amplitudes"}, where);
    if (j.contains("preset")) {
        return PresetState{get_as<std::string>(j.at("preset"), where)};
    }
    if (j.contains("product")) {
        ProductState p;
        for (const auto &f : j.at("product")) {
            p.factors.push_back(parse_complex_list(f, where));
        }
        return p;
    }
    return ExplicitState{parse_complex_list(require(j, "amplitudes", where), where)};
}

inline json initial_json(const InitialSpec &spec) {
    if (const auto *p = std::get_if<PresetState>(&spec)) {
        return p->name;
    }
    if (const auto *p = std::get_if<ProductState>(&spec)) {
        json f = json::array();
        for (const auto &v : p->factors) {
            f.push_back(complex_list(v));
        }
        return {{"product", f}};
    }
    return {{"amplitudes", complex_list(std::get<ExplicitState>(spec).amplitudes)}};
}

} // namespace detail

/// Parses and validates a whole scenario document.
inline NamedScenario scenario_from_json(const json &doc) {
    using namespace detail;
    reject_unknown(doc, {"format", "name", "parameters", "systems", "initial_state",
                         "variables", "sequences", "reports"},
                   "scenario");
    NamedScenario ns;
    ns.name = doc.contains("name") ? get_as<std::string>(doc.at("name"), "name") : "file";
    if (doc.contains("parameters")) {
        for (const auto &item : doc.at("parameters").items()) {
            ns.parameters.push_back({item.key(), get_as<double>(item.value(), "parameters")});
        }
    }
    for (const auto &s : require(doc, "systems", "scenario")) {
        reject_unknown(s, {"label", "dim", "role"}, "system");
        ns.registry.add(get_as<std::string>(require(s, "label", "system"), "system"),
                        get_as<std::size_t>(require(s, "dim", "system"), "system"),
                        role_from_name(s.contains("role") ? get_as<std::string>(s.at("role"), "system")
                                                          : std::string()));
    }
    if (ns.registry.empty()) {
        throw ValidationError("scenario declares no systems");
    }
    ns.registry.check_capacity();
    ns.set_initial(doc.contains("initial_state") ? parse_initial(doc.at("initial_state"))
                                                 : InitialSpec{PresetState{"zero"}});
    if (doc.contains("variables")) {
        for (const auto &v : doc.at("variables")) {
            ns.add_variable(parse_variable(v, ns.registry));
        }
    }
    for (const auto &s : require(doc, "sequences", "scenario")) {
        reject_unknown(s, {"name", "interactions"}, "sequence");
        Sequence seq{get_as<std::string>(require(s, "name", "sequence"), "sequence"), {}};
        for (const auto &n : ns.sequences) {
            if (n.name == seq.name) {
                throw ValidationError("duplicate sequence '" + seq.name + "'");
            }
        }
        std::size_t k = 0;
        for (const auto &it : require(s, "interactions", "sequence")) {
            seq.interactions.push_back(parse_interaction(
                it, ns, "sequence '" + seq.name + "' interaction " + std::to_string(k++)));
        }
        ns.sequences.push_back(std::move(seq));
    }
    if (doc.contains("reports")) {
        std::size_t k = 0;
        for (const auto &r : doc.at("reports")) {
            ns.report_plan.push_back(parse_report(r, "report " + std::to_string(k++)));
        }
    }
    return ns;
}

inline NamedScenario scenario_from_string(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(std::string("scenario file is not valid JSON: ") + e.what());
    }
    return scenario_from_json(doc);
}

inline NamedScenario load_scenario_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open scenario file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_string(ss.str());
}

inline json scenario_to_json(const NamedScenario &ns) {
    using namespace detail;
    json doc;
    doc["format"] = "relfacts-scenario/1";
    doc["name"] = ns.name;
    doc["parameters"] = json::object();
    for (const auto &p : ns.parameters) {
        doc["parameters"][p.name] = p.value;
    }
    doc["systems"] = json::array();
    for (const auto &s : ns.registry.systems()) {
        json sys{{"label", s.label}, {"dim", s.dim}};
        if (s.role != Role::None) {
            sys["role"] = role_name(s.role);
        }
        doc["systems"].push_back(sys);
    }
    doc["initial_state"] = initial_json(ns.initial_spec);
    doc["variables"] = json::array();
    for (const auto &v : ns.variables) {
        doc["variables"].push_back(variable_json(v));
    }
    doc["sequences"] = json::array();
    for (const auto &s : ns.sequences) {
        json its = json::array();
        for (const auto &it : s.interactions) {
            its.push_back(interaction_json(it));
        }
        doc["sequences"].push_back({{"name", s.name}, {"interactions", its}});
    }
    doc["reports"] = json::array();
    for (const auto &r : ns.report_plan) {
        doc["reports"].push_back(report_json(r));
    }
    return doc;
}

} // namespace relfacts
