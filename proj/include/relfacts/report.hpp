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
 * Executes a scenario's report plan into flat records and writes them as
 * JSON or CSV.
 */
#pragma once

#include "relfacts/error.hpp"
#include "relfacts/facts.hpp"
#include "relfacts/format.hpp"
#include "relfacts/plan.hpp"
#include "relfacts/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace relfacts {

using FieldValue = std::variant<double, std::int64_t, bool, std::string>;

struct Field {
    std::string key;
    FieldValue value;
};

/// One named flat record.
struct Record {
    std::string name;
    std::string kind;
    std::vector<Field> fields;

    Record &add(std::string key, FieldValue v) {
        fields.push_back({std::move(key), std::move(v)});
        return *this;
    }

    [[nodiscard]] const FieldValue &get(const std::string &key) const {
        for (const auto &f : fields) {
            if (f.key == key) {
                return f.value;
            }
        }
        throw ValidationError("record '" + name + "' has no field '" + key + "'");
    }

    [[nodiscard]] double number(const std::string &key) const {
        const auto &v = get(key);
        if (const auto *d = std::get_if<double>(&v)) {
            return *d;
        }
        if (const auto *i = std::get_if<std::int64_t>(&v)) {
            return static_cast<double>(*i);
        }
        throw ValidationError("field '" + key + "' is not numeric");
    }
};

inline std::string format_value(const FieldValue &v, bool json) {
    return std::visit(
        [json](const auto &x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_number(x);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, bool>) {
                return x ? "true" : "false";
            } else {
                return json ? json_quote(x) : csv_cell(x);
            }
        },
        v);
}

namespace detail {

inline RelativeFact resolve(const Scenario &sc, const FactRef &f) {
    return fact_at(sc, f.step, f.value);
}

inline BranchDecomposition probe_branches(const NamedScenario &ns, const Scenario &sc,
                                          const StabilityProbe &probe) {
    const auto state = evolve(sc, probe.prefix);
    return branch_decompose(state, ns.variable(probe.pointer), ns.registry);
}

inline double outcome_sign(const Scenario &sc, std::size_t step, const std::string &value) {
    const auto &it = sc.at(step);
    if (!it.establishes_fact() || it.fact_variable->size() != 2) {
        throw ValidationError("correlator: step " + std::to_string(step) +
                              " must establish a two-outcome fact");
    }
    return it.fact_variable->index_of(value) == 0 ? 1.0 : -1.0;
}

/// E = Σ s(a)s(b) P(a, b [, friends]) with friends summed out when
/// `condition_on_friends` is set.
inline double correlator(const NamedScenario &ns, const CorrelatorSpec &c,
                         bool condition_on_friends, const Tolerances &tol) {
    const auto sc = ns.scenario(c.sequence);
    std::vector<std::vector<RelativeFact>> branches{{}};
    if (condition_on_friends) {
        for (std::size_t step : c.friend_steps) {
            std::vector<std::vector<RelativeFact>> next;
            for (const auto &prefix : branches) {
                for (const auto &f : all_values(sc, step)) {
                    auto b = prefix;
                    b.push_back(f);
                    next.push_back(std::move(b));
                }
            }
            branches = std::move(next);
        }
    }
    double e = 0.0;
    for (const auto &fa : all_values(sc, c.a_step)) {
        for (const auto &fb : all_values(sc, c.b_step)) {
            const double s = outcome_sign(sc, c.a_step, fa.value) *
                             outcome_sign(sc, c.b_step, fb.value);
            for (const auto &prefix : branches) {
                auto facts = prefix;
                facts.push_back(fa);
                facts.push_back(fb);
                std::sort(facts.begin(), facts.end(),
                          [](const RelativeFact &x, const RelativeFact &y) {
                              return x.step < y.step;
                          });
                e += s * chain_probability(sc, facts, tol);
            }
        }
    }
    return e;
}

} // namespace detail

inline Record run_report(const NamedScenario &ns, const ReportSpec &spec,
                         const Tolerances &tol = {}) {
    Record rec{spec.label, report_kind(spec.body), {}};
    std::visit(
        [&](const auto &body) {
            using T = std::decay_t<decltype(body)>;
            if constexpr (std::is_same_v<T, ProbabilitySpec>) {
                const auto sc = ns.scenario(body.sequence);
                std::vector<RelativeFact> facts;
                for (const auto &f : body.facts) {
                    facts.push_back(detail::resolve(sc, f));
                }
                std::sort(facts.begin(), facts.end(),
                          [](const RelativeFact &a, const RelativeFact &b) {
                              return a.step < b.step;
                          });
                rec.add("probability", chain_probability(sc, facts, tol));
            } else if constexpr (std::is_same_v<T, ConditionalSpec>) {
                const auto sc = ns.scenario(body.sequence);
                std::vector<RelativeFact> given;
                for (const auto &f : body.given) {
                    given.push_back(detail::resolve(sc, f));
                }
                rec.add("probability", conditional_probability(
                                           sc, detail::resolve(sc, body.query), given, tol));
            } else if constexpr (std::is_same_v<T, AuditSpec>) {
                const auto sc = ns.scenario(body.sequence);
                const auto &part = sc.at(body.partition_step);
                if (!part.establishes_fact()) {
                    throw ValidationError("audit: partition step establishes no fact");
                }
                auto r = total_probability_audit(sc, detail::resolve(sc, body.b),
                                                 {*part.fact_context, body.partition_step}, tol);
                if (body.stability) {
                    const auto dec = detail::probe_branches(ns, sc, *body.stability);
                    r.epsilon = epsilon_of(dec).epsilon;
                    r.bound = stability_bound(dec);
                }
                rec.add("lhs", r.lhs).add("rhs", r.rhs).add("deviation", r.deviation);
                rec.add("same_context", r.same_context)
                    .add("b_context", r.b_context)
                    .add("partition_context", r.partition_context);
                if (r.epsilon) {
                    rec.add("epsilon", *r.epsilon).add("bound", *r.bound);
                    rec.add("within_bound", r.deviation <= *r.bound + tol.validation);
                }
            } else if constexpr (std::is_same_v<T, WitnessSpec>) {
                const auto sc = ns.scenario(body.sequence);
                const auto w = quantum_logic_witness(sc, detail::resolve(sc, body.b),
                                                     all_values(sc, body.partition_step), tol);
                rec.add("lhs", w.lhs).add("rhs", w.rhs);
                const auto parts = all_values(sc, body.partition_step);
                for (std::size_t i = 0; i < parts.size(); ++i) {
                    rec.add("term_" + parts[i].value, w.terms[i]);
                }
                rec.add("difference", w.lhs - w.rhs);
            } else if constexpr (std::is_same_v<T, EpsilonSpec>) {
                const auto sc = ns.scenario(body.sequence);
                const auto dec = detail::probe_branches(ns, sc, body.probe);
                const auto e = epsilon_of(dec);
                rec.add("epsilon", e.epsilon).add("bound", stability_bound(dec));
                rec.add("branches", static_cast<std::int64_t>(dec.non_null()));
                for (const auto &b : dec.branches) {
                    rec.add("weight_" + b.value, b.weight);
                }
            } else if constexpr (std::is_same_v<T, EtaSpec>) {
                const auto sc = ns.scenario(body.sequence);
                const auto state = evolve(sc, body.probe.prefix);
                const auto r = eta_report(state, ns.variable(body.probe.pointer), ns.registry, tol);
                rec.add("eta", r.eta).add("dominant", r.dominant_value);
                rec.add("trace_distance", r.trace_distance).add("bound", r.bound);
            } else if constexpr (std::is_same_v<T, AgreementSpec>) {
                const auto sc = ns.scenario(body.sequence);
                double p = 0.0;
                for (const auto &a : all_values(sc, body.first_step)) {
                    const auto &second = *sc.at(body.second_step).fact_variable;
                    if (!second.has_value(a.value)) {
                        continue;
                    }
                    std::vector<RelativeFact> facts{a, fact_at(sc, body.second_step, a.value)};
                    std::sort(facts.begin(), facts.end(),
                              [](const RelativeFact &x, const RelativeFact &y) {
                                  return x.step < y.step;
                              });
                    p += chain_probability(sc, facts, tol);
                }
                rec.add("probability", p);
            } else if constexpr (std::is_same_v<T, ChshSpec>) {
                static constexpr const char *kTags[] = {"00", "01", "10", "11"};
                static constexpr double kSigns[] = {1.0, -1.0, 1.0, 1.0};
                double quantum = 0.0;
                double absolute = 0.0;
                std::vector<Field> eq;
                std::vector<Field> ea;
                for (std::size_t k = 0; k < 4; ++k) {
                    const double q = detail::correlator(ns, body.correlators[k], false, tol);
                    const double a = detail::correlator(ns, body.correlators[k], true, tol);
                    quantum += kSigns[k] * q;
                    absolute += kSigns[k] * a;
                    eq.push_back({std::string("e_quantum_") + kTags[k], q});
                    ea.push_back({std::string("e_absolute_") + kTags[k], a});
                }
                rec.add("quantum", std::abs(quantum)).add("absoluteness", std::abs(absolute));
                rec.add("tsirelson", 2.0 * std::numbers::sqrt2).add("classical_bound", 2.0);
                rec.fields.insert(rec.fields.end(), eq.begin(), eq.end());
                rec.fields.insert(rec.fields.end(), ea.begin(), ea.end());
            }
        },
        spec.body);
    return rec;
}

inline std::vector<Record> run_plan(const NamedScenario &ns, const Tolerances &tol = {}) {
    std::vector<Record> out;
    out.reserve(ns.report_plan.size());
    for (const auto &spec : ns.report_plan) {
        out.push_back(run_report(ns, spec, tol));
    }
    return out;
}

inline void write_record_json(std::ostream &os, const Record &r) {
    os << "{\"name\":" << json_quote(r.name) << ",\"kind\":" << json_quote(r.kind);
    for (const auto &f : r.fields) {
        os << ',' << json_quote(f.key) << ':' << format_value(f.value, true);
    }
    os << '}';
}

/// {"scenario": ..., "parameters": {...}, "reports": [...]} on one line.
inline void write_json(std::ostream &os, const std::string &scenario,
                       const std::vector<Parameter> &params, const std::vector<Record> &records) {
    os << "{\"scenario\":" << json_quote(scenario) << ",\"parameters\":{";
    for (std::size_t i = 0; i < params.size(); ++i) {
        os << (i ? "," : "") << json_quote(params[i].name) << ':'
           << format_number(params[i].value);
    }
    os << "},\"reports\":[";
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (i) {
            os << ',';
        }
        write_record_json(os, records[i]);
    }
    os << "]}\n";
}

/// One table per report: a `# name (kind)` line, a header row and a value
/// row; tables are separated by a blank line.
inline void write_csv(std::ostream &os, const std::vector<Record> &records) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        if (i) {
            os << '\n';
        }
        os << "# " << r.name << " (" << r.kind << ")\n";
        for (std::size_t k = 0; k < r.fields.size(); ++k) {
            os << (k ? "," : "") << csv_cell(r.fields[k].key);
        }
        os << '\n';
        for (std::size_t k = 0; k < r.fields.size(); ++k) {
            os << (k ? "," : "") << format_value(r.fields[k].value, false);
        }
        os << '\n';
    }
}

} // namespace relfacts
