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
 * A named scenario: systems, initial state, one or more interaction
 * sequences over the same systems, and the reports to compute from them.
 */
#pragma once

#include "relfacts/composite.hpp"
#include "relfacts/error.hpp"
#include "relfacts/facts.hpp"
#include "relfacts/linalg.hpp"
#include "relfacts/registry.hpp"

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace relfacts {

/// Initial state descriptions.
///
/// Presets act on the leading systems and leave the rest in |0>:
/// `zero` is |0...0>, `plus` puts the first system in |+>, `bell` and
/// `singlet` entangle the first two qubits as (|00>+|11>)/√2 and
/// (|01>-|10>)/√2.
struct PresetState {
    std::string name;
};
/// One amplitude list per system, in registry order.
struct ProductState {
    std::vector<std::vector<cplx>> factors;
};
/// Full composite amplitude list, row-major in registry order.
struct ExplicitState {
    std::vector<cplx> amplitudes;
};
using InitialSpec = std::variant<PresetState, ProductState, ExplicitState>;

inline StateVector make_initial(const InitialSpec &spec, const SystemRegistry &registry) {
    registry.check_capacity();
    const std::size_t dim = registry.total_dim();
    if (const auto *p = std::get_if<PresetState>(&spec)) {
        std::vector<cplx> psi(dim);
        const double h = 1.0 / std::numbers::sqrt2;
        auto need_qubits = [&](std::size_t count) {
            if (registry.size() < count) {
                throw ValidationError("preset '" + p->name + "' needs " +
                                      std::to_string(count) + " systems");
            }
            for (std::size_t k = 0; k < count; ++k) {
                if (registry.at(k).dim != 2) {
                    throw ValidationError("preset '" + p->name +
                                          "' needs leading qubits");
                }
            }
        };
        if (p->name == "zero") {
            psi[0] = 1.0;
        } else if (p->name == "plus") {
            need_qubits(1);
            const std::size_t one = dim / 2;
            psi[0] = h;
            psi[one] = h;
        } else if (p->name == "bell" || p->name == "singlet") {
            need_qubits(2);
            const std::size_t s1 = dim / 2;
            const std::size_t s2 = dim / 4;
            if (p->name == "bell") {
                psi[0] = h;
                psi[s1 + s2] = h;
            } else {
                psi[s2] = h;
                psi[s1] = -h;
            }
        } else {
            throw ValidationError("unknown initial-state preset '" + p->name + "'");
        }
        return StateVector(std::move(psi));
    }
    if (const auto *p = std::get_if<ProductState>(&spec)) {
        if (p->factors.size() != registry.size()) {
            throw ValidationError("product state needs one factor per system");
        }
        std::vector<cplx> psi{1.0};
        for (std::size_t k = 0; k < registry.size(); ++k) {
            if (p->factors[k].size() != registry.at(k).dim) {
                throw ValidationError("product state factor for '" + registry.at(k).label +
                                      "' has the wrong dimension");
            }
            psi = kron(psi, p->factors[k]);
        }
        auto s = StateVector(std::move(psi));
        s.check_normalized(Tolerances{}.validation);
        return s;
    }
    const auto &e = std::get<ExplicitState>(spec);
    if (e.amplitudes.size() != dim) {
        throw ValidationError("explicit state has " + std::to_string(e.amplitudes.size()) +
                              " amplitudes, registry needs " + std::to_string(dim));
    }
    StateVector s(e.amplitudes);
    s.check_normalized(Tolerances{}.validation);
    return s;
}

/// A fact by position; variable and context come from the interaction.
struct FactRef {
    std::size_t step = 0;
    std::string value;
};

struct ProbabilitySpec {
    std::string sequence;
    std::vector<FactRef> facts;
};

struct ConditionalSpec {
    std::string sequence;
    FactRef query;
    std::vector<FactRef> given;
};

/// Branch structure of the state after `prefix` interactions.
struct StabilityProbe {
    std::string pointer;
    std::size_t prefix = 0;
};

struct AuditSpec {
    std::string sequence;
    FactRef b;
    std::size_t partition_step = 0;
    std::optional<StabilityProbe> stability;
};

struct WitnessSpec {
    std::string sequence;
    FactRef b;
    std::size_t partition_step = 0;
};

struct EpsilonSpec {
    std::string sequence;
    StabilityProbe probe;
};

struct EtaSpec {
    std::string sequence;
    StabilityProbe probe;
};

/// Σ_v P(first = v ∧ second = v) over shared value labels.
struct AgreementSpec {
    std::string sequence;
    std::size_t first_step = 0;
    std::size_t second_step = 0;
};

/// One correlator <A B> of two-outcome facts (first outcome +1, second -1).
/// `friend_steps` are the facts conditioned on under absoluteness semantics.
struct CorrelatorSpec {
    std::string sequence;
    std::size_t a_step = 0;
    std::size_t b_step = 0;
    std::vector<std::size_t> friend_steps;
};

/// CHSH = E00 - E01 + E10 + E11 (reported as a modulus).
struct ChshSpec {
    std::array<CorrelatorSpec, 4> correlators;
};

using ReportBody = std::variant<ProbabilitySpec, ConditionalSpec, AuditSpec, WitnessSpec,
                                EpsilonSpec, EtaSpec, AgreementSpec, ChshSpec>;

struct ReportSpec {
    std::string label;
    ReportBody body;
};

inline const char *report_kind(const ReportBody &body) {
    static constexpr const char *kNames[] = {"probability", "conditional", "audit",
                                             "witness",     "epsilon",     "eta",
                                             "agreement",   "chsh"};
    return kNames[body.index()];
}

struct Parameter {
    std::string name;
    double value = 0.0;
};

struct Sequence {
    std::string name;
    std::vector<Interaction> interactions;
};

struct NamedScenario {
    std::string name;
    std::vector<Parameter> parameters;
    SystemRegistry registry;
    InitialSpec initial_spec = PresetState{"zero"};
    std::shared_ptr<const StateVector> initial;
    std::vector<Variable> variables;
    std::vector<Sequence> sequences;
    std::vector<ReportSpec> report_plan;

    [[nodiscard]] const Variable &variable(const std::string &label) const {
        for (const auto &v : variables) {
            if (v.label() == label) {
                return v;
            }
        }
        throw ValidationError("unknown variable '" + label + "'");
    }

    [[nodiscard]] const Sequence &sequence(const std::string &seq) const {
        for (const auto &s : sequences) {
            if (s.name == seq) {
                return s;
            }
        }
        throw ValidationError("unknown sequence '" + seq + "'");
    }

    [[nodiscard]] Scenario scenario(const std::string &seq) const {
        return Scenario(registry, initial, sequence(seq).interactions);
    }

    /// Adds a variable, rejecting a clashing label.
    const Variable &add_variable(Variable v) {
        for (const auto &w : variables) {
            if (w.label() == v.label()) {
                throw ValidationError("duplicate variable label '" + v.label() + "'");
            }
        }
        variables.push_back(std::move(v));
        return variables.back();
    }

    void set_initial(InitialSpec spec) {
        initial_spec = std::move(spec);
        initial = std::make_shared<const StateVector>(make_initial(initial_spec, registry));
    }
};

} // namespace relfacts
