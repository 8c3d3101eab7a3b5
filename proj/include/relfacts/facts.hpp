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
 * Probabilities of facts relative to a context.
 *
 * A scenario is an initial state followed by an ordered list of
 * interactions. A fact is the value of the variable an interaction
 * establishes for its context system, identified by the interaction's
 * position. Probabilities of a set of facts are computed by evolving
 * unitarily and projecting only at the steps that carry an assigned fact;
 * every other interaction, including other fact-establishing ones, stays
 * unitary.
 */
#pragma once

#include "relfacts/composite.hpp"
#include "relfacts/error.hpp"
#include "relfacts/linalg.hpp"
#include "relfacts/registry.hpp"
#include "relfacts/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relfacts {

/// The value `value` of variable `variable` relative to `context`,
/// established by the interaction at position `step`.
struct RelativeFact {
    std::string variable;
    std::string value;
    std::string context;
    std::size_t step = 0;

    friend bool operator==(const RelativeFact &, const RelativeFact &) = default;
};

class Scenario {
  public:
    Scenario(SystemRegistry registry, StateVector initial,
             std::vector<Interaction> interactions, const Tolerances &tol = {})
        : Scenario(std::move(registry),
                   std::make_shared<const StateVector>(std::move(initial)),
                   std::move(interactions), tol) {}

    /// Shares an initial state between scenarios (it can be large).
    Scenario(SystemRegistry registry, std::shared_ptr<const StateVector> initial,
             std::vector<Interaction> interactions, const Tolerances &tol = {})
        : registry_(std::move(registry)), initial_(std::move(initial)),
          interactions_(std::move(interactions)) {
        registry_.check_capacity();
        if (!initial_ || initial_->size() != registry_.total_dim()) {
            throw ValidationError("initial state dimension does not match the registry");
        }
        initial_->check_normalized(tol.validation);
        for (const auto &it : interactions_) {
            it.validate(registry_, tol);
        }
    }

    [[nodiscard]] const SystemRegistry &registry() const noexcept { return registry_; }
    [[nodiscard]] const StateVector &initial_state() const noexcept { return *initial_; }
    [[nodiscard]] const std::shared_ptr<const StateVector> &shared_initial() const noexcept {
        return initial_;
    }
    [[nodiscard]] const std::vector<Interaction> &interactions() const noexcept {
        return interactions_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return interactions_.size(); }
    [[nodiscard]] const Interaction &at(std::size_t step) const {
        if (step >= interactions_.size()) {
            throw ValidationError("step " + std::to_string(step) +
                                  " is past the last interaction");
        }
        return interactions_[step];
    }

    /// The fact variable at `step`, after checking that it establishes a
    /// fact relative to `context`.
    [[nodiscard]] const Variable &fact_variable(std::size_t step,
                                                const std::string &context) const {
        const auto &it = at(step);
        if (!it.establishes_fact()) {
            throw ValidationError("interaction " + std::to_string(step) + " ('" +
                                  it.label + "') establishes no fact");
        }
        if (*it.fact_context != context) {
            throw ValidationError("interaction " + std::to_string(step) +
                                  " establishes a fact relative to '" +
                                  *it.fact_context + "', not '" + context + "'");
        }
        return *it.fact_variable;
    }

    void check_fact(const RelativeFact &f) const {
        const auto &var = fact_variable(f.step, f.context);
        if (var.label() != f.variable) {
            throw ValidationError("interaction " + std::to_string(f.step) +
                                  " establishes '" + var.label() + "', not '" +
                                  f.variable + "'");
        }
        (void)var.index_of(f.value);
    }

  private:
    SystemRegistry registry_;
    std::shared_ptr<const StateVector> initial_;
    std::vector<Interaction> interactions_;
};

/// Fact with the variable label and context taken from the interaction.
inline RelativeFact fact_at(const Scenario &scenario, std::size_t step,
                            const std::string &value) {
    const auto &it = scenario.at(step);
    if (!it.establishes_fact()) {
        throw ValidationError("interaction " + std::to_string(step) +
                              " establishes no fact");
    }
    return {it.fact_variable->label(), value, *it.fact_context, step};
}

namespace detail {
inline void apply_interaction(std::vector<cplx> &psi, const Interaction &it,
                              const SystemRegistry &registry) {
    apply_local(psi, it.unitary, SubsystemIndex(registry, it.targets));
}

/// Returns the projector of the assigned value, applied on the variable's
/// own targets.
inline void apply_fact_projector(std::vector<cplx> &psi, const Scenario &scenario,
                                 const RelativeFact &f) {
    const auto &var = scenario.fact_variable(f.step, f.context);
    apply_local(psi, var.projector(var.index_of(f.value)),
                SubsystemIndex(scenario.registry(), var.targets()));
}
} // namespace detail

/// State after the first `prefix` interactions (all of them by default),
/// with no projection anywhere.
inline StateVector evolve(const Scenario &scenario,
                          std::optional<std::size_t> prefix = std::nullopt) {
    const std::size_t n = prefix.value_or(scenario.size());
    if (n > scenario.size()) {
        throw ValidationError("evolve: prefix longer than the interaction list");
    }
    std::vector<cplx> psi = scenario.initial_state().vector();
    for (std::size_t k = 0; k < n; ++k) {
        detail::apply_interaction(psi, scenario.interactions()[k], scenario.registry());
    }
    return StateVector(std::move(psi));
}

/// Joint probability of the assigned facts: unitary evolution, with a
/// Lüders update after each assigned interaction. Empty branches give 0.
inline double chain_probability(const Scenario &scenario,
                                const std::vector<RelativeFact> &facts,
                                const Tolerances &tol = {}) {
    for (std::size_t i = 0; i < facts.size(); ++i) {
        scenario.check_fact(facts[i]);
        if (i > 0 && facts[i].step <= facts[i - 1].step) {
            throw ValidationError("chain_probability: facts must be sorted by step, "
                                  "at most one per interaction");
        }
    }
    std::vector<cplx> psi = scenario.initial_state().vector();
    double p = 1.0;
    std::size_t next = 0;
    const std::size_t last = facts.empty() ? 0 : facts.back().step + 1;
    for (std::size_t k = 0; k < last; ++k) {
        detail::apply_interaction(psi, scenario.interactions()[k], scenario.registry());
        if (next < facts.size() && facts[next].step == k) {
            detail::apply_fact_projector(psi, scenario, facts[next]);
            const double q = norm2(psi);
            if (q <= tol.zero_branch) {
                return 0.0;
            }
            p *= q;
            const double n = std::sqrt(q);
            for (auto &x : psi) {
                x /= n;
            }
            ++next;
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

namespace detail {
inline std::vector<RelativeFact> merged(std::vector<RelativeFact> facts,
                                        bool &contradictory) {
    std::sort(facts.begin(), facts.end(),
              [](const RelativeFact &a, const RelativeFact &b) { return a.step < b.step; });
    std::vector<RelativeFact> out;
    contradictory = false;
    for (auto &f : facts) {
        if (!out.empty() && out.back().step == f.step) {
            if (!(out.back() == f)) {
                contradictory = true;
            }
            continue;
        }
        out.push_back(std::move(f));
    }
    return out;
}
} // namespace detail

/// P(query | conditions). Conditioning on a vanishing event is an error.
inline double conditional_probability(const Scenario &scenario, const RelativeFact &query,
                                      const std::vector<RelativeFact> &conditions,
                                      const Tolerances &tol = {}) {
    scenario.check_fact(query);
    bool contradictory = false;
    const auto cond = detail::merged(conditions, contradictory);
    const double pc = contradictory ? 0.0 : chain_probability(scenario, cond, tol);
    if (pc <= tol.zero_branch) {
        throw UndefinedConditionalError("conditional_probability: conditions have "
                                        "probability " + std::to_string(pc));
    }
    auto joint_facts = conditions;
    joint_facts.push_back(query);
    const auto joint = detail::merged(joint_facts, contradictory);
    if (contradictory) {
        return 0.0;
    }
    return std::clamp(chain_probability(scenario, joint, tol) / pc, 0.0, 1.0);
}

/// Identifies a complete partition: all values of the variable established
/// relative to `context` at `step`.
struct Partition {
    std::string context;
    std::size_t step = 0;
};

/// One comparison of P(b) against Σ_i P(b ∧ a_i).
struct StabilityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double deviation = 0.0;
    bool same_context = false;
    std::string b_context;
    std::string partition_context;
    std::optional<double> epsilon;
    std::optional<double> bound;
};

namespace detail {
/// ρ after the first `prefix` interactions, with a non-selective projective
/// measurement of the fact variable after the interaction at `dephase_step`.
/// Works on full-space matrices.
inline Operator dephased_density(const Scenario &scenario, std::size_t prefix,
                                 std::size_t dephase_step,
                                 const std::string &context) {
    constexpr std::size_t kDensityRouteCap = 2048;
    const auto &reg = scenario.registry();
    if (reg.total_dim() > kDensityRouteCap) {
        throw CapacityError("same-context audit: density-matrix route limited to "
                            "composite dimension " + std::to_string(kDensityRouteCap));
    }
    Operator rho = Operator::projector_onto(scenario.initial_state().amplitudes());
    for (std::size_t k = 0; k < prefix; ++k) {
        const auto &it = scenario.interactions()[k];
        const Operator u = embed(it.unitary, it.targets, reg);
        rho = u * rho * u.adjoint();
        if (k == dephase_step) {
            const auto &var = scenario.fact_variable(k, context);
            Operator out(rho.rows(), rho.cols());
            for (const auto &o : var.outcomes()) {
                const Operator p = embed(o.projector, var.targets(), reg);
                out += p * rho * p;
            }
            rho = std::move(out);
        }
    }
    return rho;
}
} // namespace detail

/// Compares P(b) with Σ_i P(b ∧ a_i) over the partition's values.
///
/// When b and the partition share a context, P(b) is computed with the
/// partition step measured (non-selectively, on the density matrix), which
/// is the same-context total-probability law. Otherwise P(b) is computed
/// with the partition interaction left unitary, which exposes interference.
inline StabilityReport total_probability_audit(const Scenario &scenario,
                                               const RelativeFact &b,
                                               const Partition &partition,
                                               const Tolerances &tol = {}) {
    scenario.check_fact(b);
    const auto &var = scenario.fact_variable(partition.step, partition.context);
    if (partition.step >= b.step) {
        throw ValidationError("audit: partition step must precede the fact b");
    }
    StabilityReport r;
    r.same_context = b.context == partition.context;
    r.b_context = b.context;
    r.partition_context = partition.context;
    if (r.same_context) {
        const Operator rho =
            detail::dephased_density(scenario, b.step + 1, partition.step, partition.context);
        const auto &bvar = scenario.fact_variable(b.step, b.context);
        const Operator pb = embed(bvar.projector(bvar.index_of(b.value)), bvar.targets(),
                                  scenario.registry());
        r.lhs = std::clamp((pb * rho).trace().real(), 0.0, 1.0);
    } else {
        r.lhs = chain_probability(scenario, {b}, tol);
    }
    for (const auto &o : var.outcomes()) {
        const RelativeFact a{var.label(), o.value, partition.context, partition.step};
        r.rhs += chain_probability(scenario, {a, b}, tol);
    }
    r.deviation = std::abs(r.lhs - r.rhs);
    return r;
}

struct WitnessReport {
    double lhs = 0.0; ///< P(b and (a_1 or ... or a_n)) = P(b), partition exhaustive
    double rhs = 0.0; ///< Σ_i P(b and a_i)
    std::vector<double> terms;
};

/// Distributivity check: for an exhaustive partition {a_i}, classical logic
/// gives P(b ∧ (∨ a_i)) = Σ P(b ∧ a_i). The left side is evaluated without
/// projecting at the partition, the right side branch by branch.
inline WitnessReport quantum_logic_witness(const Scenario &scenario, const RelativeFact &b,
                                           const std::vector<RelativeFact> &partition,
                                           const Tolerances &tol = {}) {
    scenario.check_fact(b);
    if (partition.empty()) {
        throw ValidationError("witness: empty partition");
    }
    const auto &first = partition.front();
    const auto &var = scenario.fact_variable(first.step, first.context);
    std::vector<bool> covered(var.size(), false);
    for (const auto &a : partition) {
        scenario.check_fact(a);
        if (a.step != first.step || a.context != first.context) {
            throw ValidationError("witness: partition facts must share one interaction");
        }
        const std::size_t i = var.index_of(a.value);
        if (covered[i]) {
            throw ValidationError("witness: value '" + a.value + "' listed twice");
        }
        covered[i] = true;
    }
    if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
        throw ValidationError("witness: partition does not cover every value");
    }
    if (first.step >= b.step) {
        throw ValidationError("witness: partition step must precede the fact b");
    }
    WitnessReport w;
    w.lhs = chain_probability(scenario, {b}, tol);
    for (const auto &a : partition) {
        w.terms.push_back(chain_probability(scenario, {a, b}, tol));
        w.rhs += w.terms.back();
    }
    return w;
}

/// Every value of the fact variable at `step`.
inline std::vector<RelativeFact> all_values(const Scenario &scenario, std::size_t step) {
    const auto &it = scenario.at(step);
    if (!it.establishes_fact()) {
        throw ValidationError("interaction " + std::to_string(step) + " establishes no fact");
    }
    std::vector<RelativeFact> out;
    for (const auto &o : it.fact_variable->outcomes()) {
        out.push_back({it.fact_variable->label(), o.value, *it.fact_context, step});
    }
    return out;
}

} // namespace relfacts
