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
 * Variables (projective decompositions) and the interaction builders used
 * by scenarios: premeasurements, environment couplings and plain unitaries.
 */
#pragma once

#include "relfacts/error.hpp"
#include "relfacts/linalg.hpp"
#include "relfacts/registry.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relfacts {

struct Outcome {
    std::string value;
    Operator projector;
};

/// A complete family of mutually orthogonal projectors on `targets`,
/// each labeled by a value. Projectors may have rank > 1.
class Variable {
  public:
    Variable() = default;

    Variable(std::string label, std::vector<std::string> targets,
             std::vector<Outcome> outcomes, const Tolerances &tol = {})
        : label_(std::move(label)), targets_(std::move(targets)),
          outcomes_(std::move(outcomes)) {
        validate_structure(tol);
    }

    [[nodiscard]] const std::string &label() const noexcept { return label_; }
    [[nodiscard]] const std::vector<std::string> &targets() const noexcept {
        return targets_;
    }
    [[nodiscard]] const std::vector<Outcome> &outcomes() const noexcept {
        return outcomes_;
    }
    [[nodiscard]] std::size_t size() const noexcept { return outcomes_.size(); }
    [[nodiscard]] std::size_t local_dim() const {
        return outcomes_.front().projector.rows();
    }
    [[nodiscard]] const Operator &projector(std::size_t i) const {
        return outcomes_.at(i).projector;
    }

    [[nodiscard]] std::size_t index_of(const std::string &value) const {
        for (std::size_t i = 0; i < outcomes_.size(); ++i) {
            if (outcomes_[i].value == value) {
                return i;
            }
        }
        throw ValidationError("variable '" + label_ + "' has no value '" + value + "'");
    }

    [[nodiscard]] bool has_value(const std::string &value) const {
        for (const auto &o : outcomes_) {
            if (o.value == value) {
                return true;
            }
        }
        return false;
    }

    /// Checks that targets exist and span the projectors' dimension.
    void check_against(const SystemRegistry &registry) const {
        (void)registry.positions(targets_);
        if (registry.dim_of(targets_) != local_dim()) {
            throw ValidationError("variable '" + label_ +
                                  "': projector dimension does not match targets");
        }
    }

  private:
    void validate_structure(const Tolerances &tol) const {
        if (targets_.empty()) {
            throw ValidationError("variable '" + label_ + "' has no targets");
        }
        if (outcomes_.empty()) {
            throw ValidationError("variable '" + label_ + "' has no outcomes");
        }
        const std::size_t d = outcomes_.front().projector.rows();
        Operator sum(d, d);
        for (std::size_t i = 0; i < outcomes_.size(); ++i) {
            const auto &p = outcomes_[i].projector;
            if (p.rows() != d || !p.square()) {
                throw ValidationError("variable '" + label_ +
                                      "': projectors differ in shape");
            }
            if (!p.is_projector(tol.validation)) {
                throw ValidationError("variable '" + label_ + "': outcome '" +
                                      outcomes_[i].value + "' is not a projector");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (outcomes_[j].value == outcomes_[i].value) {
                    throw ValidationError("variable '" + label_ +
                                          "': duplicate value '" +
                                          outcomes_[i].value + "'");
                }
                const Operator prod = p * outcomes_[j].projector;
                if (prod.max_abs_diff(Operator(d, d)) > tol.validation) {
                    throw ValidationError("variable '" + label_ +
                                          "': projectors are not orthogonal");
                }
            }
            sum += p;
        }
        if (sum.max_abs_diff(Operator::identity(d)) > tol.validation) {
            throw ValidationError("variable '" + label_ +
                                  "': projectors do not sum to identity");
        }
    }

    std::string label_;
    std::vector<std::string> targets_;
    std::vector<Outcome> outcomes_;
};

struct BasisVector {
    std::string value;
    std::vector<cplx> vector;
};

/// Rank-1 projectors from an orthonormal family. A family that does not
/// span the target space needs `completion_value`, which receives the
/// projector onto the orthogonal complement (a coarse-grained outcome).
inline Variable pvm_from_basis(const std::string &label,
                               std::vector<std::string> targets,
                               const std::vector<BasisVector> &basis,
                               const SystemRegistry &registry,
                               const std::optional<std::string> &completion_value = {},
                               const Tolerances &tol = {}) {
    const std::size_t d = registry.dim_of(targets);
    std::vector<Outcome> outcomes;
    Operator sum(d, d);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].vector.size() != d) {
            throw ValidationError("pvm_from_basis: vector '" + basis[i].value +
                                  "' has wrong dimension");
        }
        for (std::size_t j = 0; j <= i; ++j) {
            const cplx ip = inner(basis[j].vector, basis[i].vector);
            const cplx expected = i == j ? 1.0 : 0.0;
            if (std::abs(ip - expected) > tol.validation) {
                throw ValidationError("pvm_from_basis: vectors are not orthonormal");
            }
        }
        outcomes.push_back({basis[i].value, Operator::projector_onto(basis[i].vector)});
        sum += outcomes.back().projector;
    }
    if (basis.size() < d) {
        if (!completion_value) {
            throw ValidationError("pvm_from_basis: vectors do not span the target "
                                  "space and no completion was requested");
        }
        outcomes.push_back({*completion_value, Operator::identity(d) - sum});
    }
    Variable v(label, std::move(targets), std::move(outcomes), tol);
    v.check_against(registry);
    return v;
}

/// Value label for a computational basis index of `targets`: one digit per
/// system, joined with ',' when any system has dim > 10.
inline std::string basis_label(std::size_t index, std::span<const std::size_t> dims) {
    bool wide = false;
    for (std::size_t d : dims) {
        wide = wide || d > 10;
    }
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        digits[k] = index % dims[k];
        index /= dims[k];
    }
    std::string s;
    for (std::size_t k = 0; k < digits.size(); ++k) {
        if (wide && k > 0) {
            s += ',';
        }
        s += std::to_string(digits[k]);
    }
    return s;
}

/// The computational basis of `targets` as a variable.
inline Variable computational_variable(const std::string &label,
                                       std::vector<std::string> targets,
                                       const SystemRegistry &registry) {
    std::vector<std::size_t> dims;
    for (const auto &t : targets) {
        dims.push_back(registry.dim_of(t));
    }
    const std::size_t d = registry.dim_of(targets);
    std::vector<BasisVector> basis;
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<cplx> v(d);
        v[i] = 1.0;
        basis.push_back({basis_label(i, dims), std::move(v)});
    }
    return pvm_from_basis(label, std::move(targets), basis, registry);
}

/// Spin-1/2 basis along the direction at angle `theta` from z in the x-z
/// plane: up = cos(θ/2)|0> + sin(θ/2)|1>, down = -sin(θ/2)|0> + cos(θ/2)|1>.
inline std::vector<BasisVector> spin_basis(double theta) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {{"up", {c, s}}, {"down", {-s, c}}};
}

inline Variable spin_variable(const std::string &label, const std::string &target,
                              double theta, const SystemRegistry &registry) {
    return pvm_from_basis(label, {target}, spin_basis(theta), registry);
}

enum class InteractionKind { Unitary, Premeasure, Couple };

/// How an interaction was built; lets scenario files name the constructor.
struct InteractionOrigin {
    InteractionKind kind = InteractionKind::Unitary;
    std::string variable; ///< measured variable (premeasure) or pointer (couple)
    std::string pointer;  ///< pointer system (premeasure) or environment qubit (couple)
    double angle = 0.0;   ///< coupling angle
    bool inverse = false;
};

struct Interaction {
    std::string label;
    std::vector<std::string> targets;
    Operator unitary;
    std::optional<std::string> fact_context;
    std::optional<Variable> fact_variable;
    InteractionOrigin origin;

    [[nodiscard]] bool establishes_fact() const noexcept {
        return fact_context.has_value() && fact_variable.has_value();
    }

    void validate(const SystemRegistry &registry, const Tolerances &tol = {}) const {
        const auto pos = registry.positions(targets);
        (void)pos;
        if (!unitary.square() || unitary.rows() != registry.dim_of(targets)) {
            throw ValidationError("interaction '" + label +
                                  "': unitary does not match target dimension");
        }
        if (!unitary.is_unitary(tol.validation)) {
            throw ValidationError("interaction '" + label + "' is not unitary");
        }
        if (fact_context.has_value() != fact_variable.has_value()) {
            throw ValidationError("interaction '" + label +
                                  "': fact context and fact variable go together");
        }
        if (fact_context) {
            (void)registry.index_of(*fact_context);
            fact_variable->check_against(registry);
            for (const auto &t : fact_variable->targets()) {
                bool found = false;
                for (const auto &u : targets) {
                    found = found || u == t;
                }
                if (!found) {
                    throw ValidationError("interaction '" + label +
                                          "': fact variable acts outside the targets");
                }
            }
        }
    }
};

/// Plain unitary on `targets`, optionally flagged as establishing a fact.
inline Interaction unitary_interaction(std::string label, std::vector<std::string> targets,
                                       Operator unitary, const SystemRegistry &registry,
                                       std::optional<std::string> fact_context = {},
                                       std::optional<Variable> fact_variable = {},
                                       const Tolerances &tol = {}) {
    Interaction it{std::move(label), std::move(targets), std::move(unitary),
                   std::move(fact_context), std::move(fact_variable), {}};
    it.validate(registry, tol);
    return it;
}

/// Cyclic shift on a d-level pointer raised to the power k: |j> -> |j+k mod d>.
inline Operator cyclic_shift(std::size_t dim, std::size_t power) {
    Operator s(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        s((j + power) % dim, j) = 1.0;
    }
    return s;
}

/// U = Σ_i P_i ⊗ Shift^i on (variable targets, pointer). With the pointer in
/// its ready state |0>, |a_i>|0> -> |a_i>|i>. Tagged as establishing the
/// variable's value relative to `context` (the pointer by default).
inline Interaction premeasurement_unitary(const Variable &variable,
                                          const std::string &pointer,
                                          const SystemRegistry &registry,
                                          std::optional<std::string> context = {},
                                          std::string label = {}) {
    variable.check_against(registry);
    for (const auto &t : variable.targets()) {
        if (t == pointer) {
            throw ValidationError("premeasure: pointer '" + pointer +
                                  "' is one of the measured systems");
        }
    }
    const std::size_t dp = registry.dim_of(pointer);
    if (dp < variable.size()) {
        throw ValidationError("premeasure: pointer '" + pointer + "' has dim " +
                              std::to_string(dp) + " < " +
                              std::to_string(variable.size()) + " outcomes");
    }
    const std::size_t ds = variable.local_dim();
    check_operator_dim(ds * dp, "premeasure");
    Operator u(ds * dp, ds * dp);
    for (std::size_t i = 0; i < variable.size(); ++i) {
        u += kron(variable.projector(i), cyclic_shift(dp, i));
    }
    std::vector<std::string> targets = variable.targets();
    targets.push_back(pointer);
    if (label.empty()) {
        label = "premeasure " + variable.label() + " -> " + pointer;
    }
    Interaction it{std::move(label), std::move(targets), std::move(u),
                   context.value_or(pointer), variable,
                   {InteractionKind::Premeasure, variable.label(), pointer, 0.0, false}};
    it.validate(registry);
    return it;
}

/// Real rotation |0> -> cos θ|0> + sin θ|1>.
inline Operator rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return Operator::from_rows({{c, -s}, {s, c}});
}

/// Conditioned on pointer outcome i, rotates qubit `env` by i·angle.
/// Commutes with the pointer projectors. Tagged as establishing the pointer
/// value relative to `env`.
inline Interaction controlled_coupling(const Variable &pointer_variable,
                                       const std::string &env, double angle,
                                       const SystemRegistry &registry,
                                       std::string label = {}) {
    pointer_variable.check_against(registry);
    if (registry.dim_of(env) != 2) {
        throw ValidationError("couple: environment system '" + env + "' must be a qubit");
    }
    for (const auto &t : pointer_variable.targets()) {
        if (t == env) {
            throw ValidationError("couple: environment overlaps the pointer");
        }
    }
    const std::size_t dp = pointer_variable.local_dim();
    Operator u(dp * 2, dp * 2);
    for (std::size_t i = 0; i < pointer_variable.size(); ++i) {
        u += kron(pointer_variable.projector(i),
                  rotation(static_cast<double>(i) * angle));
    }
    std::vector<std::string> targets = pointer_variable.targets();
    targets.push_back(env);
    if (label.empty()) {
        label = "couple " + pointer_variable.label() + " -> " + env;
    }
    Interaction it{std::move(label), std::move(targets), std::move(u),
                   env, pointer_variable,
                   {InteractionKind::Couple, pointer_variable.label(), env, angle, false}};
    it.validate(registry);
    return it;
}

/// U† on the same targets. Undoing an interaction establishes no fact.
inline Interaction inverse(const Interaction &it) {
    Interaction inv{"undo " + it.label, it.targets, it.unitary.adjoint(), {}, {},
                    it.origin};
    if (inv.origin.kind != InteractionKind::Unitary) {
        inv.origin.inverse = !it.origin.inverse;
    }
    return inv;
}

} // namespace relfacts
