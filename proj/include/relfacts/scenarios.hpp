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
 * Built-in scenarios and their parameter schemas.
 *
 *  - `spin`: a spin prepared up along z, measured along z and then along θ.
 *  - `wigners-friend`: a friend premeasures a system; Wigner probes S-F
 *    coherently with a Bell projector.
 *  - `pipeline`: premeasurement, environment couplings, then Wigner either
 *    probes S-F or reads the pointer.
 *  - `ewfs-chsh`: two entangled friends and two superobservers, CHSH-valued.
 *  - `fr-structure`: the de-labeling inference applied to a friend's
 *    certain fact, with and without decoherence.
 */
#pragma once

#include "relfacts/composite.hpp"
#include "relfacts/decoherence.hpp"
#include "relfacts/error.hpp"
#include "relfacts/plan.hpp"
#include "relfacts/registry.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

namespace relfacts {

struct ParamSchema {
    std::string name;
    double default_value = 0.0;
    bool integer = false;
    std::string description;
};

struct ScenarioInfo {
    std::string name;
    std::string description;
    std::vector<ParamSchema> params;
};

inline const std::vector<ScenarioInfo> &scenario_catalog() {
    constexpr double pi = std::numbers::pi;
    static const std::vector<ScenarioInfo> catalog{
        {"spin",
         "spin up along z, then measured along an axis at angle theta; reports "
         "P(up_theta | up_z)",
         {{"theta", pi / 2.0, false, "measurement angle from z in radians, [0, 2pi)"}}},
        {"wigners-friend",
         "friend F premeasures Z of S; W probes S-F with the Bell projector",
         {{"theta_prep", pi / 2.0, false,
           "S prepared as cos(t/2)|0> + sin(t/2)|1>; pi/2 gives |+>"}}},
        {"pipeline",
         "premeasure S->F, couple F to n_env environment qubits, then W probes "
         "S-F or reads the pointer",
         {{"n_env", 0.0, true, "number of environment qubits"},
          {"phi", pi / 4.0, false, "coupling angle in radians"},
          {"phi_jitter", 0.0, false,
           "angles drawn uniformly from [phi - jitter, phi + jitter] with the run seed"},
          {"theta_prep", pi / 2.0, false, "S preparation angle"}}},
        {"ewfs-chsh",
         "singlet shared by two friends' systems; superobservers either read the "
         "friend's pointer or undo the premeasurement and measure the spin",
         {{"a0", 0.0, false, "Alice's friend's axis (setting 0)"},
          {"a1", pi / 2.0, false, "Alice's direct axis (setting 1)"},
          {"b0", pi / 4.0, false, "Bob's friend's axis (setting 0)"},
          {"b1", 3.0 * pi / 4.0, false, "Bob's direct axis (setting 1)"}}},
        {"fr-structure",
         "a friend's fact used by W as its own: naive versus unitary prediction "
         "for W's Bell probe",
         {{"theta_prep", pi / 2.0, false, "S preparation angle; 0 gives an eigenstate"},
          {"n_env", 0.0, true, "environment qubits between friend and W"},
          {"phi", pi / 4.0, false, "coupling angle in radians"}}},
    };
    return catalog;
}

inline const ScenarioInfo &scenario_info(const std::string &name) {
    for (const auto &s : scenario_catalog()) {
        if (s.name == name) {
            return s;
        }
    }
    throw UsageError("unknown scenario '" + name + "'");
}

/// Defaults merged with overrides, in schema order. Unknown keys and
/// non-integral values for integer parameters are rejected.
inline std::vector<Parameter> resolve_parameters(const std::string &name,
                                                 const std::map<std::string, double> &overrides) {
    const auto &info = scenario_info(name);
    for (const auto &[key, value] : overrides) {
        bool known = false;
        for (const auto &p : info.params) {
            known = known || p.name == key;
        }
        if (!known) {
            throw UsageError("scenario '" + name + "' has no parameter '" + key + "'");
        }
    }
    std::vector<Parameter> out;
    for (const auto &p : info.params) {
        const auto it = overrides.find(p.name);
        const double v = it == overrides.end() ? p.default_value : it->second;
        if (!std::isfinite(v)) {
            throw ValidationError("parameter '" + p.name + "' must be finite");
        }
        if (p.integer && (v < 0.0 || v != std::floor(v))) {
            throw ValidationError("parameter '" + p.name + "' must be a nonnegative integer");
        }
        out.push_back({p.name, v});
    }
    return out;
}

namespace detail {
inline double param(const std::vector<Parameter> &ps, const std::string &name) {
    for (const auto &p : ps) {
        if (p.name == name) {
            return p.value;
        }
    }
    throw ValidationError("missing parameter '" + name + "'");
}

inline std::vector<cplx> prepared_qubit(double theta) {
    return {std::cos(theta / 2.0), std::sin(theta / 2.0)};
}

/// Pointer values are compared by label; pick the one with more weight.
inline std::string likelier_value(double theta) {
    return std::abs(std::cos(theta / 2.0)) >= std::abs(std::sin(theta / 2.0)) ? "0" : "1";
}
} // namespace detail

inline NamedScenario spin_measurement(double theta) {
    if (!(theta >= 0.0 && theta < 2.0 * std::numbers::pi)) {
        throw ValidationError("spin: theta must lie in [0, 2pi)");
    }
    NamedScenario ns;
    ns.name = "spin";
    ns.parameters = {{"theta", theta}};
    ns.registry.add("S", 2, Role::System).add("Fz", 2, Role::Friend).add("Ft", 2, Role::Friend);
    ns.set_initial(PresetState{"zero"});
    const Variable lz = ns.add_variable(spin_variable("L_z", "S", 0.0, ns.registry));
    const Variable lt = ns.add_variable(spin_variable("L_theta", "S", theta, ns.registry));
    ns.sequences.push_back({"main",
                            {premeasurement_unitary(lz, "Fz", ns.registry),
                             premeasurement_unitary(lt, "Ft", ns.registry)}});
    ns.report_plan = {
        {"p_up_theta_given_up_z", ConditionalSpec{"main", {1, "up"}, {{0, "up"}}}},
        {"p_up_z", ProbabilitySpec{"main", {{0, "up"}}}},
    };
    return ns;
}

inline NamedScenario wigners_friend(double theta_prep = std::numbers::pi / 2.0) {
    NamedScenario ns;
    ns.name = "wigners-friend";
    ns.parameters = {{"theta_prep", theta_prep}};
    ns.registry.add("S", 2, Role::System).add("F", 2, Role::Friend).add("W", 2, Role::Wigner);
    ns.set_initial(ProductState{{detail::prepared_qubit(theta_prep), {1.0, 0.0}, {1.0, 0.0}}});
    const Variable z = ns.add_variable(computational_variable("Z_S", {"S"}, ns.registry));
    const Variable bell = ns.add_variable(bell_probe_variable("bell", "S", "F", ns.registry));
    ns.add_variable(computational_variable("record", {"S", "F"}, ns.registry));
    ns.sequences.push_back({"main",
                            {premeasurement_unitary(z, "F", ns.registry),
                             premeasurement_unitary(bell, "W", ns.registry)}});
    ns.report_plan = {
        {"audit", AuditSpec{"main", {1, "phi+"}, 0, StabilityProbe{"record", 1}}},
        {"witness", WitnessSpec{"main", {1, "phi+"}, 0}},
        {"eta", EtaSpec{"main", {"record", 1}}},
    };
    return ns;
}

namespace detail {
/// Pipeline-shaped scenario shared by `pipeline` and `fr-structure`.
inline NamedScenario friend_pipeline(const std::string &name, std::vector<Parameter> params,
                                     double theta_prep, const EnvironmentModel &model) {
    const auto setup = build_friend_setup(FriendTemplate::prepared_at(theta_prep), model);
    NamedScenario ns;
    ns.name = name;
    ns.parameters = std::move(params);
    ns.registry = setup.registry;
    std::vector<std::vector<cplx>> factors(ns.registry.size(), std::vector<cplx>{1.0, 0.0});
    factors[0] = prepared_qubit(theta_prep);
    ns.initial_spec = ProductState{std::move(factors)};
    ns.initial = setup.initial;
    ns.add_variable(setup.system_z);
    ns.add_variable(setup.pointer_z);
    ns.add_variable(setup.record);
    ns.add_variable(setup.bell);
    ns.sequences.push_back({"probe", setup.blind_probe().interactions()});
    ns.sequences.push_back({"read", setup.pointer_read().interactions()});
    return ns;
}
} // namespace detail

inline NamedScenario measurement_pipeline(std::size_t n_env, double phi,
                                          double phi_jitter = 0.0,
                                          double theta_prep = std::numbers::pi / 2.0,
                                          std::uint64_t seed = 0) {
    const auto model = phi_jitter == 0.0
                           ? EnvironmentModel::uniform(n_env, phi)
                           : EnvironmentModel::random(n_env, phi - std::abs(phi_jitter),
                                                      phi + std::abs(phi_jitter), seed);
    auto ns = detail::friend_pipeline("pipeline",
                                      {{"n_env", static_cast<double>(n_env)},
                                       {"phi", phi},
                                       {"phi_jitter", phi_jitter},
                                       {"theta_prep", theta_prep}},
                                      theta_prep, model);
    const std::size_t end = 1 + n_env;
    const std::string likely = detail::likelier_value(theta_prep);
    ns.report_plan = {
        {"stage2_epsilon", EpsilonSpec{"probe", {"record", end}}},
        {"probe_audit", AuditSpec{"probe", {end, "phi+"}, 0, StabilityProbe{"record", end}}},
        {"stage3_agreement", AgreementSpec{"read", 0, end}},
        {"stage3_conditional", ConditionalSpec{"read", {0, likely}, {{end, likely}}}},
    };
    return ns;
}

/// Four setting sequences x{0,1}y{0,1}. Setting 0 reads the friend's
/// pointer; setting 1 undoes the friend's premeasurement and measures the
/// spin directly. Friends measure along the setting-0 axes.
inline NamedScenario ewfs_chsh(double a0, double a1, double b0, double b1) {
    NamedScenario ns;
    ns.name = "ewfs-chsh";
    ns.parameters = {{"a0", a0}, {"a1", a1}, {"b0", b0}, {"b1", b1}};
    ns.registry.add("S1", 2, Role::System)
        .add("S2", 2, Role::System)
        .add("F1", 2, Role::Friend)
        .add("F2", 2, Role::Friend)
        .add("W1", 2, Role::Wigner)
        .add("W2", 2, Role::Wigner);
    ns.set_initial(PresetState{"singlet"});
    const Variable fa = ns.add_variable(spin_variable("A0", "S1", a0, ns.registry));
    const Variable fb = ns.add_variable(spin_variable("B0", "S2", b0, ns.registry));
    const Variable da = ns.add_variable(spin_variable("A1", "S1", a1, ns.registry));
    const Variable db = ns.add_variable(spin_variable("B1", "S2", b1, ns.registry));
    const Variable pa = ns.add_variable(computational_variable("Z_F1", {"F1"}, ns.registry));
    const Variable pb = ns.add_variable(computational_variable("Z_F2", {"F2"}, ns.registry));

    const auto friend1 = premeasurement_unitary(fa, "F1", ns.registry);
    const auto friend2 = premeasurement_unitary(fb, "F2", ns.registry);
    auto side = [&](int setting, const Interaction &friend_it, const Variable &pointer,
                    const Variable &direct, const std::string &w) {
        if (setting == 0) {
            return std::vector<Interaction>{premeasurement_unitary(pointer, w, ns.registry)};
        }
        return std::vector<Interaction>{inverse(friend_it),
                                        premeasurement_unitary(direct, w, ns.registry)};
    };
    ChshSpec chsh;
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            std::vector<Interaction> seq{friend1, friend2};
            const auto alice = side(x, friend1, pa, da, "W1");
            seq.insert(seq.end(), alice.begin(), alice.end());
            const std::size_t a_step = seq.size() - 1;
            const auto bob = side(y, friend2, pb, db, "W2");
            seq.insert(seq.end(), bob.begin(), bob.end());
            const std::size_t b_step = seq.size() - 1;
            const std::string name = "x" + std::to_string(x) + "y" + std::to_string(y);
            ns.sequences.push_back({name, std::move(seq)});
            chsh.correlators[static_cast<std::size_t>(2 * x + y)] =
                CorrelatorSpec{name, a_step, b_step, {0, 1}};
        }
    }
    ns.report_plan = {{"chsh", chsh}};
    return ns;
}

inline NamedScenario frauchiger_renner_structure(double theta_prep = std::numbers::pi / 2.0,
                                                 std::size_t n_env = 0,
                                                 double phi = std::numbers::pi / 4.0) {
    auto ns = detail::friend_pipeline("fr-structure",
                                      {{"theta_prep", theta_prep},
                                       {"n_env", static_cast<double>(n_env)},
                                       {"phi", phi}},
                                      theta_prep, EnvironmentModel::uniform(n_env, phi));
    const std::size_t end = 1 + n_env;
    const std::string likely = detail::likelier_value(theta_prep);
    ns.report_plan = {
        {"friend_fact", ProbabilitySpec{"probe", {{0, likely}}}},
        {"friend_certainty", ConditionalSpec{"read", {end, likely}, {{0, likely}}}},
        {"naive_vs_unitary", AuditSpec{"probe", {end, "phi+"}, 0, StabilityProbe{"record", end}}},
    };
    return ns;
}

/// Builds a catalog scenario from resolved parameters.
inline NamedScenario build_scenario(const std::string &name,
                                    const std::map<std::string, double> &overrides,
                                    std::uint64_t seed = 0) {
    const auto ps = resolve_parameters(name, overrides);
    using detail::param;
    if (name == "spin") {
        return spin_measurement(param(ps, "theta"));
    }
    if (name == "wigners-friend") {
        return wigners_friend(param(ps, "theta_prep"));
    }
    if (name == "pipeline") {
        return measurement_pipeline(static_cast<std::size_t>(param(ps, "n_env")),
                                    param(ps, "phi"), param(ps, "phi_jitter"),
                                    param(ps, "theta_prep"), seed);
    }
    if (name == "ewfs-chsh") {
        return ewfs_chsh(param(ps, "a0"), param(ps, "a1"), param(ps, "b0"), param(ps, "b1"));
    }
    if (name == "fr-structure") {
        return frauchiger_renner_structure(param(ps, "theta_prep"),
                                           static_cast<std::size_t>(param(ps, "n_env")),
                                           param(ps, "phi"));
    }
    throw UsageError("unknown scenario '" + name + "'");
}

} // namespace relfacts
