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
 * Environment models for a friend's pointer and sweeps over environment
 * size. Each environment qubit is one controlled coupling, so the number of
 * couplings stands in for elapsed decoherence time.
 */
#pragma once

#include "relfacts/composite.hpp"
#include "relfacts/error.hpp"
#include "relfacts/facts.hpp"
#include "relfacts/format.hpp"
#include "relfacts/linalg.hpp"
#include "relfacts/random.hpp"
#include "relfacts/registry.hpp"
#include "relfacts/stability.hpp"

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace relfacts {

/// Coupling angles for n environment qubits: a fixed angle, or angles drawn
/// uniformly from [angle_min, angle_max] by a seeded stream. The k-th angle
/// does not depend on n, so growing n only appends couplings.
struct EnvironmentModel {
    std::size_t n_qubits = 0;
    double angle_min = std::numbers::pi / 4.0;
    double angle_max = std::numbers::pi / 4.0;
    std::uint64_t seed = 0;

    static EnvironmentModel uniform(std::size_t n, double angle) {
        return {n, angle, angle, 0};
    }
    static EnvironmentModel random(std::size_t n, double lo, double hi, std::uint64_t seed) {
        if (hi < lo) {
            throw ValidationError("environment model: angle range is reversed");
        }
        return {n, lo, hi, seed};
    }

    [[nodiscard]] bool is_uniform() const noexcept { return angle_min == angle_max; }

    [[nodiscard]] EnvironmentModel with_size(std::size_t n) const {
        EnvironmentModel m = *this;
        m.n_qubits = n;
        return m;
    }

    [[nodiscard]] std::vector<double> angles() const {
        std::vector<double> out(n_qubits, angle_min);
        if (!is_uniform()) {
            Rng rng(seed);
            for (auto &a : out) {
                a = rng.uniform(angle_min, angle_max);
            }
        }
        return out;
    }
};

/// One controlled coupling of the pointer to each listed environment qubit.
inline std::vector<Interaction> build_environment(const EnvironmentModel &model,
                                                  const Variable &pointer,
                                                  std::span<const std::string> env_labels,
                                                  const SystemRegistry &registry) {
    if (env_labels.size() < model.n_qubits) {
        throw ValidationError("build_environment: registry provides " +
                              std::to_string(env_labels.size()) +
                              " environment qubits, model needs " +
                              std::to_string(model.n_qubits));
    }
    const auto angles = model.angles();
    std::vector<Interaction> out;
    out.reserve(model.n_qubits);
    for (std::size_t k = 0; k < model.n_qubits; ++k) {
        out.push_back(controlled_coupling(pointer, env_labels[k], angles[k], registry));
    }
    return out;
}

/// The system qubit's preparation; the friend and the environment start in |0>.
struct FriendTemplate {
    std::vector<cplx> system_state{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};

    static FriendTemplate prepared_at(double theta) {
        return {{std::cos(theta / 2.0), std::sin(theta / 2.0)}};
    }
};

inline std::vector<cplx> phi_plus() {
    const double h = 1.0 / std::numbers::sqrt2;
    return {h, 0.0, 0.0, h};
}

/// {phi+, other}: projector onto (|00> + |11>)/√2 and its complement.
inline Variable bell_probe_variable(const std::string &label, const std::string &a,
                                    const std::string &b, const SystemRegistry &registry) {
    return pvm_from_basis(label, {a, b}, {{"phi+", phi_plus()}}, registry,
                          std::string("other"));
}

/// Systems S, F, E1..En and optionally W, with the interactions a friend
/// scenario is assembled from.
struct FriendSetup {
    SystemRegistry registry;
    Variable system_z; ///< Z of S, measured by the friend
    Variable pointer_z; ///< Z of F, the pointer variable
    Variable record;   ///< joint computational basis of (S, F)
    Variable bell;     ///< Bell probe on (S, F)
    std::vector<std::string> env_labels;
    std::shared_ptr<const StateVector> initial;
    Interaction premeasure;
    std::vector<Interaction> couplings;
    bool has_wigner = false;

    /// Interactions of stage 1 and stage 2.
    [[nodiscard]] std::vector<Interaction> friend_stages() const {
        std::vector<Interaction> out{premeasure};
        out.insert(out.end(), couplings.begin(), couplings.end());
        return out;
    }

    /// Index of the last stage-2 interaction plus one.
    [[nodiscard]] std::size_t stages_end() const { return 1 + couplings.size(); }

    [[nodiscard]] Scenario with_final(std::vector<Interaction> tail) const {
        auto seq = friend_stages();
        seq.insert(seq.end(), tail.begin(), tail.end());
        return Scenario(registry, initial, std::move(seq));
    }

    /// W premeasures the Bell probe on S-F, blind to the environment.
    [[nodiscard]] Scenario blind_probe() const {
        require_wigner();
        return with_final({premeasurement_unitary(bell, "W", registry)});
    }

    /// W first undoes every coupling, then premeasures the Bell probe.
    [[nodiscard]] Scenario undo_probe() const {
        require_wigner();
        std::vector<Interaction> tail;
        for (auto it = couplings.rbegin(); it != couplings.rend(); ++it) {
            tail.push_back(inverse(*it));
        }
        tail.push_back(premeasurement_unitary(bell, "W", registry));
        return with_final(std::move(tail));
    }

    /// W reads the friend's pointer.
    [[nodiscard]] Scenario pointer_read() const {
        require_wigner();
        return with_final({premeasurement_unitary(pointer_z, "W", registry)});
    }

  private:
    void require_wigner() const {
        if (!has_wigner) {
            throw ValidationError("friend setup was built without W");
        }
    }
};

inline FriendSetup build_friend_setup(const FriendTemplate &tmpl,
                                      const EnvironmentModel &model,
                                      bool with_wigner = true) {
    if (tmpl.system_state.size() != 2) {
        throw ValidationError("friend template: system must be a qubit");
    }
    FriendSetup s;
    s.registry.add("S", 2, Role::System).add("F", 2, Role::Friend);
    for (std::size_t k = 1; k <= model.n_qubits; ++k) {
        s.env_labels.push_back("E" + std::to_string(k));
        s.registry.add(s.env_labels.back(), 2, Role::Environment);
    }
    if (with_wigner) {
        s.registry.add("W", 2, Role::Wigner);
        s.has_wigner = true;
    }
    if (s.registry.total_dim() > state_dim_cap()) {
        throw CapacityError("environment size n=" + std::to_string(model.n_qubits) +
                            " needs composite dimension " +
                            std::to_string(s.registry.total_dim()) + " above cap " +
                            std::to_string(state_dim_cap()));
    }
    s.system_z = computational_variable("Z_S", {"S"}, s.registry);
    s.pointer_z = computational_variable("Z_F", {"F"}, s.registry);
    s.record = computational_variable("record", {"S", "F"}, s.registry);
    s.bell = bell_probe_variable("bell", "S", "F", s.registry);

    const auto sys = StateVector::normalized(tmpl.system_state);
    std::vector<cplx> psi(s.registry.total_dim());
    // S is the most significant factor and everything else starts in |0>.
    const std::size_t rest = s.registry.total_dim() / 2;
    psi[0] = sys[0];
    psi[rest] = sys[1];
    s.initial = std::make_shared<const StateVector>(std::move(psi));

    s.premeasure = premeasurement_unitary(s.system_z, "F", s.registry);
    s.couplings = build_environment(model, s.pointer_z, s.env_labels, s.registry);
    return s;
}

struct SweepRow {
    std::size_t n = 0;
    double epsilon = 0.0;
    double bound = 0.0;
    double deviation = 0.0; ///< blind Bell-probe audit against the friend's facts
};

/// ε, bound and blind-audit deviation at one environment size.
inline SweepRow sweep_row(const FriendTemplate &tmpl, const EnvironmentModel &model) {
    const auto setup = build_friend_setup(tmpl, model);
    const auto scenario = setup.blind_probe();
    const auto state = evolve(scenario, setup.stages_end());
    const auto dec = branch_decompose(state, setup.record, setup.registry);
    SweepRow row;
    row.n = model.n_qubits;
    row.epsilon = epsilon_of(dec).epsilon;
    row.bound = stability_bound(dec);
    const RelativeFact b{"bell", "phi+", "W", setup.stages_end()};
    row.deviation = total_probability_audit(scenario, b, {"F", 0}).deviation;
    return row;
}

/// Rows in the order of `n_values`.
inline std::vector<SweepRow> epsilon_sweep(const FriendTemplate &tmpl,
                                           std::span<const std::size_t> n_values,
                                           const EnvironmentModel &model) {
    std::vector<SweepRow> rows;
    rows.reserve(n_values.size());
    for (std::size_t n : n_values) {
        rows.push_back(sweep_row(tmpl, model.with_size(n)));
    }
    return rows;
}

/// ε after stages 1 and 2, without W.
inline double environment_epsilon(const FriendTemplate &tmpl, const EnvironmentModel &model) {
    const auto setup = build_friend_setup(tmpl, model, false);
    const Scenario sc(setup.registry, setup.initial, setup.friend_stages());
    return epsilon(evolve(sc), setup.record, setup.registry).epsilon;
}

/// Smallest environment size with ε < tau, found by doubling then bisection
/// over simulated ε values. Throws NumericError when ε does not decrease and
/// CapacityError when the threshold lies beyond the dimension cap.
inline std::size_t decoherence_threshold(const FriendTemplate &tmpl,
                                         const EnvironmentModel &model, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw ValidationError("decoherence_threshold: tau must lie in (0, 1)");
    }
    std::size_t n_max = 0;
    while (std::size_t{8} << n_max <= state_dim_cap()) {
        ++n_max;
    }
    auto eps = [&](std::size_t n) { return environment_epsilon(tmpl, model.with_size(n)); };

    std::size_t lo = 0;
    double eps_lo = eps(0);
    if (eps_lo < tau) {
        return 0;
    }
    std::size_t hi = std::min<std::size_t>(1, n_max);
    double eps_hi = eps(hi);
    while (eps_hi >= tau) {
        if (!(eps_hi < eps_lo)) {
            throw NumericError("decoherence_threshold: epsilon does not decrease (" +
                               format_number(eps_lo) + " at n=" + std::to_string(lo) +
                               ", " + format_number(eps_hi) + " at n=" +
                               std::to_string(hi) + "); no convergence");
        }
        if (hi == n_max) {
            throw CapacityError("decoherence_threshold: epsilon still " +
                                format_number(eps_hi) + " at n=" + std::to_string(hi) +
                                ", the largest size under the dimension cap");
        }
        lo = hi;
        eps_lo = eps_hi;
        hi = std::min(2 * hi, n_max);
        eps_hi = eps(hi);
    }
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (eps(mid) < tau) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

struct RelationalCheck {
    double deviation_blind = 0.0;   ///< W measures S-F only
    double deviation_probing = 0.0; ///< W undoes the couplings, then measures
    double epsilon = 0.0;
    double bound = 0.0;
};

/// The same final friend state audited by two differently coupled observers.
inline RelationalCheck relational_check(const FriendTemplate &tmpl,
                                        const EnvironmentModel &model) {
    const auto setup = build_friend_setup(tmpl, model);
    const auto blind = setup.blind_probe();
    const auto probing = setup.undo_probe();
    const auto dec = branch_decompose(evolve(blind, setup.stages_end()), setup.record,
                                      setup.registry);
    RelationalCheck r;
    r.epsilon = epsilon_of(dec).epsilon;
    r.bound = stability_bound(dec);
    r.deviation_blind =
        total_probability_audit(blind, {"bell", "phi+", "W", setup.stages_end()}, {"F", 0})
            .deviation;
    r.deviation_probing =
        total_probability_audit(probing, {"bell", "phi+", "W", probing.size() - 1}, {"F", 0})
            .deviation;
    return r;
}

inline void write_sweep_csv(std::ostream &os, std::span<const SweepRow> rows) {
    os << "n,epsilon,bound,deviation\n";
    for (const auto &r : rows) {
        os << r.n << ',' << format_number(r.epsilon) << ',' << format_number(r.bound)
           << ',' << format_number(r.deviation) << '\n';
    }
}

inline void write_sweep_json(std::ostream &os, std::span<const SweepRow> rows) {
    os << '[';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        os << (i ? "," : "") << "{\"n\":" << r.n
           << ",\"epsilon\":" << format_number(r.epsilon)
           << ",\"bound\":" << format_number(r.bound)
           << ",\"deviation\":" << format_number(r.deviation) << '}';
    }
    os << "]\n";
}

} // namespace relfacts
