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
 * Branch decomposition of a state along a pointer variable, the overlap
 * measure ε between environment branches, the reduced pointer state and the
 * interference bounds that follow from them.
 */
#pragma once

#include "relfacts/composite.hpp"
#include "relfacts/error.hpp"
#include "relfacts/linalg.hpp"
#include "relfacts/registry.hpp"
#include "relfacts/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relfacts {

struct Branch {
    std::string value;
    cplx amplitude;                  ///< c_i
    double weight = 0.0;             ///< |c_i|^2
    bool null = false;               ///< |c_i| at or below the null threshold
    std::vector<cplx> pointer_state; ///< |Fa_i> on the pointer targets
    std::vector<cplx> env_state;     ///< ψ_i on the complement; empty when null
};

/// |ψ> = Σ_i c_i |Fa_i> ⊗ |ψ_i>, with ψ_i normalized states of every system
/// outside the pointer targets (in registry order). Each ψ_i has its first
/// non-negligible component real and positive; the phase lives in c_i.
struct BranchDecomposition {
    std::string pointer;
    std::vector<std::string> pointer_targets;
    std::vector<std::string> rest;
    std::vector<Branch> branches;

    [[nodiscard]] std::size_t non_null() const {
        return static_cast<std::size_t>(std::count_if(
            branches.begin(), branches.end(), [](const Branch &b) { return !b.null; }));
    }
};

namespace detail {
/// Unit vector spanning a rank-1 projector.
inline std::vector<cplx> rank_one_vector(const Operator &p, const std::string &what,
                                         const Tolerances &tol) {
    if (std::abs(p.trace() - 1.0) > tol.validation) {
        throw ValidationError(what + ": pointer outcomes must be rank-1 projectors");
    }
    std::size_t k = 0;
    for (std::size_t i = 1; i < p.rows(); ++i) {
        if (p(i, i).real() > p(k, k).real()) {
            k = i;
        }
    }
    std::vector<cplx> v(p.rows());
    for (std::size_t i = 0; i < p.rows(); ++i) {
        v[i] = p(i, k);
    }
    const double n = norm(v);
    for (auto &x : v) {
        x /= n;
    }
    return v;
}
} // namespace detail

inline BranchDecomposition branch_decompose(const StateVector &state, const Variable &pointer,
                                            const SystemRegistry &registry,
                                            const Tolerances &tol = {}) {
    pointer.check_against(registry);
    const SubsystemIndex idx(registry, pointer.targets());
    if (state.size() != idx.total_dim()) {
        throw ValidationError("branch_decompose: state does not match the registry");
    }
    BranchDecomposition dec;
    dec.pointer = pointer.label();
    dec.pointer_targets = pointer.targets();
    dec.rest = registry.complement(pointer.targets());
    const auto off = idx.offsets();
    const auto bases = idx.bases();
    for (const auto &o : pointer.outcomes()) {
        Branch b;
        b.value = o.value;
        b.pointer_state = detail::rank_one_vector(o.projector, "branch_decompose", tol);
        std::vector<cplx> phi(bases.size());
        for (std::size_t r = 0; r < bases.size(); ++r) {
            cplx acc = 0.0;
            for (std::size_t l = 0; l < off.size(); ++l) {
                acc += std::conj(b.pointer_state[l]) * state[bases[r] + off[l]];
            }
            phi[r] = acc;
        }
        const double n = norm(phi);
        if (n <= tol.null_branch) {
            b.null = true;
            b.amplitude = 0.0;
            b.weight = n * n;
            dec.branches.push_back(std::move(b));
            continue;
        }
        for (auto &x : phi) {
            x /= n;
        }
        cplx phase = 1.0;
        for (const auto &x : phi) {
            if (std::abs(x) > tol.null_branch) {
                phase = x / std::abs(x);
                break;
            }
        }
        for (auto &x : phi) {
            x /= phase;
        }
        b.amplitude = n * phase;
        b.weight = n * n;
        b.env_state = std::move(phi);
        dec.branches.push_back(std::move(b));
    }
    return dec;
}

/// Σ_i c_i |Fa_i> ⊗ |ψ_i>, placed back in registry order.
inline StateVector reconstruct(const BranchDecomposition &dec, const SystemRegistry &registry) {
    const SubsystemIndex idx(registry, dec.pointer_targets);
    std::vector<cplx> psi(idx.total_dim());
    for (const auto &b : dec.branches) {
        if (b.null) {
            continue;
        }
        for (std::size_t r = 0; r < idx.rest_dim(); ++r) {
            for (std::size_t l = 0; l < idx.local_dim(); ++l) {
                psi[idx.index(r, l)] += b.amplitude * b.pointer_state[l] * b.env_state[r];
            }
        }
    }
    return StateVector(std::move(psi));
}

struct EpsilonReport {
    double epsilon = 0.0;
    std::optional<std::pair<std::size_t, std::size_t>> argmax;
    /// |<ψ_i|ψ_j>|^2 for non-null pairs; NaN where either branch is null.
    std::vector<std::vector<double>> overlaps;
};

inline EpsilonReport epsilon_of(const BranchDecomposition &dec) {
    const std::size_t n = dec.branches.size();
    EpsilonReport r;
    r.overlaps.assign(n, std::vector<double>(n, std::nan("")));
    for (std::size_t i = 0; i < n; ++i) {
        const auto &bi = dec.branches[i];
        if (bi.null) {
            continue;
        }
        r.overlaps[i][i] = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            const auto &bj = dec.branches[j];
            if (bj.null) {
                continue;
            }
            const double ov = std::min(1.0, std::norm(inner(bi.env_state, bj.env_state)));
            r.overlaps[i][j] = ov;
            r.overlaps[j][i] = ov;
            if (!r.argmax || ov > r.epsilon) {
                r.epsilon = ov;
                r.argmax = std::make_pair(j, i);
            }
        }
    }
    return r;
}

/// ε = max over distinct non-null branches of |<ψ_i|ψ_j>|^2; 0 with fewer
/// than two branches.
inline EpsilonReport epsilon(const StateVector &state, const Variable &pointer,
                             const SystemRegistry &registry, const Tolerances &tol = {}) {
    return epsilon_of(branch_decompose(state, pointer, registry, tol));
}

/// Reduced state on the pointer targets (ordered as the pointer's targets).
inline DensityMatrix reduced_pointer_state(const StateVector &state, const Variable &pointer,
                                           const SystemRegistry &registry) {
    pointer.check_against(registry);
    return reduced_density(state.amplitudes(), pointer.targets(), registry);
}

/// <Fa_i|ρ|Fa_j> for rank-1 pointer outcomes.
inline Operator in_pointer_basis(const DensityMatrix &rho, const Variable &pointer,
                                 const Tolerances &tol = {}) {
    const std::size_t n = pointer.size();
    std::vector<std::vector<cplx>> v;
    for (const auto &o : pointer.outcomes()) {
        v.push_back(detail::rank_one_vector(o.projector, "in_pointer_basis", tol));
    }
    Operator out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = inner(v[i], rho.matrix().apply(v[j]));
        }
    }
    return out;
}

/// √ε · Σ_{i≠j} |c_i||c_j| over ordered pairs: bounds the interference term
/// of any audit whose measurement acts only on the pointer targets.
inline double stability_bound(const BranchDecomposition &dec) {
    const double eps = epsilon_of(dec).epsilon;
    double s = 0.0;
    for (std::size_t i = 0; i < dec.branches.size(); ++i) {
        for (std::size_t j = 0; j < dec.branches.size(); ++j) {
            if (i != j) {
                s += std::abs(dec.branches[i].amplitude) * std::abs(dec.branches[j].amplitude);
            }
        }
    }
    return std::sqrt(eps) * s;
}

struct EtaReport {
    double eta = 0.0; ///< 1 - max_i |c_i|
    std::size_t dominant = 0;
    std::string dominant_value;
    double trace_distance = 0.0; ///< reduced pointer state vs |Fa_k><Fa_k|
    double bound = 0.0;          ///< √(2η)
};

inline EtaReport eta_report(const StateVector &state, const Variable &pointer,
                            const SystemRegistry &registry, const Tolerances &tol = {}) {
    const auto dec = branch_decompose(state, pointer, registry, tol);
    EtaReport r;
    double best = -1.0;
    for (std::size_t i = 0; i < dec.branches.size(); ++i) {
        const double a = std::abs(dec.branches[i].amplitude);
        if (a > best) {
            best = a;
            r.dominant = i;
        }
    }
    r.dominant_value = dec.branches[r.dominant].value;
    // 1 - |c_k| cancels when one branch dominates; use the other weights
    // instead: 1 - |c_k|/√s = (Σ_{i≠k} w_i) / (√s (√s + |c_k|)).
    double rest = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < dec.branches.size(); ++i) {
        total += dec.branches[i].weight;
        if (i != r.dominant) {
            rest += dec.branches[i].weight;
        }
    }
    const double root = std::sqrt(total);
    r.eta = total > 0.0 ? std::clamp(rest / (root * (root + best)), 0.0, 1.0) : 0.0;
    const auto rho = reduced_pointer_state(state, pointer, registry);
    const auto dominant = DensityMatrix::pure(dec.branches[r.dominant].pointer_state);
    r.trace_distance = trace_distance(rho, dominant);
    r.bound = std::sqrt(2.0 * r.eta);
    return r;
}

} // namespace relfacts
