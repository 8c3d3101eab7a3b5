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
 * Operations on labeled tensor factors: embedding of local operators,
 * partial traces, the Born rule and Lüders updates.
 *
 * All subsystem index arithmetic goes through SubsystemIndex. Nothing else
 * in the library computes composite offsets by hand.
 */
#pragma once

#include "relfacts/error.hpp"
#include "relfacts/linalg.hpp"
#include "relfacts/registry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace relfacts {

/// Splits composite indices into (target multi-index, complement multi-index).
///
/// For an ordered target list t_1..t_m, the local index uses t_1 as its most
/// significant digit, whatever the registry order. Every composite index is
/// `base(r) + offset(l)` for exactly one complement index r and local index l.
class SubsystemIndex {
  public:
    SubsystemIndex(const SystemRegistry &registry,
                   std::span<const std::string> targets) {
        const auto pos = registry.positions(targets);
        const std::size_t n = registry.size();
        std::vector<std::size_t> stride(n, 1);
        for (std::size_t k = n; k-- > 1;) {
            stride[k - 1] = stride[k] * registry.at(k).dim;
        }
        total_ = n == 0 ? 1 : stride[0] * registry.at(0).dim;

        offsets_ = {0};
        for (std::size_t p : pos) {
            offsets_ = expand(offsets_, registry.at(p).dim, stride[p]);
        }
        bases_ = {0};
        for (std::size_t k = 0; k < n; ++k) {
            if (std::find(pos.begin(), pos.end(), k) == pos.end()) {
                bases_ = expand(bases_, registry.at(k).dim, stride[k]);
            }
        }
    }

    [[nodiscard]] std::size_t total_dim() const noexcept { return total_; }
    [[nodiscard]] std::size_t local_dim() const noexcept { return offsets_.size(); }
    [[nodiscard]] std::size_t rest_dim() const noexcept { return bases_.size(); }
    [[nodiscard]] std::span<const std::size_t> offsets() const noexcept {
        return offsets_;
    }
    [[nodiscard]] std::span<const std::size_t> bases() const noexcept {
        return bases_;
    }
    [[nodiscard]] std::size_t index(std::size_t rest, std::size_t local) const {
        return bases_[rest] + offsets_[local];
    }

  private:
    static std::vector<std::size_t> expand(const std::vector<std::size_t> &prefix,
                                           std::size_t dim, std::size_t stride) {
        std::vector<std::size_t> out;
        out.reserve(prefix.size() * dim);
        for (std::size_t p : prefix) {
            for (std::size_t d = 0; d < dim; ++d) {
                out.push_back(p + d * stride);
            }
        }
        return out;
    }

    std::size_t total_ = 1;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> bases_;
};

namespace detail {
inline void require_local_shape(const Operator &op, const SubsystemIndex &idx,
                                const char *what) {
    if (!op.square() || op.rows() != idx.local_dim()) {
        throw ValidationError(std::string(what) + ": operator is " +
                              std::to_string(op.rows()) + "x" +
                              std::to_string(op.cols()) +
                              " but targets span dimension " +
                              std::to_string(idx.local_dim()));
    }
}
} // namespace detail

/// Full-space operator acting as `op` on `targets` and identity elsewhere.
inline Operator embed(const Operator &op, std::span<const std::string> targets,
                      const SystemRegistry &registry) {
    const SubsystemIndex idx(registry, targets);
    detail::require_local_shape(op, idx, "embed");
    check_operator_dim(idx.total_dim(), "embed");
    Operator full(idx.total_dim(), idx.total_dim());
    const std::size_t d = idx.local_dim();
    for (std::size_t r = 0; r < idx.rest_dim(); ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                full(idx.index(r, i), idx.index(r, j)) = op(i, j);
            }
        }
    }
    return full;
}

inline Operator embed(const Operator &op, std::initializer_list<std::string> targets,
                      const SystemRegistry &registry) {
    const std::vector<std::string> t(targets);
    return embed(op, t, registry);
}

/// In-place application of a local operator to a composite vector, without
/// materializing the full-space matrix.
inline void apply_local(std::span<cplx> psi, const Operator &op,
                        const SubsystemIndex &idx) {
    detail::require_local_shape(op, idx, "apply_local");
    if (psi.size() != idx.total_dim()) {
        throw ValidationError("apply_local: state dimension mismatch");
    }
    const std::size_t d = idx.local_dim();
    const auto off = idx.offsets();
    // Sparse rows with real arithmetic: premeasurement and coupling
    // unitaries are mostly zeros, and std::complex products go through the
    // slow NaN-recovering path.
    struct Entry {
        std::size_t col;
        double re, im;
    };
    std::vector<std::vector<Entry>> rows(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const cplx v = op(i, j);
            if (v != cplx{}) {
                rows[i].push_back({j, v.real(), v.imag()});
            }
        }
    }
    std::vector<cplx> in(d);
    for (std::size_t base : idx.bases()) {
        for (std::size_t l = 0; l < d; ++l) {
            in[l] = psi[base + off[l]];
        }
        for (std::size_t i = 0; i < d; ++i) {
            double re = 0.0;
            double im = 0.0;
            for (const auto &e : rows[i]) {
                const double xr = in[e.col].real();
                const double xi = in[e.col].imag();
                re += e.re * xr - e.im * xi;
                im += e.re * xi + e.im * xr;
            }
            psi[base + off[i]] = {re, im};
        }
    }
}

inline void apply_local(std::span<cplx> psi, const Operator &op,
                        std::span<const std::string> targets,
                        const SystemRegistry &registry) {
    apply_local(psi, op, SubsystemIndex(registry, targets));
}

/// Reduced state of a pure composite vector on `targets` (in the given
/// order); computed directly from amplitudes.
inline DensityMatrix reduced_density(std::span<const cplx> psi,
                                     std::span<const std::string> targets,
                                     const SystemRegistry &registry) {
    if (targets.empty()) {
        throw ValidationError("reduced state needs at least one kept system");
    }
    const SubsystemIndex idx(registry, targets);
    if (psi.size() != idx.total_dim()) {
        throw ValidationError("reduced state: dimension mismatch");
    }
    const std::size_t d = idx.local_dim();
    check_operator_dim(d, "reduced state");
    Operator rho(d, d);
    const auto off = idx.offsets();
    for (std::size_t base : idx.bases()) {
        for (std::size_t i = 0; i < d; ++i) {
            const cplx a = psi[base + off[i]];
            if (a == cplx{}) {
                continue;
            }
            for (std::size_t j = 0; j < d; ++j) {
                rho(i, j) += a * std::conj(psi[base + off[j]]);
            }
        }
    }
    return DensityMatrix(std::move(rho));
}

/// Trace over every system not in `keep`. The result is ordered as `keep`.
inline DensityMatrix partial_trace(const DensityMatrix &rho,
                                   std::span<const std::string> keep,
                                   const SystemRegistry &registry) {
    if (keep.empty()) {
        throw ValidationError("partial_trace: keep set must be nonempty");
    }
    const SubsystemIndex idx(registry, keep);
    if (rho.dim() != idx.total_dim()) {
        throw ValidationError("partial_trace: density matrix does not match registry");
    }
    const std::size_t d = idx.local_dim();
    Operator out(d, d);
    for (std::size_t r = 0; r < idx.rest_dim(); ++r) {
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                out(i, j) += rho(idx.index(r, i), idx.index(r, j));
            }
        }
    }
    return DensityMatrix(std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix &rho,
                                   std::initializer_list<std::string> keep,
                                   const SystemRegistry &registry) {
    const std::vector<std::string> k(keep);
    return partial_trace(rho, k, registry);
}

/// <ψ|P|ψ> for a local projector, clamped to [0, 1].
inline double born_probability(std::span<const cplx> psi, const Operator &projector,
                               const SubsystemIndex &idx) {
    std::vector<cplx> tmp(psi.begin(), psi.end());
    apply_local(tmp, projector, idx);
    const double p = inner(psi, tmp).real();
    return std::clamp(p, 0.0, 1.0);
}

/// Born rule with a full-space projector.
inline double born_probability(const StateVector &state, const Operator &projector,
                               const Tolerances &tol = {}) {
    if (projector.rows() != state.size() || !projector.is_projector(tol.validation)) {
        throw ValidationError("born_probability: not a projector on the full space");
    }
    const auto pv = projector.apply(state.amplitudes());
    const cplx amp = inner(state.amplitudes(), pv);
    if (std::abs(amp.imag()) > tol.validation) {
        throw NumericError("born_probability: expectation value is not real");
    }
    return std::clamp(amp.real(), 0.0, 1.0);
}

struct LudersResult {
    double probability = 0.0;
    StateVector state;
};

/// Projects and renormalizes. Throws ZeroBranchError when p <= threshold.
inline LudersResult luders_update(const StateVector &state, const Operator &projector,
                                  const Tolerances &tol = {}) {
    if (projector.rows() != state.size() || !projector.is_projector(tol.validation)) {
        throw ValidationError("luders_update: not a projector on the full space");
    }
    auto projected = projector.apply(state.amplitudes());
    const double p = norm2(projected);
    if (p <= tol.zero_branch) {
        throw ZeroBranchError("luders_update: branch probability " +
                              std::to_string(p) + " at or below threshold");
    }
    return {std::min(p, 1.0), StateVector::normalized(std::move(projected))};
}

/// Local variant: projects `psi` in place (unnormalized) and returns the
/// squared norm of the projected vector relative to the input.
inline double project_local(std::vector<cplx> &psi, const Operator &projector,
                            const SubsystemIndex &idx) {
    const double before = norm2(psi);
    apply_local(psi, projector, idx);
    const double after = norm2(psi);
    return before > 0.0 ? after / before : 0.0;
}

} // namespace relfacts
