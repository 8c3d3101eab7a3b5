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

// Brute-force reference computations for tests. Everything here works on
// full-space matrices built digit by digit, and deliberately avoids the
// library's SubsystemIndex, embed and apply_local.
#pragma once

#include "relfacts/relfacts.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = std::vector<std::vector<cplx>>;
using Vec = std::vector<cplx>;

inline std::vector<std::size_t> dims_of(const relfacts::SystemRegistry &reg) {
    std::vector<std::size_t> d;
    for (const auto &s : reg.systems()) {
        d.push_back(s.dim);
    }
    return d;
}

inline std::size_t product(const std::vector<std::size_t> &d) {
    std::size_t p = 1;
    for (auto x : d) {
        p *= x;
    }
    return p;
}

/// Mixed-radix digits of a composite index, first system most significant.
inline std::vector<std::size_t> digits(std::size_t index, const std::vector<std::size_t> &dims) {
    std::vector<std::size_t> out(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    return out;
}

/// Local index of the listed positions (first listed most significant).
inline std::size_t local(const std::vector<std::size_t> &dg, const std::vector<std::size_t> &pos,
                         const std::vector<std::size_t> &dims) {
    std::size_t x = 0;
    for (auto p : pos) {
        x = x * dims[p] + dg[p];
    }
    return x;
}

inline bool same_outside(const std::vector<std::size_t> &a, const std::vector<std::size_t> &b,
                         const std::vector<std::size_t> &pos) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        bool inside = false;
        for (auto p : pos) {
            inside = inside || p == k;
        }
        if (!inside && a[k] != b[k]) {
            return false;
        }
    }
    return true;
}

inline Mat to_mat(const relfacts::Operator &op) {
    Mat m(op.rows(), Vec(op.cols()));
    for (std::size_t i = 0; i < op.rows(); ++i) {
        for (std::size_t j = 0; j < op.cols(); ++j) {
            m[i][j] = op(i, j);
        }
    }
    return m;
}

/// Full-space matrix of `op` acting on `pos`, identity elsewhere.
inline Mat embed(const relfacts::Operator &op, const std::vector<std::size_t> &pos,
                 const std::vector<std::size_t> &dims) {
    const std::size_t n = product(dims);
    Mat m(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto di = digits(i, dims);
        for (std::size_t j = 0; j < n; ++j) {
            const auto dj = digits(j, dims);
            if (same_outside(di, dj, pos)) {
                m[i][j] = op(local(di, pos, dims), local(dj, pos, dims));
            }
        }
    }
    return m;
}

inline Vec mul(const Mat &m, const Vec &v) {
    Vec out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            out[i] += m[i][j] * v[j];
        }
    }
    return out;
}

inline double norm2(const Vec &v) {
    double s = 0.0;
    for (const auto &x : v) {
        s += std::norm(x);
    }
    return s;
}

/// Tr over everything outside `keep`, by summing matching index pairs.
inline Mat partial_trace(const Mat &rho, const std::vector<std::size_t> &keep,
                         const std::vector<std::size_t> &dims) {
    std::size_t dk = 1;
    for (auto p : keep) {
        dk *= dims[p];
    }
    Mat out(dk, Vec(dk));
    const std::size_t n = product(dims);
    for (std::size_t i = 0; i < n; ++i) {
        const auto di = digits(i, dims);
        for (std::size_t j = 0; j < n; ++j) {
            const auto dj = digits(j, dims);
            if (same_outside(di, dj, keep)) {
                out[local(di, keep, dims)][local(dj, keep, dims)] += rho[i][j];
            }
        }
    }
    return out;
}

/// Probability of a fact assignment by explicit full-space products
/// P_k U_k ... P_1 U_1 |ψ>.
inline double chain(const relfacts::Scenario &sc, const std::vector<relfacts::RelativeFact> &facts) {
    const auto &reg = sc.registry();
    const auto dims = dims_of(reg);
    Vec psi = sc.initial_state().vector();
    std::size_t last = 0;
    for (const auto &f : facts) {
        last = std::max(last, f.step + 1);
    }
    for (std::size_t k = 0; k < last; ++k) {
        const auto &it = sc.at(k);
        psi = mul(embed(it.unitary, reg.positions(it.targets), dims), psi);
        for (const auto &f : facts) {
            if (f.step == k) {
                const auto &var = *it.fact_variable;
                psi = mul(embed(var.projector(var.index_of(f.value)),
                                reg.positions(var.targets()), dims),
                          psi);
            }
        }
    }
    return norm2(psi);
}

/// Every joint assignment of the facts at `steps`, with its probability.
inline std::vector<std::pair<std::vector<relfacts::RelativeFact>, double>>
enumerate_branches(const relfacts::Scenario &sc, const std::vector<std::size_t> &steps) {
    std::vector<std::vector<relfacts::RelativeFact>> all{{}};
    for (auto s : steps) {
        std::vector<std::vector<relfacts::RelativeFact>> next;
        const auto &it = sc.at(s);
        for (const auto &o : it.fact_variable->outcomes()) {
            for (auto b : all) {
                b.push_back({it.fact_variable->label(), o.value, *it.fact_context, s});
                next.push_back(std::move(b));
            }
        }
        all = std::move(next);
    }
    std::vector<std::pair<std::vector<relfacts::RelativeFact>, double>> out;
    for (auto &b : all) {
        const double p = chain(sc, b);
        out.emplace_back(std::move(b), p);
    }
    return out;
}

/// <A B> for a spin singlet measured along angles a and b in the x-z plane:
/// -cos(a - b).
inline double singlet_correlator(double a, double b) { return -std::cos(a - b); }

} // namespace oracle
