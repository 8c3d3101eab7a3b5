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
 * Seeded random states, unitaries and projective measurements.
 *
 * Built on std::mt19937_64, whose output sequence is fixed by the standard.
 * Uniform and normal variates are derived here rather than with the
 * <random> distributions so that a seed produces the same numbers on every
 * standard library.
 */
#pragma once

#include "relfacts/linalg.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace relfacts {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::size_t integer(std::size_t lo, std::size_t hi) {
        return lo + static_cast<std::size_t>(uniform() * static_cast<double>(hi - lo + 1));
    }

    /// Standard normal via Box-Muller; no cached second variate.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) {
            u1 = uniform();
        }
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    cplx complex_normal() { return {normal(), normal()}; }

  private:
    std::mt19937_64 engine_;
};

/// Haar-distributed unit vector.
inline StateVector random_state(Rng &rng, std::size_t dim) {
    std::vector<cplx> v(dim);
    for (auto &x : v) {
        x = rng.complex_normal();
    }
    return StateVector::normalized(std::move(v));
}

/// Haar-distributed unitary: Gram-Schmidt on a complex Ginibre matrix.
/// Columns of the result are the orthonormalized Ginibre columns.
inline Operator random_unitary(Rng &rng, std::size_t dim) {
    std::vector<std::vector<cplx>> cols(dim, std::vector<cplx>(dim));
    for (auto &c : cols) {
        for (auto &x : c) {
            x = rng.complex_normal();
        }
    }
    for (std::size_t k = 0; k < dim; ++k) {
        // two passes of modified Gram-Schmidt keep orthogonality at 1e-15
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < k; ++j) {
                const cplx proj = inner(cols[j], cols[k]);
                for (std::size_t i = 0; i < dim; ++i) {
                    cols[k][i] -= proj * cols[j][i];
                }
            }
        }
        const double n = norm(cols[k]);
        for (auto &x : cols[k]) {
            x /= n;
        }
    }
    Operator u(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            u(i, j) = cols[j][i];
        }
    }
    return u;
}

/// Columns of a unitary as vectors.
inline std::vector<std::vector<cplx>> columns(const Operator &u) {
    std::vector<std::vector<cplx>> out(u.cols(), std::vector<cplx>(u.rows()));
    for (std::size_t i = 0; i < u.rows(); ++i) {
        for (std::size_t j = 0; j < u.cols(); ++j) {
            out[j][i] = u(i, j);
        }
    }
    return out;
}

} // namespace relfacts
