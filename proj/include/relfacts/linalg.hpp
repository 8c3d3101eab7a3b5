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
 * Dense complex matrices and vectors.
 *
 * Everything here is plain double-precision dense storage. Matrices are
 * row-major. Composite indices follow the convention of the rest of the
 * library: the first factor of a product is the most significant digit.
 */
#pragma once

#include "relfacts/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace relfacts {

using cplx = std::complex<double>;

/// Numerical thresholds used throughout. Defaults are the documented ones;
/// the CLI may override them per run.
struct Tolerances {
    double validation = 1e-10; ///< unitary / projector / normalization checks
    double zero_branch = 1e-14; ///< Lüders branches at or below are empty
    double null_branch = 1e-12; ///< branch amplitudes at or below are null
};

/// Largest composite dimension for state vectors.
inline constexpr std::size_t kDefaultStateDimCap = std::size_t{1} << 24;
/// Largest dimension for dense square operators (matrices of dim^2 entries).
inline constexpr std::size_t kDefaultOperatorDimCap = 16384;

namespace detail {
inline std::atomic<std::size_t> &state_cap_storage() {
    static std::atomic<std::size_t> cap{kDefaultStateDimCap};
    return cap;
}
} // namespace detail

inline std::size_t state_dim_cap() { return detail::state_cap_storage().load(); }
inline void set_state_dim_cap(std::size_t cap) {
    detail::state_cap_storage().store(cap);
}

inline void check_operator_dim(std::size_t dim, const char *what) {
    if (dim > kDefaultOperatorDimCap) {
        throw CapacityError(std::string(what) + ": operator dimension " +
                            std::to_string(dim) + " exceeds cap " +
                            std::to_string(kDefaultOperatorDimCap));
    }
}

inline void check_state_dim(std::size_t dim, const char *what) {
    if (dim > state_dim_cap()) {
        throw CapacityError(std::string(what) + ": composite dimension " +
                            std::to_string(dim) + " exceeds cap " +
                            std::to_string(state_dim_cap()));
    }
}

class Operator {
  public:
    Operator() = default;
    Operator(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {
        if (rows == 0 || cols == 0) {
            throw ValidationError("operator dimensions must be positive");
        }
    }
    Operator(std::size_t rows, std::size_t cols, std::vector<cplx> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows == 0 || cols == 0) {
            throw ValidationError("operator dimensions must be positive");
        }
        if (data_.size() != rows * cols) {
            throw ValidationError("operator entry count " +
                                  std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows) +
                                  "x" + std::to_string(cols));
        }
    }

    static Operator identity(std::size_t n) {
        Operator id(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            id(i, i) = 1.0;
        }
        return id;
    }

    static Operator
    from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<cplx> data;
        data.reserve(r * c);
        for (const auto &row : rows) {
            if (row.size() != c) {
                throw ValidationError("ragged operator rows");
            }
            data.insert(data.end(), row.begin(), row.end());
        }
        return Operator(r, c, std::move(data));
    }

    /// |ket><bra|
    static Operator outer(std::span<const cplx> ket, std::span<const cplx> bra) {
        Operator m(ket.size(), bra.size());
        for (std::size_t i = 0; i < ket.size(); ++i) {
            for (std::size_t j = 0; j < bra.size(); ++j) {
                m(i, j) = ket[i] * std::conj(bra[j]);
            }
        }
        return m;
    }

    static Operator projector_onto(std::span<const cplx> v) {
        return outer(v, v);
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }
    [[nodiscard]] std::span<const cplx> data() const noexcept { return data_; }
    [[nodiscard]] std::span<cplx> data() noexcept { return data_; }

    cplx &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx &operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    [[nodiscard]] Operator adjoint() const {
        Operator out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) {
                out(j, i) = std::conj((*this)(i, j));
            }
        }
        return out;
    }

    [[nodiscard]] cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> v) const {
        if (v.size() != cols_) {
            throw ValidationError("operator/vector dimension mismatch");
        }
        std::vector<cplx> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            cplx acc = 0.0;
            const cplx *row = data_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
        return out;
    }

    Operator &operator+=(const Operator &o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += o.data_[k];
        }
        return *this;
    }
    Operator &operator-=(const Operator &o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }
    Operator &operator*=(cplx s) {
        for (auto &x : data_) {
            x *= s;
        }
        return *this;
    }

    friend Operator operator+(Operator a, const Operator &b) { return a += b; }
    friend Operator operator-(Operator a, const Operator &b) { return a -= b; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }

    friend Operator operator*(const Operator &a, const Operator &b) {
        if (a.cols_ != b.rows_) {
            throw ValidationError("operator product dimension mismatch");
        }
        Operator out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) {
                    continue;
                }
                const cplx *brow = b.data_.data() + k * b.cols_;
                cplx *orow = out.data_.data() + i * out.cols_;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    orow[j] += aik * brow[j];
                }
            }
        }
        return out;
    }

    /// Largest entrywise modulus of (this - o).
    [[nodiscard]] double max_abs_diff(const Operator &o) const {
        require_same_shape(o);
        double m = 0.0;
        for (std::size_t k = 0; k < data_.size(); ++k) {
            m = std::max(m, std::abs(data_[k] - o.data_[k]));
        }
        return m;
    }

    [[nodiscard]] bool is_hermitian(double tol) const {
        if (!square()) {
            return false;
        }
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = i; j < cols_; ++j) {
                if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) {
                    return false;
                }
            }
        }
        return true;
    }

    [[nodiscard]] bool is_unitary(double tol) const {
        if (!square()) {
            return false;
        }
        return (adjoint() * *this).max_abs_diff(identity(rows_)) <= tol;
    }

    [[nodiscard]] bool is_projector(double tol) const {
        return is_hermitian(tol) && ((*this) * (*this)).max_abs_diff(*this) <= tol;
    }

  private:
    void require_same_shape(const Operator &o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw ValidationError("operator shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

inline double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto &x : v) {
        s += std::norm(x);
    }
    return s;
}

inline double norm(std::span<const cplx> v) { return std::sqrt(norm2(v)); }

/// <a|b>, antilinear in the first argument.
inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) {
        throw ValidationError("inner product dimension mismatch");
    }
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
    }
    return {re, im};
}

/// Unit-norm amplitude vector over a composite space.
class StateVector {
  public:
    StateVector() = default;
    explicit StateVector(std::vector<cplx> amplitudes)
        : amps_(std::move(amplitudes)) {
        if (amps_.empty()) {
            throw ValidationError("state vector must be nonempty");
        }
    }

    static StateVector basis(std::size_t dim, std::size_t index) {
        if (index >= dim) {
            throw ValidationError("basis index out of range");
        }
        std::vector<cplx> v(dim);
        v[index] = 1.0;
        return StateVector(std::move(v));
    }

    /// Normalizes a raw vector; throws if it is (numerically) zero.
    static StateVector normalized(std::vector<cplx> raw) {
        const double n = relfacts::norm(raw);
        if (!(n > 0.0) || !std::isfinite(n)) {
            throw NumericError("cannot normalize a zero or non-finite vector");
        }
        for (auto &x : raw) {
            x /= n;
        }
        return StateVector(std::move(raw));
    }

    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::span<cplx> amplitudes() noexcept { return amps_; }
    [[nodiscard]] const std::vector<cplx> &vector() const noexcept { return amps_; }
    [[nodiscard]] std::vector<cplx> &vector() noexcept { return amps_; }
    const cplx &operator[](std::size_t i) const { return amps_[i]; }
    cplx &operator[](std::size_t i) { return amps_[i]; }

    [[nodiscard]] double norm() const { return relfacts::norm(amps_); }

    void check_normalized(double tol) const {
        if (std::abs(norm() - 1.0) > tol) {
            throw ValidationError("state vector is not unit norm (norm = " +
                                  std::to_string(norm()) + ")");
        }
    }

  private:
    std::vector<cplx> amps_;
};

/// Kronecker product of two vectors; (a, b) ordering, a most significant.
inline std::vector<cplx> kron(std::span<const cplx> a, std::span<const cplx> b) {
    check_state_dim(a.size() * b.size(), "tensor_product");
    std::vector<cplx> out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return out;
}

inline Operator kron(const Operator &a, const Operator &b) {
    const std::size_t rows = a.rows() * b.rows();
    const std::size_t cols = a.cols() * b.cols();
    check_operator_dim(std::max(rows, cols), "tensor_product");
    Operator out(rows, cols);
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1) {
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const cplx x = a(i1, j1);
            if (x == cplx{}) {
                continue;
            }
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2) {
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2) {
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = x * b(i2, j2);
                }
            }
        }
    }
    return out;
}

inline StateVector tensor_product(const StateVector &a, const StateVector &b) {
    return StateVector(kron(a.amplitudes(), b.amplitudes()));
}

inline Operator tensor_product(const Operator &a, const Operator &b) {
    return kron(a, b);
}

/// Eigenvalues of a real symmetric matrix (row-major, n x n) by cyclic
/// Jacobi rotations. Returned in ascending order.
inline std::vector<double> symmetric_eigenvalues(std::vector<double> a,
                                                 std::size_t n) {
    auto at = [&](std::size_t i, std::size_t j) -> double & { return a[i * n + j]; };
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double x = at(i, j) * at(i, j);
                total += x;
                if (i != j) {
                    off += x;
                }
            }
        }
        if (off <= 1e-30 * std::max(total, 1e-300) || off < 1e-300) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) {
                    continue;
                }
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = c * apk - s * aqk;
                    at(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) {
        ev[i] = at(i, i);
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Eigenvalues of a Hermitian matrix, ascending. Uses the real 2n x 2n
/// embedding [[Re, -Im], [Im, Re]], whose spectrum is that of H doubled.
inline std::vector<double> hermitian_eigenvalues(const Operator &h) {
    if (!h.square()) {
        throw ValidationError("eigenvalues need a square matrix");
    }
    const std::size_t n = h.rows();
    const std::size_t m = 2 * n;
    std::vector<double> real(m * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            // symmetrize to absorb rounding in the input
            const cplx x = 0.5 * (h(i, j) + std::conj(h(j, i)));
            real[i * m + j] = x.real();
            real[(i + n) * m + (j + n)] = x.real();
            real[i * m + (j + n)] = -x.imag();
            real[(i + n) * m + j] = x.imag();
        }
    }
    const auto doubled = symmetric_eigenvalues(std::move(real), m);
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) {
        ev[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    }
    return ev;
}

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
  public:
    DensityMatrix() = default;
    explicit DensityMatrix(Operator m) : m_(std::move(m)) {
        if (!m_.square()) {
            throw ValidationError("density matrix must be square");
        }
    }

    static DensityMatrix pure(std::span<const cplx> psi) {
        check_operator_dim(psi.size(), "density matrix");
        return DensityMatrix(Operator::projector_onto(psi));
    }

    [[nodiscard]] std::size_t dim() const noexcept { return m_.rows(); }
    [[nodiscard]] const Operator &matrix() const noexcept { return m_; }
    const cplx &operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    void validate(double tol) const {
        if (!m_.is_hermitian(tol)) {
            throw ValidationError("density matrix is not Hermitian");
        }
        if (std::abs(m_.trace() - 1.0) > tol) {
            throw ValidationError("density matrix trace is not 1");
        }
        const auto ev = hermitian_eigenvalues(m_);
        if (!ev.empty() && ev.front() < -tol) {
            throw ValidationError("density matrix has a negative eigenvalue");
        }
    }

  private:
    Operator m_;
};

/// ½ Σ |σ_k(ρ − σ)|; the difference is Hermitian so singular values are the
/// moduli of its eigenvalues.
inline double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw ValidationError("trace_distance: dimension mismatch");
    }
    const auto ev = hermitian_eigenvalues(rho.matrix() - sigma.matrix());
    double s = 0.0;
    for (double x : ev) {
        s += std::abs(x);
    }
    return 0.5 * s;
}

} // namespace relfacts
