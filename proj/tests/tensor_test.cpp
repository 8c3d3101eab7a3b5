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

#include "generators.hpp"
#include "oracles.hpp"

#include "relfacts/relfacts.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace relfacts;

namespace {

const Operator kX = Operator::from_rows({{0.0, 1.0}, {1.0, 0.0}});
const Operator kZ = Operator::from_rows({{1.0, 0.0}, {0.0, -1.0}});
const Operator kCnot = Operator::from_rows(
    {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}});

SystemRegistry ab() {
    SystemRegistry r;
    r.add("A", 2).add("B", 2);
    return r;
}

void expect_close(const Operator &a, const Operator &b, double tol = 1e-12) {
    ASSERT_EQ(a.rows(), b.rows());
    ASSERT_EQ(a.cols(), b.cols());
    EXPECT_LE(a.max_abs_diff(b), tol);
}

} // namespace

TEST(TensorProduct, IdentityAndBasis) {
    expect_close(kron(Operator::identity(2), Operator::identity(2)), Operator::identity(4));
    const auto v = tensor_product(StateVector::basis(2, 0), StateVector::basis(2, 1));
    EXPECT_EQ(v.size(), 4u);
    EXPECT_EQ(v[1], cplx(1.0));
    EXPECT_EQ(norm2(v.amplitudes()), 1.0);
}

TEST(TensorProduct, XZEntryMatchesIndexFormula) {
    const auto m = kron(kX, kZ);
    EXPECT_EQ(m(1, 3), cplx(-1.0));
    for (std::size_t i1 = 0; i1 < 2; ++i1) {
        for (std::size_t i2 = 0; i2 < 2; ++i2) {
            for (std::size_t j1 = 0; j1 < 2; ++j1) {
                for (std::size_t j2 = 0; j2 < 2; ++j2) {
                    EXPECT_EQ(m(i1 * 2 + i2, j1 * 2 + j2), kX(i1, j1) * kZ(i2, j2));
                }
            }
        }
    }
}

TEST(TensorProduct, MixedProductProperty) {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
        const std::size_t da = rng.integer(1, 3);
        const std::size_t db = rng.integer(1, 3);
        const auto a = random_unitary(rng, da) * 0.7;
        const auto c = random_unitary(rng, da);
        const auto b = random_unitary(rng, db) + Operator::identity(db);
        const auto d = random_unitary(rng, db);
        expect_close(kron(a, b) * kron(c, d), kron(a * c, b * d));
    }
}

TEST(TensorProduct, CapacityError) {
    const auto saved = state_dim_cap();
    set_state_dim_cap(8);
    std::vector<cplx> a(4, 0.5);
    EXPECT_THROW(kron(a, a), CapacityError);
    set_state_dim_cap(saved);
    EXPECT_THROW(kron(Operator::identity(200), Operator::identity(200)), CapacityError);
}

TEST(Embed, LocalFlip) {
    const auto reg = ab();
    const auto u = embed(kX, {"B"}, reg);
    const auto out = u.apply(StateVector::basis(4, 0).amplitudes());
    EXPECT_EQ(out[1], cplx(1.0));
    expect_close(embed(Operator::identity(2), {"A"}, reg), Operator::identity(4));
}

TEST(Embed, CnotTargetOrder) {
    const auto reg = ab();
    const auto ab_cnot = embed(kCnot, {"A", "B"}, reg);
    const auto ba_cnot = embed(kCnot, {"B", "A"}, reg);
    EXPECT_GT(ab_cnot.max_abs_diff(ba_cnot), 0.5);
    // |10>: A controls -> |11>; B controls (B=0) -> |10>
    const auto s10 = StateVector::basis(4, 2).vector();
    EXPECT_EQ(ab_cnot.apply(s10)[3], cplx(1.0));
    EXPECT_EQ(ba_cnot.apply(s10)[2], cplx(1.0));
    // |01>: A=0 -> |01>; B controls -> |11>
    const auto s01 = StateVector::basis(4, 1).vector();
    EXPECT_EQ(ab_cnot.apply(s01)[1], cplx(1.0));
    EXPECT_EQ(ba_cnot.apply(s01)[3], cplx(1.0));
}

TEST(Embed, MatchesDigitOracleAndApplyLocal) {
    Rng rng(3);
    SystemRegistry reg;
    reg.add("P", 2).add("Q", 3).add("R", 2);
    const std::vector<std::string> targets{"R", "P"};
    const auto u = random_unitary(rng, 4);
    const auto full = embed(u, targets, reg);
    const auto want = oracle::embed(u, {2, 0}, oracle::dims_of(reg));
    for (std::size_t i = 0; i < 12; ++i) {
        for (std::size_t j = 0; j < 12; ++j) {
            EXPECT_LE(std::abs(full(i, j) - want[i][j]), 1e-15);
        }
    }
    auto psi = random_state(rng, 12).vector();
    const auto expected = full.apply(psi);
    apply_local(psi, u, targets, reg);
    for (std::size_t i = 0; i < 12; ++i) {
        EXPECT_LE(std::abs(psi[i] - expected[i]), 1e-14);
    }
}

TEST(Embed, Errors) {
    const auto reg = ab();
    EXPECT_THROW(embed(kX, {"C"}, reg), ValidationError);
    EXPECT_THROW(embed(kX, {"A", "B"}, reg), ValidationError);
    EXPECT_THROW(embed(kCnot, {"A", "A"}, reg), ValidationError);
}

TEST(PartialTrace, ProductAndBell) {
    const auto reg = ab();
    const auto r00 = DensityMatrix::pure(StateVector::basis(4, 0).amplitudes());
    expect_close(partial_trace(r00, {"A"}, reg).matrix(),
                 Operator::projector_onto(StateVector::basis(2, 0).amplitudes()));
    const double h = 1.0 / std::numbers::sqrt2;
    const auto bell = DensityMatrix::pure(std::vector<cplx>{h, 0.0, 0.0, h});
    expect_close(partial_trace(bell, {"A"}, reg).matrix(), Operator::identity(2) * 0.5);
}

TEST(PartialTrace, RandomTwoByThreeAgainstOracle) {
    Rng rng(23);
    SystemRegistry reg;
    reg.add("A", 2).add("B", 3);
    const auto rho = gen::random_density(rng, 6, 1);
    for (const auto &[keep, pos] :
         std::vector<std::pair<std::vector<std::string>, std::vector<std::size_t>>>{
             {{"A"}, {0}}, {{"B"}, {1}}, {{"B", "A"}, {1, 0}}}) {
        const auto got = partial_trace(rho, keep, reg);
        const auto want =
            oracle::partial_trace(oracle::to_mat(rho.matrix()), pos, oracle::dims_of(reg));
        for (std::size_t i = 0; i < want.size(); ++i) {
            for (std::size_t j = 0; j < want.size(); ++j) {
                EXPECT_LE(std::abs(got(i, j) - want[i][j]), 1e-12);
            }
        }
    }
}

TEST(PartialTrace, ProductRecoversFactor) {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        SystemRegistry reg;
        const std::size_t da = rng.integer(2, 3);
        const std::size_t db = rng.integer(2, 3);
        reg.add("A", da).add("B", db);
        const auto ra = gen::random_density(rng, da, 2);
        const auto rb = gen::random_density(rng, db, 2);
        const DensityMatrix joint(kron(ra.matrix(), rb.matrix()));
        expect_close(partial_trace(joint, {"A"}, reg).matrix(), ra.matrix());
        expect_close(partial_trace(joint, {"B"}, reg).matrix(), rb.matrix());
    }
}

TEST(PartialTrace, ReducedDensityAgrees) {
    Rng rng(8);
    SystemRegistry reg;
    reg.add("A", 2).add("B", 3).add("C", 2);
    const auto psi = random_state(rng, 12);
    const auto rho = DensityMatrix::pure(psi.amplitudes());
    const std::vector<std::string> keep{"C", "A"};
    expect_close(reduced_density(psi.amplitudes(), keep, reg).matrix(),
                 partial_trace(rho, keep, reg).matrix());
}

TEST(PartialTrace, Errors) {
    const auto reg = ab();
    const auto r = DensityMatrix::pure(StateVector::basis(4, 0).amplitudes());
    EXPECT_THROW(partial_trace(r, std::vector<std::string>{}, reg), ValidationError);
    EXPECT_THROW(partial_trace(r, {"Z"}, reg), ValidationError);
}

TEST(Born, Examples) {
    const auto plus = StateVector::normalized({1.0, 1.0});
    EXPECT_NEAR(born_probability(plus, Operator::identity(2)), 1.0, 1e-15);
    EXPECT_NEAR(born_probability(plus, Operator::projector_onto(StateVector::basis(2, 0).amplitudes())),
                0.5, 1e-15);
    for (double theta : {0.0, 0.4, 1.3, 2.9}) {
        const auto up = spin_basis(theta)[0].vector;
        EXPECT_NEAR(born_probability(StateVector::basis(2, 0), Operator::projector_onto(up)),
                    std::pow(std::cos(theta / 2.0), 2), 1e-14);
    }
    EXPECT_THROW(born_probability(plus, kX), ValidationError);
}

TEST(Born, PvmSumsToOne) {
    Rng rng(17);
    for (int t = 0; t < 50; ++t) {
        const std::size_t d = rng.integer(2, 6);
        SystemRegistry reg;
        reg.add("A", d);
        const auto v = gen::random_variable(rng, "V", "A", reg);
        const auto psi = random_state(rng, d);
        double s = 0.0;
        for (const auto &o : v.outcomes()) {
            s += born_probability(psi, o.projector);
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
    }
}

TEST(Luders, Examples) {
    const auto plus = StateVector::normalized({1.0, 1.0});
    const auto p0 = Operator::projector_onto(StateVector::basis(2, 0).amplitudes());
    const auto r = luders_update(plus, p0);
    EXPECT_NEAR(r.probability, 0.5, 1e-15);
    EXPECT_NEAR(std::abs(r.state[0]), 1.0, 1e-15);
    EXPECT_NEAR(luders_update(r.state, p0).probability, 1.0, 1e-15);

    const double h = 1.0 / std::numbers::sqrt2;
    const StateVector bell(std::vector<cplx>{h, 0.0, 0.0, h});
    const auto rb = luders_update(bell, embed(p0, {"A"}, ab()));
    EXPECT_NEAR(rb.probability, 0.5, 1e-15);
    EXPECT_NEAR(std::abs(rb.state[0]), 1.0, 1e-15);
    EXPECT_NEAR(rb.state.norm(), 1.0, 1e-10);

    const auto p1 = Operator::projector_onto(StateVector::basis(2, 1).amplitudes());
    EXPECT_THROW(luders_update(StateVector::basis(2, 0), p1), ZeroBranchError);
}

TEST(TraceDistance, Examples) {
    const auto z0 = DensityMatrix::pure(StateVector::basis(2, 0).amplitudes());
    const auto z1 = DensityMatrix::pure(StateVector::basis(2, 1).amplitudes());
    const auto plus = DensityMatrix::pure(StateVector::normalized({1.0, 1.0}).amplitudes());
    EXPECT_NEAR(trace_distance(z0, z0), 0.0, 1e-15);
    EXPECT_NEAR(trace_distance(z0, z1), 1.0, 1e-14);
    EXPECT_NEAR(trace_distance(z0, plus), std::sqrt(0.5), 1e-12);
    EXPECT_THROW(trace_distance(z0, DensityMatrix::pure(StateVector::basis(3, 0).amplitudes())),
                 ValidationError);
}

TEST(TraceDistance, TriangleAndSymmetry) {
    Rng rng(29);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = rng.integer(2, 5);
        const auto a = gen::random_density(rng, d, rng.integer(1, 3));
        const auto b = gen::random_density(rng, d, rng.integer(1, 3));
        const auto c = gen::random_density(rng, d, rng.integer(1, 3));
        const double ab_ = trace_distance(a, b);
        EXPECT_NEAR(ab_, trace_distance(b, a), 1e-12);
        EXPECT_LE(trace_distance(a, c), ab_ + trace_distance(b, c) + 1e-10);
        // pure states: closed form
        const auto u = random_state(rng, d);
        const auto v = random_state(rng, d);
        EXPECT_NEAR(trace_distance(DensityMatrix::pure(u.amplitudes()),
                                   DensityMatrix::pure(v.amplitudes())),
                    std::sqrt(1.0 - std::norm(inner(u.amplitudes(), v.amplitudes()))), 1e-10);
    }
}

TEST(Validation, StateAndDensity) {
    EXPECT_THROW(StateVector::normalized({0.0, 0.0}), NumericError);
    EXPECT_THROW(StateVector(std::vector<cplx>{1.0, 1.0}).check_normalized(1e-10),
                 ValidationError);
    EXPECT_THROW(DensityMatrix(Operator::identity(2)).validate(1e-10), ValidationError);
    EXPECT_TRUE(kX.is_unitary(1e-10));
    EXPECT_FALSE((kX + kZ).is_unitary(1e-10));
}
