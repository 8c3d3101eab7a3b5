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

#include "relfacts/relfacts.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace relfacts;

TEST(Registry, Dimensions) {
    SystemRegistry r;
    r.add("S", 2).add("F", 2);
    EXPECT_EQ(r.total_dim(), 4u);
    r.add("E", 32, Role::Environment);
    EXPECT_EQ(r.total_dim(), 128u);
    EXPECT_EQ(r.index_of("E"), 2u);
    EXPECT_THROW(r.add("S", 2), ValidationError);
    EXPECT_THROW(r.add("X", 0), ValidationError);
    EXPECT_EQ(register_system(SystemRegistry{}, "A", 3).total_dim(), 3u);
    EXPECT_EQ(role_from_name("W"), Role::Wigner);
}

TEST(Registry, Complement) {
    SystemRegistry r;
    r.add("A", 2).add("B", 3).add("C", 2);
    const std::vector<std::string> keep{"C", "A"};
    EXPECT_EQ(r.complement(keep), std::vector<std::string>{"B"});
    EXPECT_THROW(r.positions(std::vector<std::string>{"A", "A"}), ValidationError);
}

TEST(Variable, ComputationalAndHadamard) {
    SystemRegistry r;
    r.add("S", 2);
    const auto z = computational_variable("Z", {"S"}, r);
    ASSERT_EQ(z.size(), 2u);
    EXPECT_EQ(z.outcomes()[1].value, "1");
    EXPECT_LE((z.projector(0) + z.projector(1)).max_abs_diff(Operator::identity(2)), 1e-15);
    const double h = 1.0 / std::numbers::sqrt2;
    const auto x = pvm_from_basis("X", {"S"}, {{"+", {h, h}}, {"-", {h, -h}}}, r);
    EXPECT_NEAR(x.projector(0)(0, 1).real(), 0.5, 1e-15);
    EXPECT_THROW(pvm_from_basis("bad", {"S"}, {{"a", {1.0, 0.0}}, {"b", {h, h}}}, r),
                 ValidationError);
    EXPECT_THROW(pvm_from_basis("short", {"S"}, {{"a", {1.0, 0.0}}}, r), ValidationError);
    EXPECT_NO_THROW(pvm_from_basis("coarse", {"S"}, {{"a", {1.0, 0.0}}}, r, std::string("rest")));
}

TEST(Variable, SpinThetaProbability) {
    SystemRegistry r;
    r.add("S", 2);
    for (double theta : {0.0, 0.5, 1.5707963267948966, 2.5}) {
        const auto v = spin_variable("L", "S", theta, r);
        const auto up_z = StateVector::basis(2, 0);
        EXPECT_NEAR(born_probability(up_z, v.projector(v.index_of("up"))),
                    std::pow(std::cos(theta / 2.0), 2), 1e-14);
    }
}

TEST(Variable, RejectsIncompleteOrOverlapping) {
    const auto p0 = Operator::projector_onto(StateVector::basis(2, 0).amplitudes());
    EXPECT_THROW(Variable("V", {"S"}, {{"a", p0}}), ValidationError);
    EXPECT_THROW(Variable("V", {"S"}, {{"a", p0}, {"b", p0}}), ValidationError);
    EXPECT_THROW(Variable("V", {"S"}, {{"a", p0}, {"a", Operator::identity(2) - p0}}),
                 ValidationError);
}

TEST(Premeasure, QubitIsCnot) {
    SystemRegistry r;
    r.add("S", 2).add("F", 2);
    const auto z = computational_variable("Z", {"S"}, r);
    const auto it = premeasurement_unitary(z, "F", r);
    const Operator cnot = Operator::from_rows(
        {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}});
    EXPECT_LE(it.unitary.max_abs_diff(cnot), 1e-15);
    EXPECT_EQ(*it.fact_context, "F");
    EXPECT_EQ(it.fact_variable->label(), "Z");

    const cplx c1(0.6, 0.0);
    const cplx c2(0.0, 0.8);
    const auto out = it.unitary.apply(std::vector<cplx>{c1, 0.0, c2, 0.0});
    EXPECT_EQ(out[0], c1);
    EXPECT_EQ(out[3], c2);
    EXPECT_EQ(out[1], cplx{});
    EXPECT_EQ(out[2], cplx{});
}

TEST(Premeasure, QutritShift) {
    SystemRegistry r;
    r.add("S", 3).add("F", 3);
    const auto v = computational_variable("V", {"S"}, r);
    const auto it = premeasurement_unitary(v, "F", r);
    EXPECT_TRUE(it.unitary.is_unitary(1e-12));
    // |2>|0> -> |2>|2>
    const auto out = it.unitary.apply(StateVector::basis(9, 6).amplitudes());
    EXPECT_EQ(out[8], cplx(1.0));
}

TEST(Premeasure, PointerTooSmall) {
    SystemRegistry r;
    r.add("S", 3).add("F", 2);
    EXPECT_THROW(premeasurement_unitary(computational_variable("V", {"S"}, r), "F", r),
                 ValidationError);
    EXPECT_THROW(premeasurement_unitary(computational_variable("V", {"S"}, r), "S", r),
                 ValidationError);
}

TEST(Premeasure, ReadyStateRecordsOutcome) {
    Rng rng(1);
    SystemRegistry r;
    r.add("S", 3).add("F", 4);
    const auto v = gen::random_variable(rng, "V", "S", r);
    const auto it = premeasurement_unitary(v, "F", r);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto psi = tensor_product(random_state(rng, 3), StateVector::basis(4, 0));
        auto state = psi.vector();
        apply_local(state, embed(v.projector(i), {"S"}, r), SubsystemIndex(r, std::vector<std::string>{"S", "F"}));
        auto after = it.unitary.apply(state);
        // every nonzero amplitude sits on pointer level i
        for (std::size_t k = 0; k < after.size(); ++k) {
            if (k % 4 != i) {
                EXPECT_LE(std::abs(after[k]), 1e-12);
            }
        }
    }
}

TEST(Couple, Structure) {
    SystemRegistry r;
    r.add("F", 2).add("E", 2);
    const auto z = computational_variable("Z_F", {"F"}, r);
    const auto id = controlled_coupling(z, "E", 0.0, r);
    EXPECT_LE(id.unitary.max_abs_diff(Operator::identity(4)), 1e-15);
    const auto full = controlled_coupling(z, "E", std::numbers::pi / 2.0, r);
    const auto out = full.unitary.apply(StateVector::basis(4, 2).amplitudes());
    EXPECT_NEAR(std::abs(out[3]), 1.0, 1e-15);

    const auto q = controlled_coupling(z, "E", std::numbers::pi / 4.0, r);
    const auto e0 = q.unitary.apply(StateVector::basis(4, 0).amplitudes());
    const auto e1 = q.unitary.apply(StateVector::basis(4, 2).amplitudes());
    const cplx overlap = std::conj(e0[0]) * e1[2] + std::conj(e0[1]) * e1[3];
    EXPECT_NEAR(overlap.real(), std::cos(std::numbers::pi / 4.0), 1e-15);
    EXPECT_EQ(*q.fact_context, "E");

    for (std::size_t i = 0; i < 2; ++i) {
        const auto p = embed(z.projector(i), {"F"}, r);
        EXPECT_LE((q.unitary * p).max_abs_diff(p * q.unitary), 1e-10);
    }
    SystemRegistry bad;
    bad.add("F", 2).add("E", 3);
    EXPECT_THROW(controlled_coupling(computational_variable("Z", {"F"}, bad), "E", 0.1, bad),
                 ValidationError);
}

TEST(Interaction, InverseAndValidation) {
    SystemRegistry r;
    r.add("S", 2).add("F", 2);
    const auto it = premeasurement_unitary(computational_variable("Z", {"S"}, r), "F", r);
    const auto inv = inverse(it);
    EXPECT_FALSE(inv.establishes_fact());
    EXPECT_TRUE(inv.origin.inverse);
    EXPECT_LE((inv.unitary * it.unitary).max_abs_diff(Operator::identity(4)), 1e-15);
    EXPECT_THROW(unitary_interaction("bad", {"S"}, Operator::from_rows({{1.0, 1.0}, {0.0, 1.0}}), r),
                 ValidationError);
    // fact variable outside the targets
    EXPECT_THROW(unitary_interaction("u", {"S"}, Operator::identity(2), r, std::string("F"),
                                     computational_variable("ZF", {"F"}, r)),
                 ValidationError);
}
