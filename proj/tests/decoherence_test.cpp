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

#include "relfacts/relfacts.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace relfacts;

namespace {
constexpr double pi = std::numbers::pi;

/// Restores the state cap on scope exit.
struct CapGuard {
    std::size_t saved = state_dim_cap();
    ~CapGuard() { set_state_dim_cap(saved); }
};
} // namespace

TEST(Environment, ClosedFormEpsilon) {
    for (double phi : {pi / 8.0, pi / 4.0, 3.0 * pi / 8.0}) {
        for (std::size_t n = 0; n <= 10; ++n) {
            EXPECT_NEAR(environment_epsilon(FriendTemplate{}, EnvironmentModel::uniform(n, phi)),
                        std::pow(std::cos(phi), 2.0 * n), 1e-12);
        }
    }
}

TEST(Environment, RandomAnglesArePrefixStable) {
    const auto a = EnvironmentModel::random(5, 0.2, 0.9, 42).angles();
    const auto b = EnvironmentModel::random(8, 0.2, 0.9, 42).angles();
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i], b[i]);
        EXPECT_GE(a[i], 0.2);
        EXPECT_LT(a[i], 0.9);
    }
    EXPECT_NE(EnvironmentModel::random(3, 0.2, 0.9, 1).angles(),
              EnvironmentModel::random(3, 0.2, 0.9, 2).angles());
    // closed form with varying angles: product of cos^2
    const auto m = EnvironmentModel::random(6, 0.3, 1.2, 9);
    double expected = 1.0;
    for (double phi : m.angles()) {
        expected *= std::pow(std::cos(phi), 2);
    }
    EXPECT_NEAR(environment_epsilon(FriendTemplate{}, m), expected, 1e-12);
    EXPECT_THROW(EnvironmentModel::random(2, 1.0, 0.5, 0), ValidationError);
}

TEST(Sweep, RowsFollowClosedForm) {
    const std::vector<std::size_t> ns{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const auto rows = epsilon_sweep(FriendTemplate{}, ns, EnvironmentModel::uniform(0, pi / 4.0));
    ASSERT_EQ(rows.size(), ns.size());
    for (const auto &r : rows) {
        EXPECT_NEAR(r.epsilon, std::pow(2.0, -static_cast<double>(r.n)), 1e-12);
        EXPECT_LE(r.deviation, r.bound + 1e-10);
    }
    const auto flat = epsilon_sweep(FriendTemplate{}, ns, EnvironmentModel::uniform(0, 0.0));
    for (const auto &r : flat) {
        EXPECT_NEAR(r.epsilon, 1.0, 1e-12);
    }
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    EXPECT_EQ(csv.str().substr(0, 27), "n,epsilon,bound,deviation\n1");
}

TEST(Sweep, CapacityNamesN) {
    CapGuard g;
    set_state_dim_cap(64);
    const std::vector<std::size_t> ns{1, 8};
    try {
        epsilon_sweep(FriendTemplate{}, ns, EnvironmentModel::uniform(0, pi / 4.0));
        FAIL() << "expected a capacity error";
    } catch (const CapacityError &e) {
        EXPECT_NE(std::string(e.what()).find("n=8"), std::string::npos) << e.what();
    }
}

TEST(Threshold, Examples) {
    EXPECT_EQ(decoherence_threshold(FriendTemplate{}, EnvironmentModel::uniform(0, pi / 2.0), 0.5),
              1u);
    EXPECT_EQ(decoherence_threshold(FriendTemplate{}, EnvironmentModel::uniform(0, pi / 2.0), 1e-9),
              1u);
    EXPECT_EQ(decoherence_threshold(FriendTemplate{}, EnvironmentModel::uniform(0, pi / 4.0), 0.01),
              7u);
    EXPECT_THROW(decoherence_threshold(FriendTemplate{}, EnvironmentModel::uniform(0, 0.0), 0.5),
                 NumericError);
    EXPECT_THROW(decoherence_threshold(FriendTemplate{}, EnvironmentModel::uniform(0, 0.3), 1.5),
                 ValidationError);
    CapGuard g;
    set_state_dim_cap(256);
    EXPECT_THROW(decoherence_threshold(FriendTemplate{}, EnvironmentModel::uniform(0, pi / 4.0), 1e-6),
                 CapacityError);
}

TEST(Relational, Examples) {
    const auto r5 = relational_check(FriendTemplate{}, EnvironmentModel::uniform(5, pi / 4.0));
    EXPECT_LE(r5.deviation_blind, r5.bound + 1e-10);
    EXPECT_NEAR(r5.deviation_probing, 0.5, 1e-10);
    const auto r0 = relational_check(FriendTemplate{}, EnvironmentModel::uniform(0, pi / 4.0));
    EXPECT_NEAR(r0.deviation_blind, 0.5, 1e-12);
    EXPECT_NEAR(r0.deviation_probing, 0.5, 1e-12);
    const auto copy = relational_check(FriendTemplate{}, EnvironmentModel::uniform(1, pi / 2.0));
    EXPECT_NEAR(copy.deviation_blind, 0.0, 1e-12);
}

TEST(FriendSetup, Shape) {
    const auto s = build_friend_setup(FriendTemplate{}, EnvironmentModel::uniform(3, 0.4));
    EXPECT_EQ(s.registry.size(), 6u);
    EXPECT_EQ(s.registry.at(5).label, "W");
    EXPECT_EQ(s.stages_end(), 4u);
    EXPECT_EQ(s.undo_probe().size(), 1u + 3u + 3u + 1u);
    const auto no_w = build_friend_setup(FriendTemplate{}, EnvironmentModel::uniform(1, 0.4), false);
    EXPECT_THROW(no_w.blind_probe(), ValidationError);
}
