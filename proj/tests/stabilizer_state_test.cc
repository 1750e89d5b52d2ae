// Copyright 2026 The mbsurf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mbsurf/stabilizer_state.h"

#include "dense_oracle.h"
#include "gtest/gtest.h"

using namespace mbsurf;
using mbsurf::testing::dense_expectation;
using mbsurf::testing::dense_state;

namespace {

PauliOperator P(const char *s) {
    return PauliOperator::from_string(s);
}

}  // namespace

TEST(stabilizer_state, measure_eigenstate) {
    StabilizerState s(1);
    StabilizerState before = s;
    EXPECT_FALSE(s.measure_forced(P("Z0"), true));
    EXPECT_TRUE(states_equivalent(s, before));
}

TEST(stabilizer_state, measure_x_forced_one_gives_minus) {
    StabilizerState s(1);
    EXPECT_TRUE(s.measure_forced(P("X0"), true));
    EXPECT_TRUE(states_equivalent(s, StabilizerState::from_generators(1, {P("-X0")})));
}

TEST(stabilizer_state, bell_preparation) {
    StabilizerState s(2);
    EXPECT_FALSE(s.measure_forced(P("X0*X1"), false));
    EXPECT_TRUE(states_equivalent(s, StabilizerState::from_generators(2, {P("X0*X1"), P("Z0*Z1")})));
}

TEST(stabilizer_state, out_of_range) {
    StabilizerState s(2);
    EXPECT_THROW(s.measure_forced(P("Z2"), false), std::out_of_range);
    EXPECT_THROW(s.apply_pauli(P("X5")), std::out_of_range);
}

TEST(stabilizer_state, apply_pauli_flips_signs) {
    StabilizerState s(1);
    s.apply_pauli(P("X0"));
    EXPECT_TRUE(states_equivalent(s, StabilizerState::from_generators(1, {P("-Z0")})));
    StabilizerState t = s;
    t.apply_pauli(PauliOperator());
    EXPECT_TRUE(states_equivalent(s, t));
}

TEST(stabilizer_state, apply_y_to_bell_pair_matches_dense) {
    StabilizerState s = StabilizerState::from_generators(2, {P("X0*X1"), P("Z0*Z1")});
    s.apply_pauli(P("Y0"));
    EXPECT_EQ(s.expectation(P("X0*X1")), -1);
    EXPECT_EQ(s.expectation(P("Z0*Z1")), -1);
    auto v = dense_state(StabilizerState::from_generators(2, {P("X0*X1"), P("Z0*Z1")}));
    auto w = mbsurf::testing::apply_dense(P("Y0"), v);
    EXPECT_NEAR(dense_expectation(P("X0*X1"), w), -1.0, 1e-12);
    EXPECT_NEAR(dense_expectation(P("Z0*Z1"), w), -1.0, 1e-12);
}

TEST(stabilizer_state, equivalence_examples) {
    auto a = StabilizerState::from_generators(2, {P("X0*X1"), P("Z0*Z1")});
    EXPECT_TRUE(states_equivalent(a, a));
    EXPECT_TRUE(states_equivalent(a, StabilizerState::from_generators(2, {P("X0*X1"), P("-Y0*Y1")})));
    EXPECT_FALSE(states_equivalent(a, StabilizerState::from_generators(2, {P("X0*X1"), P("Y0*Y1")})));
    EXPECT_FALSE(states_equivalent(StabilizerState::from_generators(1, {P("Z0")}),
                                   StabilizerState::from_generators(1, {P("-Z0")})));
    EXPECT_THROW(states_equivalent(StabilizerState(1), StabilizerState(2)), std::invalid_argument);
}

TEST(stabilizer_state, from_generators_rejects_bad_sets) {
    EXPECT_THROW(StabilizerState::from_generators(2, {P("X0"), P("Z0")}), std::invalid_argument);
    EXPECT_THROW(StabilizerState::from_generators(2, {P("X0*X1"), P("X0*X1")}), std::invalid_argument);
}

TEST(stabilizer_state, generators_commute_and_are_independent) {
    Rng rng(3);
    for (int t = 0; t < 50; t++) {
        StabilizerState s = StabilizerState::random(5, rng);
        auto g = s.generators();
        for (size_t i = 0; i < g.size(); i++) {
            for (size_t j = 0; j < g.size(); j++) {
                EXPECT_TRUE(g[i].commutes(g[j]));
            }
        }
        EXPECT_TRUE(states_equivalent(s, StabilizerState::from_generators(5, g)));
    }
}

TEST(stabilizer_state, measurement_is_idempotent) {
    Rng rng(4);
    for (int t = 0; t < 200; t++) {
        StabilizerState s = StabilizerState::random(4, rng);
        PauliOperator p;
        for (Qubit q = 0; q < 4; q++) {
            p.set(q, static_cast<Axis>(rng() & 3));
        }
        if (p.is_identity()) {
            continue;
        }
        bool first = s.measure(p, rng);
        StabilizerState after = s;
        bool second = s.measure(p, rng);
        EXPECT_EQ(first, second);
        EXPECT_TRUE(states_equivalent(s, after));
    }
}

TEST(stabilizer_state, expectations_match_dense_oracle) {
    Rng rng(6);
    for (int t = 0; t < 40; t++) {
        StabilizerState s = StabilizerState::random(3, rng);
        auto v = dense_state(s);
        for (int code = 1; code < 64; code++) {
            PauliOperator p;
            for (Qubit q = 0; q < 3; q++) {
                p.set(q, static_cast<Axis>((code >> (2 * q)) & 3));
            }
            EXPECT_NEAR(static_cast<double>(s.expectation(p)), dense_expectation(p, v), 1e-9) << p;
        }
    }
}

TEST(stabilizer_state, clifford_cnot_matches_dense) {
    Rng rng(8);
    CliffordMap cx = CliffordMap::cnot(3, 0, 2);
    for (int t = 0; t < 20; t++) {
        StabilizerState s = StabilizerState::random(3, rng);
        auto v = dense_state(s);
        mbsurf::testing::Vec w(v.size());
        for (size_t i = 0; i < v.size(); i++) {
            size_t j = (i & 1) ? i ^ 4 : i;
            w[j] = v[i];
        }
        s.apply_clifford(cx);
        for (const auto &g : s.generators()) {
            EXPECT_NEAR(dense_expectation(g, w), 1.0, 1e-9);
        }
    }
}

TEST(stabilizer_state, forced_outcome_ignored_when_deterministic) {
    StabilizerState s(2);
    EXPECT_FALSE(s.measure_forced(P("Z0*Z1"), true));
}
