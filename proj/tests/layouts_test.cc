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

#include "mbsurf/layouts.h"

#include <set>

#include "gtest/gtest.h"

using namespace mbsurf;

namespace {

// Rank over GF(2) of the symplectic matrix of `ops`.
size_t symplectic_rank(const std::vector<PauliOperator> &ops, size_t n) {
    std::vector<std::vector<uint8_t>> rows;
    for (const auto &p : ops) {
        std::vector<uint8_t> row(2 * n, 0);
        for (const auto &[q, a] : p.terms()) {
            row[q] = static_cast<uint8_t>(a) & 1;
            row[n + q] = static_cast<uint8_t>(a) >> 1;
        }
        rows.push_back(row);
    }
    size_t rank = 0;
    for (size_t col = 0; col < 2 * n && rank < rows.size(); col++) {
        size_t pivot = rank;
        while (pivot < rows.size() && !rows[pivot][col]) {
            pivot++;
        }
        if (pivot == rows.size()) {
            continue;
        }
        std::swap(rows[pivot], rows[rank]);
        for (size_t r = 0; r < rows.size(); r++) {
            if (r != rank && rows[r][col]) {
                for (size_t c = 0; c < 2 * n; c++) {
                    rows[r][c] ^= rows[rank][c];
                }
            }
        }
        rank++;
    }
    return rank;
}

// Code state with every plaquette at +1, Z_L = +1 and ancillas in |0>.
StabilizerState code_state(const Layout &layout) {
    std::vector<PauliOperator> gens;
    for (const auto &p : layout.code.plaquettes) {
        gens.push_back(p.op());
    }
    gens.push_back(layout.code.logical_z);
    for (Qubit q = layout.code.num_data(); q < layout.num_qubits(); q++) {
        gens.push_back(PauliOperator::single(q, Axis::Z));
    }
    return StabilizerState::from_generators(layout.num_qubits(), gens);
}

std::vector<bool> syndromes(const Layout &layout, const MeasurementRecord &rec) {
    std::vector<bool> out;
    for (const auto &refs : layout.syndrome_refs) {
        out.push_back(rec.parity(refs));
    }
    return out;
}

const LayoutKind kKinds[] = {LayoutKind::kWindmill, LayoutKind::kDoubleAncilla};

}  // namespace

TEST(layouts, surface_code_structure) {
    for (int d : {3, 5, 7, 9}) {
        SurfaceCode code = build_surface_code(d);
        size_t n = code.num_data();
        ASSERT_EQ(code.plaquettes.size(), n - 1);
        EXPECT_EQ(code.plaquettes_of(Axis::X).size(), (n - 1) / 2);
        EXPECT_EQ(code.plaquettes_of(Axis::Z).size(), (n - 1) / 2);
        std::vector<PauliOperator> ops;
        size_t boundary = 0;
        for (const auto &p : code.plaquettes) {
            ops.push_back(p.op());
            boundary += p.is_boundary();
            EXPECT_TRUE(p.support.size() == 2 || p.support.size() == 4);
        }
        EXPECT_EQ(boundary, static_cast<size_t>(2 * (d - 1)));
        EXPECT_EQ(symplectic_rank(ops, n), n - 1);
        for (const auto &a : ops) {
            for (const auto &b : ops) {
                EXPECT_TRUE(a.commutes(b));
            }
            EXPECT_TRUE(a.commutes(code.logical_x));
            EXPECT_TRUE(a.commutes(code.logical_z));
        }
        EXPECT_FALSE(code.logical_x.commutes(code.logical_z));
        ops.push_back(code.logical_z);
        EXPECT_EQ(symplectic_rank(ops, n), n);
    }
    EXPECT_THROW(build_surface_code(4), std::invalid_argument);
    EXPECT_THROW(build_surface_code(1), std::invalid_argument);
}

TEST(layouts, measurement_orders) {
    SurfaceCode code = build_surface_code(3);
    for (const auto &p : code.plaquettes) {
        if (p.support.size() != 4) {
            continue;
        }
        Qubit nw = code.data(p.row, p.col);
        Qubit ne = code.data(p.row, p.col + 1);
        Qubit sw = code.data(p.row + 1, p.col);
        Qubit se = code.data(p.row + 1, p.col + 1);
        if (p.type == Axis::X) {
            EXPECT_EQ(p.support, (std::vector<Qubit>{nw, ne, sw, se}));
        } else {
            EXPECT_EQ(p.support, (std::vector<Qubit>{nw, sw, ne, se}));
        }
    }
}

TEST(layouts, qubit_counts) {
    for (int d : {3, 5, 7}) {
        EXPECT_EQ(build_windmill_layout(d).num_qubits(), static_cast<size_t>(2 * d * d - 1));
        EXPECT_EQ(build_double_ancilla_layout(d).num_qubits(), static_cast<size_t>(3 * d * d - 2));
    }
    EXPECT_EQ(build_windmill_layout(3).num_qubits(), 17u);
    EXPECT_EQ(build_windmill_layout(5).num_qubits(), 49u);
    EXPECT_EQ(build_windmill_layout(7).num_qubits(), 97u);
    EXPECT_EQ(build_double_ancilla_layout(3).num_qubits(), 25u);
}

TEST(layouts, degree_bounds) {
    for (int d : {3, 5, 7}) {
        for (LayoutKind kind : kKinds) {
            Layout layout = build_layout(kind, d);
            size_t max_ancilla = 0, max_data = 0;
            for (const auto &q : layout.qubits) {
                size_t deg = layout.degree(q.id);
                EXPECT_GE(deg, 1u);
                if (q.role == QubitRole::kData) {
                    max_data = std::max(max_data, deg);
                } else {
                    max_ancilla = std::max(max_ancilla, deg);
                }
            }
            EXPECT_LE(max_data, 4u);
            EXPECT_LE(max_ancilla, 5u);
        }
    }
}

TEST(layouts, windmill_pairing_is_perfect) {
    for (int d : {3, 5, 7, 9}) {
        Layout layout = build_windmill_layout(d);
        const auto &ps = layout.code.plaquettes;
        ASSERT_EQ(layout.partner.size(), ps.size());
        for (size_t i = 0; i < ps.size(); i++) {
            int j = layout.partner[i];
            ASSERT_GE(j, 0);
            EXPECT_EQ(layout.partner[j], static_cast<int>(i));
            EXPECT_NE(ps[i].type, ps[j].type);
            EXPECT_EQ(std::abs(ps[i].row - ps[j].row) + std::abs(ps[i].col - ps[j].col), 1);
        }
    }
}

TEST(layouts, schedule_is_collision_free_and_local) {
    for (int d : {3, 5, 7}) {
        for (LayoutKind kind : kKinds) {
            Layout layout = build_layout(kind, d);
            EXPECT_NO_THROW(layout.schedule.validate());
            std::set<std::pair<Qubit, Qubit>> edges(layout.connectivity.begin(), layout.connectivity.end());
            for (const auto &step : layout.schedule.steps) {
                for (const auto &ins : step) {
                    if (ins.kind == InstructionKind::kJoint) {
                        EXPECT_TRUE(edges.count({std::min(ins.q0, ins.q1), std::max(ins.q0, ins.q1)}));
                    }
                }
            }
        }
    }
}

TEST(layouts, windmill_takes_twice_the_steps) {
    for (int d : {3, 5, 7}) {
        auto w = resource_metrics(LayoutKind::kWindmill, d);
        auto b = resource_metrics(LayoutKind::kDoubleAncilla, d);
        EXPECT_EQ(w.steps_per_round, 20u);
        EXPECT_EQ(b.steps_per_round, 10u);
        EXPECT_EQ(w.steps_per_cycle, 20u * d);
        EXPECT_EQ(w.spacetime_volume, w.qubits * w.steps_per_cycle);
    }
}

TEST(layouts, code_state_has_trivial_syndrome) {
    Rng rng(31);
    for (int d : {3, 5}) {
        for (LayoutKind kind : kKinds) {
            Layout layout = build_layout(kind, d);
            for (int round = 0; round < 4; round++) {
                StabilizerState s = code_state(layout);
                auto rec = run_circuit(layout.schedule, s, &rng);
                for (bool b : syndromes(layout, rec)) {
                    EXPECT_FALSE(b);
                }
                for (const auto &p : layout.code.plaquettes) {
                    EXPECT_EQ(s.expectation(p.op()), 1);
                }
                EXPECT_EQ(s.expectation(layout.code.logical_z), 1);
            }
        }
    }
}

TEST(layouts, single_data_error_flips_neighbouring_plaquettes) {
    Rng rng(32);
    for (LayoutKind kind : kKinds) {
        Layout layout = build_layout(kind, 3);
        for (Qubit q = 0; q < layout.code.num_data(); q++) {
            for (Axis a : {Axis::X, Axis::Z}) {
                StabilizerState s = code_state(layout);
                PauliOperator e = PauliOperator::single(q, a);
                s.apply_pauli(e);
                auto syn = syndromes(layout, run_circuit(layout.schedule, s, &rng));
                for (size_t i = 0; i < layout.code.plaquettes.size(); i++) {
                    EXPECT_EQ(syn[i], !layout.code.plaquettes[i].op().commutes(e)) << q << " " << i;
                }
            }
        }
    }
}

TEST(layouts, repeated_rounds_are_stable) {
    Rng rng(33);
    for (LayoutKind kind : kKinds) {
        Layout layout = build_layout(kind, 3);
        StabilizerState s(layout.num_qubits());
        auto first = syndromes(layout, run_circuit(layout.schedule, s, &rng));
        for (int r = 0; r < 5; r++) {
            EXPECT_EQ(syndromes(layout, run_circuit(layout.schedule, s, &rng)), first);
        }
    }
}

TEST(layouts, coordinates) {
    Layout layout = build_double_ancilla_layout(3);
    std::set<std::pair<int, int>> seen;
    for (const auto &q : layout.qubits) {
        EXPECT_TRUE(seen.insert({q.x, q.y}).second);
        if (q.role == QubitRole::kData) {
            EXPECT_EQ(q.x % 4, 0);
            EXPECT_EQ(q.y % 4, 0);
            EXPECT_EQ(q.plaquette, -1);
        } else {
            EXPECT_GE(q.plaquette, 0);
        }
    }
    EXPECT_EQ(parse_layout_kind("windmill"), LayoutKind::kWindmill);
    EXPECT_EQ(parse_layout_kind(layout_kind_name(LayoutKind::kDoubleAncilla)), LayoutKind::kDoubleAncilla);
    EXPECT_THROW(parse_layout_kind("hex"), std::invalid_argument);
}
