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

#include "mbsurf/gadgets.h"

#include <algorithm>
#include <stdexcept>

namespace mbsurf {

namespace {

using P = PauliOperator;
constexpr Axis X = Axis::X;
constexpr Axis Z = Axis::Z;

std::vector<Qubit> iota(Qubit n) {
    std::vector<Qubit> v(n);
    for (Qubit i = 0; i < n; i++) {
        v[i] = i;
    }
    return v;
}

PauliOperator x_all(int n) {
    PauliOperator p;
    for (int i = 0; i < n; i++) {
        p.set(static_cast<Qubit>(i), X);
    }
    return p;
}

// Appends one C X X block (control c, helper h, targets t1, t2) starting at
// `step`. The block's first helper reset is skipped when `reset` is false.
// Returns the step holding the closing helper reset.
size_t add_cxx_block(ScheduledCircuit &g, size_t step, Qubit c, Qubit h, Qubit t1, Qubit t2, bool reset) {
    if (reset) {
        g.add(step, Instruction::single(h, Z, P{{h, X}}));
        step++;
    }
    g.add(step++, Instruction::joint(h, X, t1, X, P{{h, Z}}));
    g.add(step++, Instruction::joint(c, Z, h, Z, P{{t1, X}, {h, X}}));
    g.add(step++, Instruction::joint(h, X, t2, X, P{{c, Z}, {h, Z}}));
    g.add(step, Instruction::single(h, Z, P{{t2, X}, {h, X}}));
    return step;
}

}  // namespace

ScheduledCircuit cnot_gadget() {
    // Control 0, ancilla 1, target 2.
    ScheduledCircuit g("cnot", 3);
    g.add(0, Instruction::single(1, X, P{{1, Z}}));
    g.add(1, Instruction::joint(0, Z, 1, Z, P{{1, X}}));
    g.add(2, Instruction::joint(1, X, 2, X, P{{0, Z}, {1, Z}}));
    g.add(3, Instruction::single(1, Z, P{{1, X}, {2, X}}));
    g.data_qubits = {0, 2};
    g.target_gate = CliffordMap::cnot(3, 0, 2);
    return g;
}

ScheduledCircuit cxx_gadget() {
    ScheduledCircuit g("cxx", 4);
    add_cxx_block(g, 0, 3, 2, 0, 1, true);
    g.data_qubits = {0, 1, 3};
    g.target_gate = CliffordMap::cnot(4, 3, 0).then(CliffordMap::cnot(4, 3, 1));
    return g;
}

ScheduledCircuit weight_n_gadget(int n) {
    if (n < 2) {
        throw std::invalid_argument("weight_n_gadget needs n >= 2");
    }
    Qubit h = static_cast<Qubit>(n);
    Qubit c = h + 1;
    ScheduledCircuit g("weight" + std::to_string(n), static_cast<size_t>(n) + 2);
    std::vector<MeasurementId> result;
    size_t step = 0;
    int next = 0;
    if (n % 2 == 0) {
        // The control ancilla's X preparation carries no update: its outcome
        // enters the readout parity instead.
        result.push_back(g.add(0, Instruction::single(c, X)));
        g.add(0, Instruction::single(h, Z, P{{h, X}}));
        step = add_cxx_block(g, 1, c, h, 0, 1, false);
        next = 2;
    } else {
        // Three-qubit head: the control ancilla starts in |0> and its first
        // joint measurement both prepares it and couples the first data qubit.
        result.push_back(g.add(0, Instruction::joint(c, X, 0, X)));
        g.add(1, Instruction::joint(h, X, 1, X, P{{h, Z}}));
        g.add(2, Instruction::joint(c, Z, h, Z, P{{0, X}, {c, X}}));
        g.add(3, Instruction::joint(h, X, 2, X, P{{h, Z}, {c, Z}}));
        g.add(4, Instruction::single(h, Z, P{{2, X}, {h, X}}));
        step = 4;
        next = 3;
    }
    for (; next < n; next += 2) {
        step = add_cxx_block(g, step + 1, c, h, static_cast<Qubit>(next), static_cast<Qubit>(next + 1), true);
    }
    result.push_back(g.add(step, Instruction::single(c, X)));
    g.add_readout(kResultReadout, result);
    g.data_qubits = iota(static_cast<Qubit>(n));
    g.target_measurement = x_all(n);
    return g;
}

ScheduledCircuit weight4_compressed() {
    ScheduledCircuit g("weight4_compressed", 6);
    std::vector<MeasurementId> result;
    result.push_back(g.add(0, Instruction::single(5, X)));
    size_t step = add_cxx_block(g, 1, 5, 4, 0, 1, false);
    step = add_cxx_block(g, step + 1, 5, 4, 2, 3, true);
    result.push_back(g.add(step, Instruction::single(5, X)));
    g.add_readout(kResultReadout, result);
    g.data_qubits = iota(4);
    g.target_measurement = x_all(4);
    return g;
}

ScheduledCircuit weight2_boundary_gadget() {
    ScheduledCircuit g = weight_n_gadget(2);
    g.name = "weight2_boundary";
    return g;
}

ScheduledCircuit weight4_naive() {
    // Four CNOT gadgets from control ancilla c = 5 through helper b = 4.
    ScheduledCircuit g("weight4_naive", 6);
    const Qubit b = 4, c = 5;
    std::vector<MeasurementId> result;
    result.push_back(g.add(0, Instruction::single(c, X)));
    size_t step = 0;
    for (Qubit t = 0; t < 4; t++) {
        if (t > 0) {
            step++;
        }
        g.add(step, Instruction::single(b, X, P{{b, Z}}));
        g.add(step + 1, Instruction::joint(c, Z, b, Z, P{{b, X}}));
        g.add(step + 2, Instruction::joint(b, X, t, X, P{{c, Z}, {b, Z}}));
        g.add(step + 3, Instruction::single(b, Z, P{{b, X}, {t, X}}));
        step += 3;
    }
    result.push_back(g.add(step, Instruction::single(c, X)));
    g.add_readout(kResultReadout, result);
    g.data_qubits = iota(4);
    g.target_measurement = x_all(4);
    return g;
}

ScheduledCircuit swap_gadget() {
    ScheduledCircuit g("swap", 3);
    g.add(0, Instruction::single(2, X, P{{2, Z}}));
    g.add(1, Instruction::joint(0, X, 2, Z, P{{2, X}}));
    g.add(2, Instruction::joint(0, Z, 1, Z, P{{0, X}, {2, Z}}));
    g.add(3, Instruction::joint(1, X, 2, Z, P{{0, Z}, {1, Z}}));
    g.add(4, Instruction::single(2, X, P{{1, X}, {2, Z}}));
    g.data_qubits = {0, 1};
    g.target_gate = CliffordMap::swap(3, 0, 1);
    return g;
}

ScheduledCircuit basis_transform(const ScheduledCircuit &gadget, const PauliOperator &target) {
    if (!gadget.target_measurement.has_value()) {
        throw std::invalid_argument("basis_transform needs a measurement gadget");
    }
    const PauliOperator &from = *gadget.target_measurement;
    if (from.weight() != target.weight()) {
        throw std::invalid_argument("basis_transform: target weight mismatch");
    }
    CliffordMap relabel = CliffordMap::identity(gadget.num_qubits);
    for (size_t k = 0; k < from.weight(); k++) {
        auto [q, a] = from.terms()[k];
        auto [tq, ta] = target.terms()[k];
        if (q != tq || a != X) {
            throw std::invalid_argument("basis_transform: supports must match an X-type gadget");
        }
        if (ta == Axis::Z) {
            std::swap(relabel.x_images[q], relabel.z_images[q]);
        } else if (ta == Axis::Y) {
            relabel.x_images[q] = P::single(q, Axis::Y);
            relabel.z_images[q] = -P::single(q, Axis::Z);
        }
    }
    ScheduledCircuit out = gadget;
    for (auto &step : out.steps) {
        for (auto &ins : step) {
            if (!ins.is_measurement()) {
                continue;
            }
            PauliOperator b = relabel.conjugate(ins.basis());
            if (b.sign() < 0) {
                throw std::logic_error("basis_transform produced a negated measurement basis");
            }
            ins.a0 = b.axis(ins.q0);
            if (ins.kind == InstructionKind::kJoint) {
                ins.a1 = b.axis(ins.q1);
            }
            ins.update = relabel.conjugate(ins.update).unsigned_part();
        }
    }
    PauliOperator t = relabel.conjugate(from);
    if (t.sign() != target.sign()) {
        t.negate();
    }
    out.target_measurement = t;
    std::string suffix;
    for (const auto &[q, a] : target.terms()) {
        suffix += axis_char(a);
    }
    out.name = gadget.name + "_" + suffix;
    return out;
}

std::vector<ScheduledCircuit> gadget_catalog() {
    return {cnot_gadget(),      cxx_gadget(),        weight4_naive(),     weight4_compressed(),
            weight2_boundary_gadget(), weight_n_gadget(3), weight_n_gadget(5), weight_n_gadget(6),
            swap_gadget()};
}

VerifyReport verify_gadget_report(const ScheduledCircuit &gadget, size_t trials, Rng &rng, size_t max_exhaustive,
                                  size_t sampled_branches) {
    VerifyReport report;
    auto fail = [&](const std::string &why) {
        report.ok = false;
        report.detail = gadget.name + ": " + why;
        return report;
    };
    try {
        gadget.validate();
    } catch (const std::exception &e) {
        return fail(e.what());
    }
    if (gadget.target_measurement.has_value() == gadget.target_gate.has_value()) {
        return fail("gadget must declare exactly one target");
    }
    const size_t n = gadget.num_qubits;
    const size_t total = n + gadget.data_qubits.size();
    const std::vector<Qubit> ancillas = gadget.ancilla_qubits();
    const size_t m = gadget.num_measurements();
    const bool exhaustive = m < 40 && (size_t{1} << m) <= max_exhaustive;
    const size_t branches = exhaustive ? (size_t{1} << m) : sampled_branches;

    CliffordMap gate;
    if (gadget.target_gate.has_value()) {
        gate = CliffordMap::identity(total);
        for (size_t q = 0; q < n; q++) {
            gate.x_images[q] = gadget.target_gate->x_images[q];
            gate.z_images[q] = gadget.target_gate->z_images[q];
        }
    }

    std::vector<std::optional<bool>> forced(m);
    for (size_t t = 0; t < trials; t++) {
        // Data entangled with reference qubits; ancillas in |0>.
        StabilizerState input = StabilizerState::random(total, rng);
        for (Qubit a : ancillas) {
            if (input.measure(P::single(a, Z), rng)) {
                input.apply_pauli(P::single(a, X));
            }
        }
        report.inputs++;
        for (size_t b = 0; b < branches; b++) {
            for (size_t k = 0; k < m; k++) {
                forced[k] = exhaustive ? ((b >> k) & 1) != 0 : (rng() & 1) != 0;
            }
            StabilizerState state = input;
            RunOptions options;
            options.forced = &forced;
            MeasurementRecord record = run_circuit(gadget, state, nullptr, options);
            StabilizerState oracle = input;
            if (gadget.target_measurement.has_value()) {
                bool r = record.parity(gadget.readout(kResultReadout).refs);
                int e = oracle.expectation(*gadget.target_measurement);
                if (e != 0 && (e < 0) != r) {
                    return fail("readout " + std::to_string(r) + " contradicts a deterministic target");
                }
                oracle.measure_forced(*gadget.target_measurement, r);
            } else {
                oracle.apply_clifford(gate);
            }
            for (Qubit a : ancillas) {
                bool found = false;
                for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
                    int e = state.expectation(P::single(a, ax));
                    if (e != 0) {
                        oracle.measure_forced(P::single(a, ax), e < 0);
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    return fail("ancilla " + std::to_string(a) + " left entangled");
                }
            }
            if (!states_equivalent(state, oracle)) {
                return fail("post-state differs from the ideal target");
            }
            report.branches++;
        }
    }
    return report;
}

bool verify_gadget(const ScheduledCircuit &gadget, size_t trials, Rng &rng) {
    return verify_gadget_report(gadget, trials, rng).ok;
}

}  // namespace mbsurf
