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

#include "mbsurf/circuit.h"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mbsurf {

Instruction Instruction::single(Qubit q, Axis a, PauliOperator update) {
    Instruction ins;
    ins.kind = InstructionKind::kSingle;
    ins.q0 = q;
    ins.a0 = a;
    ins.update = std::move(update);
    return ins;
}

Instruction Instruction::joint(Qubit q0, Axis a0, Qubit q1, Axis a1, PauliOperator update) {
    if (q0 == q1) {
        throw std::invalid_argument("joint measurement needs two distinct qubits");
    }
    Instruction ins;
    ins.kind = InstructionKind::kJoint;
    ins.q0 = q0;
    ins.a0 = a0;
    ins.q1 = q1;
    ins.a1 = a1;
    ins.update = std::move(update);
    return ins;
}

Instruction Instruction::idle(Qubit q) {
    Instruction ins;
    ins.kind = InstructionKind::kIdle;
    ins.q0 = q;
    return ins;
}

PauliOperator Instruction::basis() const {
    PauliOperator p;
    if (kind == InstructionKind::kIdle) {
        return p;
    }
    p.set(q0, a0);
    if (kind == InstructionKind::kJoint) {
        p.set(q1, a1);
    }
    return p;
}

std::string Instruction::str() const {
    std::ostringstream out;
    if (kind == InstructionKind::kIdle) {
        out << "I" << q0;
        return out.str();
    }
    out << "M(" << axis_char(a0) << q0;
    if (kind == InstructionKind::kJoint) {
        out << axis_char(a1) << q1;
    }
    out << ")";
    if (has_update()) {
        out << "->" << update.unsigned_part().str().substr(1);
        if (update_ref != id) {
            out << "@m" << update_ref;
        }
    }
    return out.str();
}

MeasurementId ScheduledCircuit::add(size_t step, Instruction ins) {
    if (steps.size() <= step) {
        steps.resize(step + 1);
    }
    auto index = static_cast<uint32_t>(steps[step].size());
    if (ins.is_measurement()) {
        ins.id = static_cast<MeasurementId>(locations_.size());
        locations_.push_back({static_cast<uint32_t>(step), index});
        if (!ins.update.is_identity() && ins.update_ref == kNoMeasurement) {
            ins.update_ref = ins.id;
        }
    }
    MeasurementId id = ins.id;
    steps[step].push_back(std::move(ins));
    return id;
}

void ScheduledCircuit::add_readout(std::string readout_name, std::vector<MeasurementId> refs) {
    readouts.push_back({std::move(readout_name), std::move(refs)});
}

const Readout &ScheduledCircuit::readout(const std::string &readout_name) const {
    for (const auto &r : readouts) {
        if (r.name == readout_name) {
            return r;
        }
    }
    throw std::out_of_range("no readout named " + readout_name);
}

size_t ScheduledCircuit::count(InstructionKind kind) const {
    size_t c = 0;
    for (const auto &step : steps) {
        for (const auto &ins : step) {
            c += ins.kind == kind;
        }
    }
    return c;
}

const Instruction &ScheduledCircuit::measurement(MeasurementId id) const {
    const auto &[s, i] = locations_.at(id);
    return steps[s][i];
}

std::vector<Qubit> ScheduledCircuit::ancilla_qubits() const {
    std::vector<Qubit> out;
    for (Qubit q = 0; q < num_qubits; q++) {
        if (std::find(data_qubits.begin(), data_qubits.end(), q) == data_qubits.end()) {
            out.push_back(q);
        }
    }
    return out;
}

void ScheduledCircuit::validate() const {
    auto fail = [&](const std::string &why) {
        throw std::logic_error(name + ": " + why);
    };
    for (size_t s = 0; s < steps.size(); s++) {
        std::vector<int> owner(num_qubits, -1);
        for (size_t i = 0; i < steps[s].size(); i++) {
            const Instruction &ins = steps[s][i];
            for (size_t k = 0; k < ins.arity(); k++) {
                Qubit q = ins.qubit(k);
                if (q >= num_qubits) {
                    fail("qubit " + std::to_string(q) + " out of range");
                }
                if (owner[q] >= 0) {
                    fail("qubit " + std::to_string(q) + " used twice in step " + std::to_string(s));
                }
                owner[q] = static_cast<int>(i);
            }
        }
        for (size_t i = 0; i < steps[s].size(); i++) {
            const Instruction &ins = steps[s][i];
            if (!ins.has_update()) {
                continue;
            }
            if (ins.update_ref >= num_measurements()) {
                fail("invalid update reference");
            }
            if (ins.update_ref != ins.id && step_of(ins.update_ref) >= s) {
                fail("update in step " + std::to_string(s) + " references a later outcome");
            }
            if (ins.update.span() > num_qubits) {
                fail("update out of range");
            }
            for (const auto &[q, a] : ins.update.terms()) {
                if (owner[q] >= 0 && owner[q] != static_cast<int>(i) && steps[s][owner[q]].is_measurement()) {
                    fail("update " + ins.str() + " collides with a measurement in step " + std::to_string(s));
                }
            }
        }
    }
    for (const auto &r : readouts) {
        for (MeasurementId m : r.refs) {
            if (m >= num_measurements()) {
                fail("readout " + r.name + " has an invalid reference");
            }
        }
    }
    if (target_gate.has_value() && target_gate->num_qubits() != num_qubits) {
        fail("target gate size mismatch");
    }
}

PauliOperator FaultSite::pauli(Fault f) const {
    PauliOperator p;
    p.set(q0, f.pauli(0));
    if (kind == InstructionKind::kJoint) {
        p.set(q1, f.pauli(1));
    }
    return p;
}

std::vector<FaultSite> enumerate_fault_sites(const ScheduledCircuit &circuit) {
    std::vector<FaultSite> sites;
    std::vector<uint8_t> touched(circuit.num_qubits);
    for (size_t s = 0; s < circuit.steps.size(); s++) {
        std::fill(touched.begin(), touched.end(), 0);
        for (size_t i = 0; i < circuit.steps[s].size(); i++) {
            const Instruction &ins = circuit.steps[s][i];
            FaultSite site;
            site.location = {static_cast<uint32_t>(s), ins.q0};
            site.kind = ins.kind;
            site.q0 = ins.q0;
            site.q1 = ins.q1;
            site.index = static_cast<int32_t>(i);
            sites.push_back(site);
            for (size_t k = 0; k < ins.arity(); k++) {
                touched[ins.qubit(k)] = 1;
            }
        }
        for (Qubit q = 0; q < circuit.num_qubits; q++) {
            if (!touched[q]) {
                FaultSite site;
                site.location = {static_cast<uint32_t>(s), q};
                site.kind = InstructionKind::kIdle;
                site.q0 = q;
                sites.push_back(site);
            }
        }
    }
    return sites;
}

std::vector<std::pair<FaultLocation, Fault>> enumerate_faults(const ScheduledCircuit &circuit) {
    std::vector<std::pair<FaultLocation, Fault>> out;
    for (const auto &site : enumerate_fault_sites(circuit)) {
        int n = site.num_bits();
        for (int b = 1; b < (1 << n); b++) {
            out.push_back({site.location, Fault{static_cast<uint8_t>(b)}});
        }
    }
    return out;
}

bool MeasurementRecord::parity(const std::vector<MeasurementId> &refs) const {
    bool p = false;
    for (MeasurementId m : refs) {
        if (!recorded.at(m)) {
            throw std::logic_error("parity over an unrecorded outcome");
        }
        p ^= bits[m] != 0;
    }
    return p;
}

MeasurementRecord run_circuit(const ScheduledCircuit &circuit, StabilizerState &state, Rng *rng,
                              const RunOptions &options) {
    if (circuit.num_qubits > state.num_qubits()) {
        throw std::invalid_argument("circuit needs more qubits than the state has");
    }
    MeasurementRecord record;
    record.bits.assign(circuit.num_measurements(), 0);
    record.recorded.assign(circuit.num_measurements(), 0);
    std::vector<const Fault *> step_faults;
    for (size_t s = 0; s < circuit.steps.size(); s++) {
        const auto &step = circuit.steps[s];
        for (const auto &ins : step) {
            if (!ins.is_measurement()) {
                continue;
            }
            std::optional<bool> forced;
            if (options.forced != nullptr && ins.id < options.forced->size()) {
                forced = (*options.forced)[ins.id];
            }
            bool m = state.measure(ins.basis(), forced, rng);
            if (options.faults != nullptr) {
                auto it = options.faults->find({static_cast<uint32_t>(s), ins.q0});
                if (it != options.faults->end()) {
                    m ^= it->second.flip(ins.arity());
                }
            }
            record.bits[ins.id] = m;
            record.recorded[ins.id] = 1;
            record.order.push_back(ins.id);
        }
        for (const auto &ins : step) {
            if (!ins.has_update()) {
                continue;
            }
            if (!record.recorded[ins.update_ref]) {
                throw std::logic_error("update references a not-yet-recorded outcome");
            }
            if (record.bits[ins.update_ref]) {
                state.apply_pauli(ins.update);
            }
        }
        if (options.faults != nullptr) {
            auto lo = options.faults->lower_bound({static_cast<uint32_t>(s), 0});
            auto hi = options.faults->lower_bound({static_cast<uint32_t>(s) + 1, 0});
            for (auto it = lo; it != hi; ++it) {
                Qubit q = it->first.qubit;
                const Instruction *owner = nullptr;
                for (const auto &ins : step) {
                    if (ins.q0 == q) {
                        owner = &ins;
                    }
                }
                PauliOperator p;
                p.set(q, it->second.pauli(0));
                if (owner != nullptr && owner->kind == InstructionKind::kJoint) {
                    p.set(owner->q1, it->second.pauli(1));
                }
                state.apply_pauli(p);
            }
        }
    }
    return record;
}

void PauliFrame::apply(const PauliOperator &p) {
    for (const auto &[q, a] : p.terms()) {
        bits_[q] ^= static_cast<uint8_t>(a);
    }
}

bool PauliFrame::anticommutes(const PauliOperator &p) const {
    bool anti = false;
    for (const auto &[q, a] : p.terms()) {
        anti ^= axes_anticommute(static_cast<Axis>(bits_[q]), a);
    }
    return anti;
}

bool PauliFrame::anticommutes(const Instruction &ins) const {
    bool anti = axes_anticommute(static_cast<Axis>(bits_[ins.q0]), ins.a0);
    if (ins.kind == InstructionKind::kJoint) {
        anti ^= axes_anticommute(static_cast<Axis>(bits_[ins.q1]), ins.a1);
    }
    return anti;
}

bool PauliFrame::is_identity() const {
    return std::all_of(bits_.begin(), bits_.end(), [](uint8_t b) {
        return b == 0;
    });
}

PauliOperator PauliFrame::to_pauli() const {
    PauliOperator p;
    for (size_t q = 0; q < bits_.size(); q++) {
        p.set(static_cast<Qubit>(q), static_cast<Axis>(bits_[q]));
    }
    return p;
}

}  // namespace mbsurf
