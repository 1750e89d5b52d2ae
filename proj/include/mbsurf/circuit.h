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

#ifndef MBSURF_CIRCUIT_H
#define MBSURF_CIRCUIT_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbsurf/pauli.h"
#include "mbsurf/stabilizer_state.h"

namespace mbsurf {

using MeasurementId = uint32_t;
constexpr MeasurementId kNoMeasurement = UINT32_MAX;

enum class InstructionKind : uint8_t { kSingle, kJoint, kIdle };

/// One operation in a time step: a single-qubit or joint Pauli measurement
/// (with an optional conditional Pauli update) or an explicit idle.
struct Instruction {
    InstructionKind kind = InstructionKind::kIdle;
    Qubit q0 = 0;
    Qubit q1 = 0;
    Axis a0 = Axis::I;
    Axis a1 = Axis::I;
    /// Assigned when added to a circuit.
    MeasurementId id = kNoMeasurement;
    /// The update is applied iff the referenced outcome is 1. A non-identity
    /// update without a reference conditions on this instruction's outcome.
    MeasurementId update_ref = kNoMeasurement;
    PauliOperator update;

    static Instruction single(Qubit q, Axis a, PauliOperator update = {});
    static Instruction joint(Qubit q0, Axis a0, Qubit q1, Axis a1, PauliOperator update = {});
    static Instruction idle(Qubit q);

    bool is_measurement() const {
        return kind != InstructionKind::kIdle;
    }
    bool has_update() const {
        return update_ref != kNoMeasurement && !update.is_identity();
    }
    size_t arity() const {
        return kind == InstructionKind::kJoint ? 2 : 1;
    }
    Qubit qubit(size_t k) const {
        return k == 0 ? q0 : q1;
    }
    Axis axis(size_t k) const {
        return k == 0 ? a0 : a1;
    }
    PauliOperator basis() const;
    std::string str() const;
};

struct Readout {
    std::string name;
    std::vector<MeasurementId> refs;
};

/// Time-stepped measurement circuit. Qubits untouched in a step idle.
class ScheduledCircuit {
   public:
    ScheduledCircuit() = default;
    ScheduledCircuit(std::string name, size_t num_qubits) : name(std::move(name)), num_qubits(num_qubits) {
    }

    std::string name;
    size_t num_qubits = 0;
    std::vector<std::vector<Instruction>> steps;
    std::vector<Readout> readouts;
    /// Qubits the target acts on; everything else is an ancilla.
    std::vector<Qubit> data_qubits;
    /// Either a measured Pauli or a Clifford on all num_qubits qubits.
    std::optional<PauliOperator> target_measurement;
    std::optional<CliffordMap> target_gate;

    /// Appends `ins` to step `step` (growing the step list) and returns its id.
    MeasurementId add(size_t step, Instruction ins);
    void add_readout(std::string name, std::vector<MeasurementId> refs);
    const Readout &readout(const std::string &name) const;

    size_t num_steps() const {
        return steps.size();
    }
    size_t num_measurements() const {
        return locations_.size();
    }
    size_t count(InstructionKind kind) const;
    size_t count_single() const {
        return count(InstructionKind::kSingle);
    }
    size_t count_joint() const {
        return count(InstructionKind::kJoint);
    }
    const Instruction &measurement(MeasurementId id) const;
    /// Step in which measurement `id` happens.
    size_t step_of(MeasurementId id) const {
        return locations_.at(id).first;
    }
    std::vector<Qubit> ancilla_qubits() const;

    /// Throws std::logic_error describing the first violated invariant.
    void validate() const;

   private:
    std::vector<std::pair<uint32_t, uint32_t>> locations_;
};

/// A fault location: the instruction in `step` whose first qubit is `qubit`,
/// or the idle of `qubit` in `step` when no instruction touches it.
struct FaultLocation {
    uint32_t step = 0;
    Qubit qubit = 0;
    auto operator<=>(const FaultLocation &) const = default;
};

/// Element of Z_2^n. Bits (2k, 2k+1) are the (x, z) Pauli on the k-th touched
/// qubit; for measurements bit 2*arity is the outcome flip.
struct Fault {
    uint8_t bits = 0;
    Axis pauli(size_t k) const {
        return static_cast<Axis>((bits >> (2 * k)) & 3);
    }
    bool flip(size_t arity) const {
        return (bits >> (2 * arity)) & 1;
    }
    bool operator==(const Fault &) const = default;
};

/// Description of one location: its kind and touched qubits.
struct FaultSite {
    FaultLocation location;
    InstructionKind kind = InstructionKind::kIdle;
    Qubit q0 = 0;
    Qubit q1 = 0;
    /// Index into steps[step] or -1 for an implicit idle.
    int32_t index = -1;

    /// n such that the fault set is Z_2^n.
    int num_bits() const {
        return kind == InstructionKind::kJoint ? 5 : kind == InstructionKind::kSingle ? 3 : 2;
    }
    size_t arity() const {
        return kind == InstructionKind::kJoint ? 2 : 1;
    }
    /// Pauli component of `f` on the touched qubits.
    PauliOperator pauli(Fault f) const;
    bool flips(Fault f) const {
        return kind != InstructionKind::kIdle && f.flip(arity());
    }
};

using FaultMap = std::map<FaultLocation, Fault>;

/// All locations in step order; within a step, instructions then idles.
std::vector<FaultSite> enumerate_fault_sites(const ScheduledCircuit &circuit);
/// Every nontrivial fault at every location.
std::vector<std::pair<FaultLocation, Fault>> enumerate_faults(const ScheduledCircuit &circuit);

struct MeasurementRecord {
    /// Indexed by MeasurementId.
    std::vector<uint8_t> bits;
    std::vector<uint8_t> recorded;
    /// Ids in execution order.
    std::vector<MeasurementId> order;

    bool parity(const std::vector<MeasurementId> &refs) const;
};

struct RunOptions {
    const FaultMap *faults = nullptr;
    /// Forced outcomes indexed by MeasurementId (only used when random).
    const std::vector<std::optional<bool>> *forced = nullptr;
};

/// Executes the circuit on `state` in place.
MeasurementRecord run_circuit(const ScheduledCircuit &circuit, StabilizerState &state, Rng *rng,
                              const RunOptions &options = {});

/// Pauli frame over a fixed number of qubits: (x | z << 1) per qubit.
class PauliFrame {
   public:
    explicit PauliFrame(size_t num_qubits = 0) : bits_(num_qubits, 0) {
    }
    void apply(const PauliOperator &p);
    void apply(Qubit q, Axis a) {
        bits_[q] ^= static_cast<uint8_t>(a);
    }
    Axis at(Qubit q) const {
        return static_cast<Axis>(bits_[q]);
    }
    bool anticommutes(const PauliOperator &p) const;
    bool anticommutes(const Instruction &ins) const;
    size_t size() const {
        return bits_.size();
    }
    bool is_identity() const;
    PauliOperator to_pauli() const;

   private:
    std::vector<uint8_t> bits_;
};

}  // namespace mbsurf

#endif
