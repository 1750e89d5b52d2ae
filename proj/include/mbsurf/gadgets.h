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

#ifndef MBSURF_GADGETS_H
#define MBSURF_GADGETS_H

#include <string>
#include <vector>

#include "mbsurf/circuit.h"

namespace mbsurf {

/// Name of the readout carrying a measurement gadget's result.
inline constexpr const char *kResultReadout = "result";

// Catalog. Unless stated otherwise ancillas are assumed to start in |0>.

/// CNOT from qubit 0 to qubit 2 through ancilla 1. Works for any ancilla state.
ScheduledCircuit cnot_gadget();
/// C X X with targets 0, 1, ancilla 2 and control 3.
ScheduledCircuit cxx_gadget();
/// X^4 on qubits 0..3 from four CNOT gadgets; helper 4, control ancilla 5.
ScheduledCircuit weight4_naive();
/// X^4 on qubits 0..3 from two C X X blocks; helper 4, control ancilla 5.
/// The helper's initial reset is omitted (it must start in a Z eigenstate).
ScheduledCircuit weight4_compressed();
/// X^2 on qubits 0, 1 via one C X X block; helper 2, control ancilla 3.
ScheduledCircuit weight2_boundary_gadget();
/// X^n on qubits 0..n-1 with helper n and control ancilla n+1.
ScheduledCircuit weight_n_gadget(int n);
/// Swaps qubits 0 and 1 through ancilla 2 (any ancilla state).
ScheduledCircuit swap_gadget();

/// Relabels each data qubit by a single-qubit Clifford taking X to the
/// corresponding axis of `target`, so an X^n gadget measures `target`.
ScheduledCircuit basis_transform(const ScheduledCircuit &gadget, const PauliOperator &target);

/// Every catalog gadget, including the even/odd weight-n instances
/// exercised by the tests.
std::vector<ScheduledCircuit> gadget_catalog();

struct VerifyReport {
    bool ok = true;
    size_t inputs = 0;
    size_t branches = 0;
    std::string detail;
};

/// Compares the gadget against its ideal target on `trials` random
/// stabilizer inputs (entangled with reference qubits), enumerating outcome
/// branches exhaustively when there are at most `max_exhaustive` of them and
/// sampling `sampled_branches` otherwise.
VerifyReport verify_gadget_report(const ScheduledCircuit &gadget, size_t trials, Rng &rng,
                                  size_t max_exhaustive = 1024, size_t sampled_branches = 64);
bool verify_gadget(const ScheduledCircuit &gadget, size_t trials, Rng &rng);

}  // namespace mbsurf

#endif
