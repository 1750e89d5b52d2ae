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

#ifndef MBSURF_STABILIZER_STATE_H
#define MBSURF_STABILIZER_STATE_H

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "mbsurf/pauli.h"

namespace mbsurf {

using Rng = std::mt19937_64;

/// Image of X_q and Z_q under a Clifford unitary, for every qubit q.
struct CliffordMap {
    std::vector<PauliOperator> x_images;
    std::vector<PauliOperator> z_images;

    static CliffordMap identity(size_t num_qubits);
    size_t num_qubits() const {
        return x_images.size();
    }
    /// Image of an arbitrary Pauli, with phases tracked.
    PauliOperator conjugate(const PauliOperator &p) const;

    static CliffordMap cnot(size_t num_qubits, Qubit control, Qubit target);
    static CliffordMap swap(size_t num_qubits, Qubit a, Qubit b);
    static CliffordMap hadamard(size_t num_qubits, Qubit q);
    /// Composition: first `this`, then `next`.
    CliffordMap then(const CliffordMap &next) const;
};

/// Aaronson-Gottesman tableau with destabilizers. Rows are packed bit vectors;
/// the sign bit of destabilizer rows is not meaningful.
class StabilizerState {
   public:
    /// The all-|0> state.
    explicit StabilizerState(size_t num_qubits = 0);

    /// State stabilized by the given independent commuting generators.
    static StabilizerState from_generators(size_t num_qubits, const std::vector<PauliOperator> &generators);
    /// Random state from a randomized measurement-and-Pauli sequence.
    static StabilizerState random(size_t num_qubits, Rng &rng);

    size_t num_qubits() const {
        return n_;
    }

    /// Measures `basis` (a Hermitian Pauli, possibly signed). Returns the
    /// outcome bit m meaning eigenvalue (-1)^m. `forced` only matters when the
    /// outcome is random.
    bool measure(const PauliOperator &basis, std::optional<bool> forced, Rng *rng);
    bool measure(const PauliOperator &basis, Rng &rng) {
        return measure(basis, std::nullopt, &rng);
    }
    bool measure_forced(const PauliOperator &basis, bool outcome) {
        return measure(basis, outcome, nullptr);
    }

    void apply_pauli(const PauliOperator &p);
    void apply_clifford(const CliffordMap &map);

    /// +1 or -1 if +-p is in the stabilizer group, 0 otherwise.
    int expectation(const PauliOperator &p) const;

    std::vector<PauliOperator> generators() const;

    /// Reduced to a canonical row-echelon signed generator list.
    std::vector<PauliOperator> canonical_generators() const;

   private:
    size_t n_;
    size_t words_;
    // 2n + 1 rows (destabilizers, stabilizers, scratch), each `words_` wide.
    std::vector<uint64_t> xs_;
    std::vector<uint64_t> zs_;
    std::vector<uint8_t> rs_;

    uint64_t *x(size_t row) {
        return xs_.data() + row * words_;
    }
    uint64_t *z(size_t row) {
        return zs_.data() + row * words_;
    }
    const uint64_t *x(size_t row) const {
        return xs_.data() + row * words_;
    }
    const uint64_t *z(size_t row) const {
        return zs_.data() + row * words_;
    }
    void check_range(const PauliOperator &p) const;
    void load(size_t row, const PauliOperator &p);
    PauliOperator row_pauli(size_t row) const;
    bool row_anticommutes(size_t row, const PauliOperator &p) const;
    void rowmult(size_t target, size_t source);
    void clear_row(size_t row);
};

/// True iff both states have the same signed stabilizer group.
bool states_equivalent(const StabilizerState &a, const StabilizerState &b);

PauliOperator multiply(const PauliOperator &a, const PauliOperator &b);

}  // namespace mbsurf

#endif
