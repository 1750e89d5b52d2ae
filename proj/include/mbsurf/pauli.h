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

#ifndef MBSURF_PAULI_H
#define MBSURF_PAULI_H

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mbsurf {

using Qubit = uint32_t;

/// Single-qubit Pauli axis. Bit 0 is the X component, bit 1 the Z component,
/// so Y = X | Z as a symplectic vector.
enum class Axis : uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

char axis_char(Axis a);
Axis axis_from_char(char c);
inline bool axes_anticommute(Axis a, Axis b) {
    uint8_t x = static_cast<uint8_t>(a), y = static_cast<uint8_t>(b);
    return (((x & 1) & (y >> 1)) ^ ((x >> 1) & (y & 1))) != 0;
}

/// Sparse multi-qubit Pauli operator i^phase * prod_q P_q.
///
/// Terms are kept sorted by qubit with no identity factors, so equality is
/// structural. Hermitian operators carry phase 0 (+1) or 2 (-1).
class PauliOperator {
   public:
    PauliOperator() = default;
    PauliOperator(std::initializer_list<std::pair<Qubit, Axis>> terms, bool negative = false);

    static PauliOperator single(Qubit q, Axis a);
    /// Parses forms like "X0*Z3", "-Y1 Y2", "+X0X1" or "I".
    static PauliOperator from_string(std::string_view text);

    Axis axis(Qubit q) const;
    /// Replaces the factor on q (phase untouched).
    void set(Qubit q, Axis a);

    const std::vector<std::pair<Qubit, Axis>> &terms() const {
        return terms_;
    }
    size_t weight() const {
        return terms_.size();
    }
    bool is_identity() const {
        return terms_.empty();
    }
    /// Exponent k of the i^k prefactor, in [0, 4).
    uint8_t phase() const {
        return phase_;
    }
    bool is_hermitian() const {
        return (phase_ & 1) == 0;
    }
    /// +1 or -1. Throws for anti-Hermitian operators.
    int sign() const;
    void negate() {
        phase_ = (phase_ + 2) & 3;
    }
    /// Multiplies by i^k.
    void add_phase(uint8_t k) {
        phase_ = (phase_ + k) & 3;
    }
    /// Same support with phase reset to +1.
    PauliOperator unsigned_part() const;
    /// Largest qubit index plus one (0 for the identity).
    Qubit span() const;

    bool commutes(const PauliOperator &other) const;
    PauliOperator operator*(const PauliOperator &other) const;
    PauliOperator &operator*=(const PauliOperator &other);
    PauliOperator operator-() const;
    bool operator==(const PauliOperator &other) const = default;

    /// Relabels qubits through `map` (map[q] is the new index of q).
    PauliOperator remapped(const std::vector<Qubit> &map) const;

    std::string str() const;

   private:
    std::vector<std::pair<Qubit, Axis>> terms_;
    uint8_t phase_ = 0;
};

std::ostream &operator<<(std::ostream &out, const PauliOperator &p);

}  // namespace mbsurf

#endif
