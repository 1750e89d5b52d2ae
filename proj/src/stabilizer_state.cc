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

#include <bit>
#include <stdexcept>
#include <string>

namespace mbsurf {

namespace {

// Solves A e = v over GF(2); returns false if inconsistent.
bool solve_gf2(std::vector<std::vector<uint8_t>> a, std::vector<uint8_t> v, size_t cols,
               std::vector<uint8_t> &out) {
    size_t rows = a.size();
    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; c++) {
        size_t p = r;
        while (p < rows && !a[p][c]) {
            p++;
        }
        if (p == rows) {
            continue;
        }
        std::swap(a[p], a[r]);
        std::swap(v[p], v[r]);
        for (size_t i = 0; i < rows; i++) {
            if (i != r && a[i][c]) {
                for (size_t k = 0; k < cols; k++) {
                    a[i][k] ^= a[r][k];
                }
                v[i] ^= v[r];
            }
        }
        pivot_col.push_back(c);
        r++;
    }
    for (size_t i = r; i < rows; i++) {
        if (v[i]) {
            return false;
        }
    }
    out.assign(cols, 0);
    for (size_t i = 0; i < r; i++) {
        out[pivot_col[i]] = v[i];
    }
    return true;
}

size_t rank_gf2(std::vector<std::vector<uint8_t>> a, size_t cols) {
    size_t r = 0;
    for (size_t c = 0; c < cols && r < a.size(); c++) {
        size_t p = r;
        while (p < a.size() && !a[p][c]) {
            p++;
        }
        if (p == a.size()) {
            continue;
        }
        std::swap(a[p], a[r]);
        for (size_t i = r + 1; i < a.size(); i++) {
            if (a[i][c]) {
                for (size_t k = 0; k < cols; k++) {
                    a[i][k] ^= a[r][k];
                }
            }
        }
        r++;
    }
    return r;
}

inline bool get_bit(const uint64_t *w, size_t q) {
    return (w[q >> 6] >> (q & 63)) & 1;
}
inline void set_bit(uint64_t *w, size_t q, bool b) {
    uint64_t m = uint64_t{1} << (q & 63);
    if (b) {
        w[q >> 6] |= m;
    } else {
        w[q >> 6] &= ~m;
    }
}

}  // namespace

PauliOperator multiply(const PauliOperator &a, const PauliOperator &b) {
    return a * b;
}

CliffordMap CliffordMap::identity(size_t num_qubits) {
    CliffordMap m;
    for (size_t q = 0; q < num_qubits; q++) {
        m.x_images.push_back(PauliOperator::single(static_cast<Qubit>(q), Axis::X));
        m.z_images.push_back(PauliOperator::single(static_cast<Qubit>(q), Axis::Z));
    }
    return m;
}

PauliOperator CliffordMap::conjugate(const PauliOperator &p) const {
    PauliOperator r;
    r.add_phase(p.phase());
    for (const auto &[q, a] : p.terms()) {
        if (q >= num_qubits()) {
            throw std::out_of_range("Clifford map does not cover qubit " + std::to_string(q));
        }
        if (a == Axis::X) {
            r *= x_images[q];
        } else if (a == Axis::Z) {
            r *= z_images[q];
        } else {
            // Y = i X Z.
            r *= x_images[q] * z_images[q];
            r.add_phase(1);
        }
    }
    return r;
}

CliffordMap CliffordMap::cnot(size_t num_qubits, Qubit control, Qubit target) {
    CliffordMap m = identity(num_qubits);
    m.x_images[control] = PauliOperator({{control, Axis::X}, {target, Axis::X}});
    m.z_images[target] = PauliOperator({{control, Axis::Z}, {target, Axis::Z}});
    return m;
}

CliffordMap CliffordMap::swap(size_t num_qubits, Qubit a, Qubit b) {
    CliffordMap m = identity(num_qubits);
    std::swap(m.x_images[a], m.x_images[b]);
    std::swap(m.z_images[a], m.z_images[b]);
    return m;
}

CliffordMap CliffordMap::hadamard(size_t num_qubits, Qubit q) {
    CliffordMap m = identity(num_qubits);
    std::swap(m.x_images[q], m.z_images[q]);
    return m;
}

CliffordMap CliffordMap::then(const CliffordMap &next) const {
    CliffordMap r;
    for (size_t q = 0; q < num_qubits(); q++) {
        r.x_images.push_back(next.conjugate(x_images[q]));
        r.z_images.push_back(next.conjugate(z_images[q]));
    }
    return r;
}

StabilizerState::StabilizerState(size_t num_qubits)
    : n_(num_qubits),
      words_((num_qubits + 63) / 64),
      xs_((2 * num_qubits + 1) * words_, 0),
      zs_((2 * num_qubits + 1) * words_, 0),
      rs_(2 * num_qubits + 1, 0) {
    for (size_t q = 0; q < n_; q++) {
        set_bit(x(q), q, true);
        set_bit(z(q + n_), q, true);
    }
}

void StabilizerState::check_range(const PauliOperator &p) const {
    if (p.span() > n_) {
        throw std::out_of_range("Pauli " + p.str() + " acts outside a " + std::to_string(n_) + "-qubit state");
    }
}

void StabilizerState::clear_row(size_t row) {
    for (size_t w = 0; w < words_; w++) {
        x(row)[w] = 0;
        z(row)[w] = 0;
    }
    rs_[row] = 0;
}

void StabilizerState::load(size_t row, const PauliOperator &p) {
    clear_row(row);
    for (const auto &[q, a] : p.terms()) {
        set_bit(x(row), q, static_cast<uint8_t>(a) & 1);
        set_bit(z(row), q, static_cast<uint8_t>(a) & 2);
    }
    rs_[row] = (p.phase() >> 1) & 1;
}

PauliOperator StabilizerState::row_pauli(size_t row) const {
    PauliOperator p;
    for (size_t q = 0; q < n_; q++) {
        uint8_t a = static_cast<uint8_t>(get_bit(x(row), q)) | (static_cast<uint8_t>(get_bit(z(row), q)) << 1);
        if (a) {
            p.set(static_cast<Qubit>(q), static_cast<Axis>(a));
        }
    }
    if (rs_[row]) {
        p.negate();
    }
    return p;
}

bool StabilizerState::row_anticommutes(size_t row, const PauliOperator &p) const {
    bool anti = false;
    for (const auto &[q, a] : p.terms()) {
        bool px = static_cast<uint8_t>(a) & 1;
        bool pz = static_cast<uint8_t>(a) & 2;
        anti ^= (get_bit(x(row), q) && pz) ^ (get_bit(z(row), q) && px);
    }
    return anti;
}

void StabilizerState::rowmult(size_t target, size_t source) {
    // target <- source * target, tracking the i^k phase.
    int phase = 2 * rs_[target] + 2 * rs_[source];
    const uint64_t *x1 = x(source);
    const uint64_t *z1 = z(source);
    uint64_t *x2 = x(target);
    uint64_t *z2 = z(target);
    for (size_t w = 0; w < words_; w++) {
        uint64_t a = x1[w], b = z1[w], c = x2[w], d = z2[w];
        uint64_t plus = (a & ~b & c & d) | (a & b & ~c & d) | (~a & b & c & ~d);
        uint64_t minus = (a & ~b & ~c & d) | (a & b & c & ~d) | (~a & b & c & d);
        phase += std::popcount(plus) - std::popcount(minus);
        x2[w] ^= a;
        z2[w] ^= b;
    }
    rs_[target] = static_cast<uint8_t>(((phase % 4 + 4) % 4) >> 1);
}

bool StabilizerState::measure(const PauliOperator &basis, std::optional<bool> forced, Rng *rng) {
    check_range(basis);
    if (basis.is_identity()) {
        throw std::invalid_argument("cannot measure the identity");
    }
    bool s = basis.sign() < 0;
    size_t p = 2 * n_;
    for (size_t i = n_; i < 2 * n_; i++) {
        if (row_anticommutes(i, basis)) {
            p = i;
            break;
        }
    }
    if (p < 2 * n_) {
        bool outcome;
        if (forced.has_value()) {
            outcome = *forced;
        } else if (rng != nullptr) {
            outcome = ((*rng)() >> 63) & 1;
        } else {
            throw std::invalid_argument("random measurement needs an rng or a forced outcome");
        }
        for (size_t i = 0; i < 2 * n_; i++) {
            if (i != p && row_anticommutes(i, basis)) {
                rowmult(i, p);
            }
        }
        size_t d = p - n_;
        for (size_t w = 0; w < words_; w++) {
            x(d)[w] = x(p)[w];
            z(d)[w] = z(p)[w];
        }
        rs_[d] = rs_[p];
        load(p, basis.unsigned_part());
        rs_[p] = outcome ^ s;
        return outcome;
    }
    size_t scratch = 2 * n_;
    clear_row(scratch);
    for (size_t i = 0; i < n_; i++) {
        if (row_anticommutes(i, basis)) {
            rowmult(scratch, i + n_);
        }
    }
    return rs_[scratch] ^ s;
}

void StabilizerState::apply_pauli(const PauliOperator &p) {
    check_range(p);
    for (size_t i = 0; i < 2 * n_; i++) {
        if (row_anticommutes(i, p)) {
            rs_[i] ^= 1;
        }
    }
}

void StabilizerState::apply_clifford(const CliffordMap &map) {
    if (map.num_qubits() != n_) {
        throw std::invalid_argument("Clifford map size mismatch");
    }
    for (size_t i = 0; i < 2 * n_; i++) {
        PauliOperator img = map.conjugate(row_pauli(i));
        if (!img.is_hermitian()) {
            throw std::logic_error("Clifford map produced a non-Hermitian image");
        }
        load(i, img);
    }
}

int StabilizerState::expectation(const PauliOperator &p) const {
    check_range(p);
    if (p.is_identity()) {
        return p.sign();
    }
    for (size_t i = n_; i < 2 * n_; i++) {
        if (row_anticommutes(i, p)) {
            return 0;
        }
    }
    StabilizerState copy = *this;
    bool m = copy.measure(p, std::nullopt, nullptr);
    return m ? -1 : +1;
}

std::vector<PauliOperator> StabilizerState::generators() const {
    std::vector<PauliOperator> g;
    for (size_t i = n_; i < 2 * n_; i++) {
        g.push_back(row_pauli(i));
    }
    return g;
}

std::vector<PauliOperator> StabilizerState::canonical_generators() const {
    std::vector<PauliOperator> rows = generators();
    // Column order: x_0..x_{n-1}, then z_0..z_{n-1}.
    auto bit = [](const PauliOperator &p, size_t col, size_t n) {
        Qubit q = static_cast<Qubit>(col % n);
        uint8_t a = static_cast<uint8_t>(p.axis(q));
        return col < n ? (a & 1) != 0 : (a & 2) != 0;
    };
    size_t r = 0;
    for (size_t col = 0; col < 2 * n_ && r < rows.size(); col++) {
        size_t p = r;
        while (p < rows.size() && !bit(rows[p], col, n_)) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[p], rows[r]);
        for (size_t i = 0; i < rows.size(); i++) {
            if (i != r && bit(rows[i], col, n_)) {
                rows[i] = rows[r] * rows[i];
            }
        }
        r++;
    }
    return rows;
}

StabilizerState StabilizerState::from_generators(size_t num_qubits, const std::vector<PauliOperator> &generators) {
    if (generators.size() != num_qubits) {
        throw std::invalid_argument("need exactly num_qubits generators");
    }
    for (size_t i = 0; i < generators.size(); i++) {
        if (!generators[i].is_hermitian()) {
            throw std::invalid_argument("generator is not Hermitian: " + generators[i].str());
        }
        for (size_t j = i + 1; j < generators.size(); j++) {
            if (!generators[i].commutes(generators[j])) {
                throw std::invalid_argument("generators do not commute");
            }
        }
    }
    std::vector<std::vector<uint8_t>> symplectic;
    for (const auto &g : generators) {
        std::vector<uint8_t> row(2 * num_qubits, 0);
        for (const auto &[q, ax] : g.terms()) {
            if (q >= num_qubits) {
                throw std::out_of_range("generator acts outside the state");
            }
            row[q] = static_cast<uint8_t>(ax) & 1;
            row[num_qubits + q] = (static_cast<uint8_t>(ax) >> 1) & 1;
        }
        symplectic.push_back(row);
    }
    if (rank_gf2(symplectic, 2 * num_qubits) != num_qubits) {
        throw std::invalid_argument("generators are not independent");
    }
    StabilizerState s(num_qubits);
    for (const auto &g : generators) {
        if (g.is_identity()) {
            throw std::invalid_argument("identity is not an independent generator");
        }
        s.measure(g, false, nullptr);
    }
    // Fix wrong signs with a Pauli anticommuting exactly with the bad generators.
    std::vector<std::vector<uint8_t>> a;
    std::vector<uint8_t> v;
    bool any = false;
    for (const auto &g : generators) {
        int e = s.expectation(g);
        if (e == 0) {
            throw std::invalid_argument("generators are not independent");
        }
        std::vector<uint8_t> row(2 * num_qubits, 0);
        for (const auto &[q, ax] : g.terms()) {
            // <g, E> = g.x . E.z + g.z . E.x ; E = (ex | ez).
            row[q] = (static_cast<uint8_t>(ax) & 2) ? 1 : 0;
            row[num_qubits + q] = (static_cast<uint8_t>(ax) & 1) ? 1 : 0;
        }
        a.push_back(row);
        v.push_back(e < 0);
        any |= e < 0;
    }
    if (any) {
        std::vector<uint8_t> e;
        if (!solve_gf2(a, v, 2 * num_qubits, e)) {
            throw std::invalid_argument("generators are not independent");
        }
        PauliOperator fix;
        for (size_t q = 0; q < num_qubits; q++) {
            uint8_t ax = e[q] | (e[num_qubits + q] << 1);
            fix.set(static_cast<Qubit>(q), static_cast<Axis>(ax));
        }
        s.apply_pauli(fix);
    }
    // Independence: the state's group must contain every generator.
    if (s.canonical_generators().size() != num_qubits) {
        throw std::logic_error("generator rank deficit");
    }
    for (const auto &g : generators) {
        if (s.expectation(g) != 1) {
            throw std::invalid_argument("generators are not independent");
        }
    }
    return s;
}

StabilizerState StabilizerState::random(size_t num_qubits, Rng &rng) {
    StabilizerState s(num_qubits);
    if (num_qubits == 0) {
        return s;
    }
    std::uniform_int_distribution<size_t> qd(0, num_qubits - 1);
    std::uniform_int_distribution<int> ad(1, 3);
    std::uniform_int_distribution<int> wd(1, std::min<int>(3, static_cast<int>(num_qubits)));
    for (size_t k = 0; k < 4 * num_qubits + 2; k++) {
        PauliOperator p;
        int w = wd(rng);
        for (int i = 0; i < w; i++) {
            p.set(static_cast<Qubit>(qd(rng)), static_cast<Axis>(ad(rng)));
        }
        if (!p.is_identity()) {
            s.measure(p, rng);
        }
    }
    PauliOperator frame;
    for (size_t q = 0; q < num_qubits; q++) {
        frame.set(static_cast<Qubit>(q), static_cast<Axis>(rng() & 3));
    }
    s.apply_pauli(frame);
    return s;
}

bool states_equivalent(const StabilizerState &a, const StabilizerState &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("states_equivalent: qubit counts differ");
    }
    return a.canonical_generators() == b.canonical_generators();
}

}  // namespace mbsurf
