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

#include "mbsurf/pauli.h"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <stdexcept>

namespace mbsurf {

namespace {

// Phase exponent k with a*b = i^k c for single-qubit Paulis.
uint8_t product_phase(Axis a, Axis b) {
    if (a == Axis::I || b == Axis::I || a == b) {
        return 0;
    }
    // Cyclic order X -> Y -> Z -> X gives +i.
    auto idx = [](Axis p) {
        return p == Axis::X ? 0 : p == Axis::Y ? 1 : 2;
    };
    return ((idx(b) - idx(a) + 3) % 3) == 1 ? 1 : 3;
}

}  // namespace

char axis_char(Axis a) {
    switch (a) {
        case Axis::I:
            return 'I';
        case Axis::X:
            return 'X';
        case Axis::Y:
            return 'Y';
        case Axis::Z:
            return 'Z';
    }
    return '?';
}

Axis axis_from_char(char c) {
    switch (std::toupper(static_cast<unsigned char>(c))) {
        case 'I':
            return Axis::I;
        case 'X':
            return Axis::X;
        case 'Y':
            return Axis::Y;
        case 'Z':
            return Axis::Z;
    }
    throw std::invalid_argument(std::string("not a Pauli axis: ") + c);
}

PauliOperator::PauliOperator(std::initializer_list<std::pair<Qubit, Axis>> terms, bool negative) {
    for (const auto &[q, a] : terms) {
        if (axis(q) != Axis::I) {
            throw std::invalid_argument("repeated qubit in PauliOperator literal");
        }
        set(q, a);
    }
    if (negative) {
        negate();
    }
}

PauliOperator PauliOperator::single(Qubit q, Axis a) {
    PauliOperator p;
    p.set(q, a);
    return p;
}

PauliOperator PauliOperator::from_string(std::string_view text) {
    PauliOperator result;
    size_t i = 0;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
        i++;
    }
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        if (text[i] == '-') {
            result.negate();
        }
        i++;
    }
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == '*') {
            i++;
            continue;
        }
        Axis a = axis_from_char(c);
        i++;
        size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            i++;
        }
        if (start == i) {
            if (a == Axis::I) {
                continue;
            }
            throw std::invalid_argument("missing qubit index in Pauli string");
        }
        Qubit q = static_cast<Qubit>(std::stoul(std::string(text.substr(start, i - start))));
        result *= PauliOperator::single(q, a);
    }
    return result;
}

Axis PauliOperator::axis(Qubit q) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), q, [](const auto &t, Qubit v) {
        return t.first < v;
    });
    if (it != terms_.end() && it->first == q) {
        return it->second;
    }
    return Axis::I;
}

void PauliOperator::set(Qubit q, Axis a) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), q, [](const auto &t, Qubit v) {
        return t.first < v;
    });
    bool present = it != terms_.end() && it->first == q;
    if (a == Axis::I) {
        if (present) {
            terms_.erase(it);
        }
    } else if (present) {
        it->second = a;
    } else {
        terms_.insert(it, {q, a});
    }
}

int PauliOperator::sign() const {
    if (!is_hermitian()) {
        throw std::logic_error("anti-Hermitian Pauli has no real sign: " + str());
    }
    return phase_ == 0 ? +1 : -1;
}

PauliOperator PauliOperator::unsigned_part() const {
    PauliOperator r = *this;
    r.phase_ = 0;
    return r;
}

Qubit PauliOperator::span() const {
    return terms_.empty() ? 0 : terms_.back().first + 1;
}

bool PauliOperator::commutes(const PauliOperator &other) const {
    bool anti = false;
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() && b != other.terms_.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            anti ^= axes_anticommute(a->second, b->second);
            ++a;
            ++b;
        }
    }
    return !anti;
}

PauliOperator PauliOperator::operator*(const PauliOperator &other) const {
    PauliOperator r;
    r.phase_ = (phase_ + other.phase_) & 3;
    r.terms_.reserve(terms_.size() + other.terms_.size());
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            r.terms_.push_back(*a++);
        } else if (a == terms_.end() || b->first < a->first) {
            r.terms_.push_back(*b++);
        } else {
            r.phase_ = (r.phase_ + product_phase(a->second, b->second)) & 3;
            auto c = static_cast<Axis>(static_cast<uint8_t>(a->second) ^ static_cast<uint8_t>(b->second));
            if (c != Axis::I) {
                r.terms_.push_back({a->first, c});
            }
            ++a;
            ++b;
        }
    }
    return r;
}

PauliOperator &PauliOperator::operator*=(const PauliOperator &other) {
    *this = *this * other;
    return *this;
}

PauliOperator PauliOperator::operator-() const {
    PauliOperator r = *this;
    r.negate();
    return r;
}

PauliOperator PauliOperator::remapped(const std::vector<Qubit> &map) const {
    PauliOperator r;
    r.phase_ = phase_;
    for (const auto &[q, a] : terms_) {
        if (q >= map.size()) {
            throw std::out_of_range("qubit map too short");
        }
        if (r.axis(map[q]) != Axis::I) {
            throw std::invalid_argument("qubit map is not injective");
        }
        r.set(map[q], a);
    }
    return r;
}

std::string PauliOperator::str() const {
    static const char *prefix[] = {"+", "+i", "-", "-i"};
    std::string s = prefix[phase_];
    if (terms_.empty()) {
        return s + "I";
    }
    bool first = true;
    for (const auto &[q, a] : terms_) {
        if (!first) {
            s += '*';
        }
        first = false;
        s += axis_char(a);
        s += std::to_string(q);
    }
    return s;
}

std::ostream &operator<<(std::ostream &out, const PauliOperator &p) {
    return out << p.str();
}

}  // namespace mbsurf
