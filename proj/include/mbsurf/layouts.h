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

#ifndef MBSURF_LAYOUTS_H
#define MBSURF_LAYOUTS_H

#include <string>
#include <utility>
#include <vector>

#include "mbsurf/circuit.h"

namespace mbsurf {

struct Plaquette {
    /// Axis::X or Axis::Z.
    Axis type = Axis::X;
    /// Plaquette cell (row, col); boundary cells sit at -1 or d-1.
    int row = 0;
    int col = 0;
    /// Data qubits in measurement order (Z stroke for X type, N stroke for Z type).
    std::vector<Qubit> support;

    bool is_boundary() const {
        return support.size() == 2;
    }
    PauliOperator op() const;
};

/// Rotated surface code on a d x d grid. Data qubit (r, c) has id r*d + c.
/// Z_L runs along row 0 and X_L along column 0.
struct SurfaceCode {
    int distance = 0;
    std::vector<Plaquette> plaquettes;
    PauliOperator logical_x;
    PauliOperator logical_z;

    size_t num_data() const {
        return static_cast<size_t>(distance) * distance;
    }
    Qubit data(int r, int c) const {
        return static_cast<Qubit>(r * distance + c);
    }
    /// Indices into `plaquettes` of the given type, in order.
    std::vector<size_t> plaquettes_of(Axis type) const;
};

SurfaceCode build_surface_code(int d);

enum class LayoutKind { kWindmill, kDoubleAncilla };
enum class Staging { kTwoStage, kSimultaneous };
enum class QubitRole { kData, kAncilla };

std::string layout_kind_name(LayoutKind kind);
LayoutKind parse_layout_kind(const std::string &name);

struct LayoutQubit {
    Qubit id = 0;
    QubitRole role = QubitRole::kData;
    /// Grid position; data qubits sit on multiples of 4.
    int x = 0;
    int y = 0;
    /// Owning plaquette for ancillas, -1 for data.
    int plaquette = -1;
};

struct Layout {
    LayoutKind kind = LayoutKind::kWindmill;
    Staging staging = Staging::kTwoStage;
    SurfaceCode code;
    std::vector<LayoutQubit> qubits;
    std::vector<std::pair<Qubit, Qubit>> connectivity;
    /// One syndrome-extraction round.
    ScheduledCircuit schedule;
    /// Readout refs of each plaquette within `schedule`.
    std::vector<std::vector<MeasurementId>> syndrome_refs;
    /// Windmill pairing of plaquettes (partner plaquette index); empty otherwise.
    std::vector<int> partner;

    size_t num_qubits() const {
        return qubits.size();
    }
    size_t num_ancillas() const {
        return qubits.size() - code.num_data();
    }
    size_t degree(Qubit q) const;
    bool connected(Qubit a, Qubit b) const;
};

Layout build_windmill_layout(int d);
Layout build_double_ancilla_layout(int d);
Layout build_layout(LayoutKind kind, int d);

/// The round schedule; syndrome bits are exposed as readouts named after
/// the plaquette ("X0", "Z3", ...). Idles are implicit.
ScheduledCircuit full_cycle_circuit(const Layout &layout);

struct ResourceMetrics {
    size_t qubits = 0;
    size_t steps_per_round = 0;
    /// d rounds.
    size_t steps_per_cycle = 0;
    size_t spacetime_volume = 0;
};

ResourceMetrics resource_metrics(const Layout &layout, int d);
ResourceMetrics resource_metrics(LayoutKind kind, int d);

}  // namespace mbsurf

#endif
