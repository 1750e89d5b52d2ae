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

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "mbsurf/gadgets.h"

namespace mbsurf {

namespace {

void check_distance(int d) {
    if (d < 3 || d % 2 == 0) {
        throw std::invalid_argument("distance must be odd and at least 3, got " + std::to_string(d));
    }
}

// Stroke slot of a data qubit relative to its plaquette cell:
// X plaquettes go NW, NE, SW, SE; Z plaquettes NW, SW, NE, SE.
int stroke_slot(Axis type, int dr, int dc) {
    if (type == Axis::X) {
        return 2 * dr + dc;
    }
    return 2 * dc + dr;
}

// Local step (within a ten-step window) at which each slot is measured.
constexpr int kSlotStep[4] = {1, 3, 6, 8};

// Copies `gadget` into `dst` with qubits relabelled and steps shifted.
std::vector<MeasurementId> place(ScheduledCircuit &dst, const ScheduledCircuit &gadget, const std::vector<Qubit> &map,
                                 size_t offset) {
    std::vector<MeasurementId> ids(gadget.num_measurements(), kNoMeasurement);
    for (size_t s = 0; s < gadget.num_steps(); s++) {
        for (const Instruction &ins : gadget.steps[s]) {
            Instruction copy = ins;
            copy.q0 = map.at(ins.q0);
            copy.q1 = ins.kind == InstructionKind::kJoint ? map.at(ins.q1) : 0;
            copy.update = ins.update.remapped(map);
            copy.id = kNoMeasurement;
            if (ins.update_ref == ins.id) {
                copy.update_ref = kNoMeasurement;
            } else if (ins.update_ref != kNoMeasurement) {
                copy.update_ref = ids.at(ins.update_ref);
            }
            MeasurementId id = dst.add(s + offset, copy);
            if (ins.is_measurement()) {
                ids[ins.id] = id;
            }
        }
    }
    std::vector<MeasurementId> readout;
    for (MeasurementId m : gadget.readout(kResultReadout).refs) {
        readout.push_back(ids.at(m));
    }
    return readout;
}

// Plaquette gadget in its own frame: data 0..w-1, helper w, control w+1.
ScheduledCircuit plaquette_gadget(const Plaquette &p) {
    int w = static_cast<int>(p.support.size());
    ScheduledCircuit g = weight_n_gadget(w);
    if (p.type == Axis::Z) {
        PauliOperator target;
        for (int i = 0; i < w; i++) {
            target.set(static_cast<Qubit>(i), Axis::Z);
        }
        g = basis_transform(g, target);
    }
    return g;
}

// Window offset so that every data qubit is touched at its stroke time.
size_t window_offset(const SurfaceCode &code, const Plaquette &p) {
    std::vector<int> slots;
    for (Qubit q : p.support) {
        int r = static_cast<int>(q) / code.distance;
        int c = static_cast<int>(q) % code.distance;
        slots.push_back(stroke_slot(p.type, r - p.row, c - p.col));
    }
    if (!p.is_boundary()) {
        return 0;
    }
    if (slots[0] == 0 && slots[1] == 1) {
        return 0;
    }
    if (slots[0] == 2 && slots[1] == 3) {
        return 5;
    }
    throw std::logic_error("boundary plaquette with unexpected stroke slots");
}

// Deterministic perfect matching of X plaquettes to adjacent Z plaquettes.
std::vector<int> pair_plaquettes(const SurfaceCode &code) {
    const auto &ps = code.plaquettes;
    std::vector<int> partner(ps.size(), -1);
    std::vector<std::vector<int>> adj(ps.size());
    for (size_t i = 0; i < ps.size(); i++) {
        if (ps[i].type != Axis::X) {
            continue;
        }
        for (size_t j = 0; j < ps.size(); j++) {
            if (ps[j].type == Axis::Z && std::abs(ps[i].row - ps[j].row) + std::abs(ps[i].col - ps[j].col) == 1) {
                adj[i].push_back(static_cast<int>(j));
            }
        }
    }
    std::vector<char> seen;
    std::function<bool(int)> augment = [&](int x) {
        for (int z : adj[x]) {
            if (seen[z]) {
                continue;
            }
            seen[z] = 1;
            if (partner[z] < 0 || augment(partner[z])) {
                partner[z] = x;
                partner[x] = z;
                return true;
            }
        }
        return false;
    };
    for (size_t i = 0; i < ps.size(); i++) {
        if (ps[i].type != Axis::X) {
            continue;
        }
        seen.assign(ps.size(), 0);
        if (!augment(static_cast<int>(i))) {
            throw std::logic_error("no perfect plaquette pairing");
        }
    }
    // Partners of X plaquettes may be stale after augmenting paths; rebuild.
    for (size_t j = 0; j < ps.size(); j++) {
        if (ps[j].type == Axis::Z) {
            partner[partner[j]] = static_cast<int>(j);
        }
    }
    return partner;
}

Layout assemble(LayoutKind kind, int d) {
    Layout layout;
    layout.kind = kind;
    layout.staging = kind == LayoutKind::kWindmill ? Staging::kTwoStage : Staging::kSimultaneous;
    layout.code = build_surface_code(d);
    const SurfaceCode &code = layout.code;
    const size_t nd = code.num_data();
    const size_t np = code.plaquettes.size();
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) {
            layout.qubits.push_back({code.data(r, c), QubitRole::kData, 4 * c, 4 * r, -1});
        }
    }
    std::vector<Qubit> helper(np), control(np);
    if (kind == LayoutKind::kWindmill) {
        layout.partner = pair_plaquettes(code);
        for (size_t i = 0; i < np; i++) {
            const Plaquette &p = code.plaquettes[i];
            Qubit a = static_cast<Qubit>(nd + i);
            layout.qubits.push_back({a, QubitRole::kAncilla, 4 * p.col + 2, 4 * p.row + 2, static_cast<int>(i)});
            helper[i] = a;
        }
        for (size_t i = 0; i < np; i++) {
            control[i] = helper[layout.partner[i]];
        }
    } else {
        for (size_t i = 0; i < np; i++) {
            const Plaquette &p = code.plaquettes[i];
            Qubit h = static_cast<Qubit>(nd + 2 * i);
            layout.qubits.push_back({h, QubitRole::kAncilla, 4 * p.col + 2, 4 * p.row + 2, static_cast<int>(i)});
            layout.qubits.push_back({h + 1, QubitRole::kAncilla, 4 * p.col + 3, 4 * p.row + 2, static_cast<int>(i)});
            helper[i] = h;
            control[i] = h + 1;
        }
    }

    std::vector<std::pair<Qubit, Qubit>> edges;
    auto connect = [&](Qubit a, Qubit b) {
        edges.push_back({std::min(a, b), std::max(a, b)});
    };
    ScheduledCircuit round(layout_kind_name(kind) + "_d" + std::to_string(d) + "_round", layout.qubits.size());
    layout.syndrome_refs.resize(np);
    // Two stages for the windmill (X then Z); one shared stage otherwise.
    for (Axis stage : {Axis::X, Axis::Z}) {
        size_t stage_offset = (kind == LayoutKind::kWindmill && stage == Axis::Z) ? 10 : 0;
        for (size_t i = 0; i < np; i++) {
            const Plaquette &p = code.plaquettes[i];
            if (p.type != stage) {
                continue;
            }
            std::vector<Qubit> map(p.support.begin(), p.support.end());
            map.push_back(helper[i]);
            map.push_back(control[i]);
            for (Qubit q : p.support) {
                connect(helper[i], q);
            }
            connect(helper[i], control[i]);
            layout.syndrome_refs[i] = place(round, plaquette_gadget(p), map, stage_offset + window_offset(code, p));
            round.add_readout(std::string(1, axis_char(p.type)) + std::to_string(i), layout.syndrome_refs[i]);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    layout.connectivity = edges;
    for (Qubit q = 0; q < nd; q++) {
        round.data_qubits.push_back(q);
    }
    round.validate();
    for (const auto &step : round.steps) {
        for (const auto &ins : step) {
            if (ins.kind == InstructionKind::kJoint && !layout.connected(ins.q0, ins.q1)) {
                throw std::logic_error("joint measurement off the connectivity graph");
            }
        }
    }
    layout.schedule = std::move(round);
    return layout;
}

}  // namespace

PauliOperator Plaquette::op() const {
    PauliOperator p;
    for (Qubit q : support) {
        p.set(q, type);
    }
    return p;
}

std::vector<size_t> SurfaceCode::plaquettes_of(Axis type) const {
    std::vector<size_t> out;
    for (size_t i = 0; i < plaquettes.size(); i++) {
        if (plaquettes[i].type == type) {
            out.push_back(i);
        }
    }
    return out;
}

SurfaceCode build_surface_code(int d) {
    check_distance(d);
    SurfaceCode code;
    code.distance = d;
    for (int pr = -1; pr < d; pr++) {
        for (int pc = -1; pc < d; pc++) {
            Axis type;
            bool bulk = pr >= 0 && pc >= 0 && pr < d - 1 && pc < d - 1;
            if (bulk) {
                type = (pr + pc) % 2 == 0 ? Axis::X : Axis::Z;
            } else if (pr == -1 && pc >= 0 && pc < d - 1 && pc % 2 == 1) {
                type = Axis::X;
            } else if (pr == d - 1 && pc >= 0 && pc < d - 1 && pc % 2 == 0) {
                type = Axis::X;
            } else if (pc == -1 && pr >= 0 && pr < d - 1 && pr % 2 == 0) {
                type = Axis::Z;
            } else if (pc == d - 1 && pr >= 0 && pr < d - 1 && pr % 2 == 1) {
                type = Axis::Z;
            } else {
                continue;
            }
            Plaquette p;
            p.type = type;
            p.row = pr;
            p.col = pc;
            std::vector<std::pair<int, Qubit>> slotted;
            for (int dr = 0; dr < 2; dr++) {
                for (int dc = 0; dc < 2; dc++) {
                    int r = pr + dr, c = pc + dc;
                    if (r >= 0 && r < d && c >= 0 && c < d) {
                        slotted.push_back({stroke_slot(type, dr, dc), code.data(r, c)});
                    }
                }
            }
            std::sort(slotted.begin(), slotted.end());
            for (const auto &[slot, q] : slotted) {
                p.support.push_back(q);
            }
            code.plaquettes.push_back(std::move(p));
        }
    }
    for (int i = 0; i < d; i++) {
        code.logical_z.set(code.data(0, i), Axis::Z);
        code.logical_x.set(code.data(i, 0), Axis::X);
    }
    return code;
}

std::string layout_kind_name(LayoutKind kind) {
    return kind == LayoutKind::kWindmill ? "windmill" : "double_ancilla";
}

LayoutKind parse_layout_kind(const std::string &name) {
    if (name == "windmill") {
        return LayoutKind::kWindmill;
    }
    if (name == "double_ancilla" || name == "double-ancilla" || name == "double") {
        return LayoutKind::kDoubleAncilla;
    }
    throw std::invalid_argument("unknown layout: " + name);
}

size_t Layout::degree(Qubit q) const {
    size_t deg = 0;
    for (const auto &[a, b] : connectivity) {
        deg += (a == q) + (b == q);
    }
    return deg;
}

bool Layout::connected(Qubit a, Qubit b) const {
    std::pair<Qubit, Qubit> e{std::min(a, b), std::max(a, b)};
    return std::binary_search(connectivity.begin(), connectivity.end(), e);
}

Layout build_windmill_layout(int d) {
    return assemble(LayoutKind::kWindmill, d);
}

Layout build_double_ancilla_layout(int d) {
    return assemble(LayoutKind::kDoubleAncilla, d);
}

Layout build_layout(LayoutKind kind, int d) {
    return assemble(kind, d);
}

ScheduledCircuit full_cycle_circuit(const Layout &layout) {
    return layout.schedule;
}

ResourceMetrics resource_metrics(const Layout &layout, int d) {
    ResourceMetrics m;
    m.qubits = layout.num_qubits();
    m.steps_per_round = layout.schedule.num_steps();
    m.steps_per_cycle = m.steps_per_round * static_cast<size_t>(d);
    m.spacetime_volume = m.qubits * m.steps_per_cycle;
    return m;
}

ResourceMetrics resource_metrics(LayoutKind kind, int d) {
    return resource_metrics(build_layout(kind, d), d);
}

}  // namespace mbsurf
