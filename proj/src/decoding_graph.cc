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

#include "mbsurf/decoding_graph.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "mbsurf/noise.h"

namespace mbsurf {

namespace {

// Rounds simulated per basis fault; its effect must have settled by the end.
constexpr uint32_t kHorizon = 6;

using Frame = std::vector<uint8_t>;

struct CompiledMeasurement {
    MeasurementId id;
    Qubit q0, q1;
    uint8_t a0, a1;
};

struct CompiledUpdate {
    MeasurementId ref;
    std::vector<std::pair<Qubit, uint8_t>> terms;
};

struct CompiledStep {
    std::vector<CompiledMeasurement> measurements;
    std::vector<CompiledUpdate> updates;
};

// A fault pinned to (round, step): optional outcome flip and Pauli terms.
struct Injection {
    uint32_t round;
    uint32_t step;
    MeasurementId flip;
    std::vector<std::pair<Qubit, uint8_t>> pauli;
};

bool anticommute(uint8_t frame, uint8_t axis) {
    // (x, z) symplectic product of two single-qubit Paulis.
    return ((frame & 1) & (axis >> 1)) ^ ((frame >> 1) & (axis & 1));
}

// Representative of {f, f * a} with the measured axis' component removed.
uint8_t canonical(uint8_t f, uint8_t a) {
    if (a == 3) {
        return (f == 1 || f == 2) ? 1 : 0;
    }
    return f & static_cast<uint8_t>(~a & 3);
}

// One syndrome-extraction round compiled for fast Pauli-frame propagation.
class RoundProgram {
   public:
    explicit RoundProgram(const Layout &layout) : layout_(&layout) {
        const ScheduledCircuit &c = layout.schedule;
        num_measurements_ = c.num_measurements();
        for (const auto &step : c.steps) {
            CompiledStep cs;
            for (const Instruction &ins : step) {
                cs.measurements.push_back({ins.id, ins.q0, ins.kind == InstructionKind::kJoint ? ins.q1 : ins.q0,
                                           static_cast<uint8_t>(ins.a0),
                                           static_cast<uint8_t>(ins.kind == InstructionKind::kJoint ? ins.a1 : Axis::I)});
                if (ins.has_update()) {
                    CompiledUpdate u{ins.update_ref, {}};
                    for (const auto &[q, a] : ins.update.terms()) {
                        u.terms.push_back({q, static_cast<uint8_t>(a)});
                    }
                    cs.updates.push_back(std::move(u));
                }
            }
            steps_.push_back(std::move(cs));
        }
        for (size_t i : layout.code.plaquettes_of(Axis::X)) {
            x_refs_.push_back(layout.syndrome_refs[i]);
        }
        for (Qubit q = 0; q < static_cast<Qubit>(layout.code.distance); q++) {
            logical_support_.push_back(layout.code.data(static_cast<int>(q), 0));
        }
    }

    size_t layer_size() const {
        return x_refs_.size();
    }
    size_t num_qubits() const {
        return layout_->num_qubits();
    }

    // Runs `num_rounds` rounds from the zero frame. Injections must be sorted
    // by (round, step). Fills per-round X syndromes and end-of-round frames.
    void run(uint32_t num_rounds, const std::vector<Injection> &injections, std::vector<std::vector<uint8_t>> &syndromes,
             std::vector<Frame> *frames) const {
        Frame frame(num_qubits(), 0);
        std::vector<uint8_t> flips(num_measurements_);
        syndromes.assign(num_rounds, std::vector<uint8_t>(layer_size(), 0));
        if (frames) {
            frames->clear();
        }
        size_t next = 0;
        for (uint32_t r = 0; r < num_rounds; r++) {
            for (uint32_t s = 0; s < steps_.size(); s++) {
                const CompiledStep &cs = steps_[s];
                for (const auto &m : cs.measurements) {
                    flips[m.id] = anticommute(frame[m.q0], m.a0) ^ (m.q1 != m.q0 && anticommute(frame[m.q1], m.a1));
                }
                // The measured single-qubit Pauli stabilizes the state, so the
                // frame is only defined modulo it; keep a canonical representative.
                for (const auto &m : cs.measurements) {
                    if (m.q1 == m.q0) {
                        frame[m.q0] = canonical(frame[m.q0], m.a0);
                    }
                }
                size_t first = next;
                while (next < injections.size() && injections[next].round == r && injections[next].step == s) {
                    if (injections[next].flip != kNoMeasurement) {
                        flips[injections[next].flip] ^= 1;
                    }
                    next++;
                }
                for (const auto &u : cs.updates) {
                    if (flips[u.ref]) {
                        for (const auto &[q, a] : u.terms) {
                            frame[q] ^= a;
                        }
                    }
                }
                for (size_t i = first; i < next; i++) {
                    for (const auto &[q, a] : injections[i].pauli) {
                        frame[q] ^= a;
                    }
                }
            }
            for (size_t k = 0; k < x_refs_.size(); k++) {
                uint8_t parity = 0;
                for (MeasurementId m : x_refs_[k]) {
                    parity ^= flips[m];
                }
                syndromes[r][k] = parity;
            }
            if (frames) {
                frames->push_back(frame);
            }
        }
        if (next != injections.size()) {
            throw std::logic_error("fault injection outside the simulated window");
        }
    }

    // Z or Y components on the X_L support.
    bool logical_of(const Frame &frame) const {
        bool parity = false;
        for (Qubit q : logical_support_) {
            parity ^= (frame[q] >> 1) & 1;
        }
        return parity;
    }

   private:
    const Layout *layout_;
    size_t num_measurements_ = 0;
    std::vector<CompiledStep> steps_;
    std::vector<std::vector<MeasurementId>> x_refs_;
    std::vector<Qubit> logical_support_;
};

Injection make_injection(const ScheduledCircuit &c, const FaultSite &site, Fault f, uint32_t round) {
    Injection inj{round, site.location.step, kNoMeasurement, {}};
    if (site.flips(f)) {
        inj.flip = c.steps[site.location.step][site.index].id;
    }
    PauliOperator pauli = site.pauli(f);
    for (const auto &[q, a] : pauli.terms()) {
        inj.pauli.push_back({q, static_cast<uint8_t>(a)});
    }
    return inj;
}

// Detector flips relative to an all-zero round-0 reference, plus the logical bit.
FaultEffect effect_of(const RoundProgram &prog, const std::vector<std::vector<uint8_t>> &syndromes, const Frame &last) {
    FaultEffect out;
    size_t m = prog.layer_size();
    for (size_t r = 0; r < syndromes.size(); r++) {
        for (size_t k = 0; k < m; k++) {
            uint8_t prev = r == 0 ? 0 : syndromes[r - 1][k];
            if (syndromes[r][k] ^ prev) {
                out.detectors.push_back(static_cast<VertexId>(1 + r * m + k));
            }
        }
    }
    out.logical = prog.logical_of(last);
    return out;
}

// Response of one basis fault injected in the first round: detector changes
// for round offsets 0..kHorizon-1 (dense, offset-major) and the logical bit of
// the frame after each offset.
struct Response {
    std::vector<uint8_t> detectors;
    std::array<uint8_t, kHorizon> logical{};
};

Response basis_response(const RoundProgram &prog, const ScheduledCircuit &c, const FaultSite &site, Fault f) {
    std::vector<std::vector<uint8_t>> syn;
    std::vector<Frame> frames;
    prog.run(kHorizon, {make_injection(c, site, f, 0)}, syn, &frames);
    // Frames may keep alternating on ancillas whose stale components never
    // reach an X detector; what matters is that detectors and the logical
    // settle. Period <= 2 plus two equal syndromes and logicals pins that down.
    constexpr uint32_t H = kHorizon;
    bool periodic = frames[H - 1] == frames[H - 3] && frames[H - 2] == frames[H - 4];
    bool settled = syn[H - 1] == syn[H - 2] && prog.logical_of(frames[H - 1]) == prog.logical_of(frames[H - 2]);
    if (!periodic || !settled) {
        std::ostringstream out;
        out << "fault effect does not reach a steady frame: step " << site.location.step << " qubit "
            << site.location.qubit << " bits " << int(f.bits);
        for (uint32_t r = 0; r < kHorizon; r++) {
            out << "\n  after round " << r << ":";
            for (size_t q = 0; q < frames[r].size(); q++) {
                if (frames[r][q]) {
                    out << " " << axis_char(static_cast<Axis>(frames[r][q])) << q;
                }
            }
        }
        throw std::logic_error(out.str());
    }
    size_t m = prog.layer_size();
    Response out;
    out.detectors.assign(kHorizon * m, 0);
    for (uint32_t r = 0; r < kHorizon; r++) {
        for (size_t k = 0; k < m; k++) {
            out.detectors[r * m + k] = syn[r][k] ^ (r == 0 ? 0 : syn[r - 1][k]);
        }
        out.logical[r] = prog.logical_of(frames[r]);
    }
    return out;
}

// Calls visit(round, site, bits, detectors, logical) for every nontrivial
// fault in rounds 1..rounds, using linearity and time-translation symmetry.
void for_each_fault(const Layout &layout, uint32_t rounds, const std::vector<FaultSite> &sites,
                    const std::function<void(uint32_t, uint32_t, uint8_t, const std::vector<VertexId> &, bool)> &visit) {
    RoundProgram prog(layout);
    const ScheduledCircuit &c = layout.schedule;
    size_t m = prog.layer_size();
    std::vector<Response> basis;
    std::vector<uint8_t> dense;
    std::vector<VertexId> dets;
    for (uint32_t s = 0; s < sites.size(); s++) {
        const FaultSite &site = sites[s];
        int n = site.num_bits();
        basis.clear();
        for (int b = 0; b < n; b++) {
            basis.push_back(basis_response(prog, c, site, Fault{static_cast<uint8_t>(1u << b)}));
        }
        for (uint32_t bits = 1; bits < (1u << n); bits++) {
            dense.assign(kHorizon * m, 0);
            std::array<uint8_t, kHorizon> logical{};
            for (int b = 0; b < n; b++) {
                if ((bits >> b) & 1) {
                    for (size_t i = 0; i < dense.size(); i++) {
                        dense[i] ^= basis[b].detectors[i];
                    }
                    for (uint32_t r = 0; r < kHorizon; r++) {
                        logical[r] ^= basis[b].logical[r];
                    }
                }
            }
            for (uint32_t tau = 1; tau <= rounds; tau++) {
                // Layers tau..rounds+1 exist; later offsets carry no changes.
                uint32_t last = std::min(kHorizon - 1, rounds + 1 - tau);
                dets.clear();
                for (uint32_t r = 0; r <= last; r++) {
                    for (size_t k = 0; k < m; k++) {
                        if (dense[r * m + k]) {
                            dets.push_back(static_cast<VertexId>(1 + (tau - 1 + r) * m + k));
                        }
                    }
                }
                visit(tau, s, static_cast<uint8_t>(bits), dets, logical[last]);
            }
        }
    }
}

std::string describe(const FaultSite &site, uint32_t round, uint8_t bits) {
    std::ostringstream out;
    out << "round " << round << " step " << site.location.step << " qubit " << site.location.qubit << " bits " << int(bits);
    return out.str();
}

}  // namespace

FaultEffect propagate_faults(const Layout &layout, uint32_t rounds, const std::vector<SpaceTimeFault> &faults) {
    const ScheduledCircuit &c = layout.schedule;
    std::vector<FaultSite> sites = enumerate_fault_sites(c);
    std::map<FaultLocation, size_t> lookup;
    for (size_t i = 0; i < sites.size(); i++) {
        lookup[sites[i].location] = i;
    }
    std::vector<Injection> injections;
    for (const SpaceTimeFault &f : faults) {
        if (f.round < 1 || f.round > rounds) {
            throw std::out_of_range("fault outside the noisy rounds");
        }
        auto it = lookup.find(f.location);
        if (it == lookup.end()) {
            throw std::out_of_range("no fault location at step " + std::to_string(f.location.step) + " qubit " +
                                    std::to_string(f.location.qubit));
        }
        if (f.fault.bits >> sites[it->second].num_bits()) {
            throw std::invalid_argument("fault bits exceed the location's fault group");
        }
        injections.push_back(make_injection(c, sites[it->second], f.fault, f.round - 1));
    }
    std::stable_sort(injections.begin(), injections.end(), [](const Injection &a, const Injection &b) {
        return std::tie(a.round, a.step) < std::tie(b.round, b.step);
    });
    RoundProgram prog(layout);
    std::vector<std::vector<uint8_t>> syn;
    std::vector<Frame> frames;
    prog.run(rounds + 1, injections, syn, &frames);
    return effect_of(prog, syn, frames.back());
}

FaultEffect propagate_fault(const Layout &layout, uint32_t rounds, const SpaceTimeFault &fault) {
    return propagate_faults(layout, rounds, {fault});
}

bool DecodingGraph::is_spatial(EdgeId e) const {
    const GraphEdge &edge = edges[e];
    return edge.u == kBoundaryVertex || edge.v == kBoundaryVertex || layer(edge.u) == layer(edge.v);
}

std::vector<EdgeId> DecodingGraph::logical_cut() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edges.size(); e++) {
        if (edges[e].logical) {
            out.push_back(e);
        }
    }
    return out;
}

void DecodingGraph::rebuild_index() {
    incident_.assign(num_vertices(), {});
    for (EdgeId e = 0; e < edges.size(); e++) {
        incident_[edges[e].u].push_back(e);
        incident_[edges[e].v].push_back(e);
    }
}

EdgeId DecodingGraph::find_edge(VertexId u, VertexId v) const {
    for (EdgeId e : incident_.at(u)) {
        const GraphEdge &edge = edges[e];
        if ((edge.u == u && edge.v == v) || (edge.u == v && edge.v == u)) {
            return e;
        }
    }
    return kNoEdge;
}

EdgeId DecodingGraph::edge_of(uint32_t round, uint32_t site, uint8_t bits) const {
    if (round < 1 || round > rounds || site >= sites.size() || bits == 0) {
        throw std::out_of_range("fault outside the decoding graph");
    }
    return fault_edge_[(round - 1) * faults_per_round_ + site_offset_[site] + bits - 1];
}

void DecodingGraph::set_noise(double rate) {
    if (rate < 0 || rate >= 1) {
        throw std::domain_error("physical rate outside [0, 1)");
    }
    p = rate;
    const double P[3] = {inclusive_rate(2, rate), inclusive_rate(3, rate), inclusive_rate(5, rate)};
    for (GraphEdge &e : edges) {
        double w = 0, log_keep = 0;
        for (int i = 0; i < 3; i++) {
            w += e.counts[i] * P[i];
            log_keep += e.counts[i] * std::log1p(-2 * P[i]);
        }
        e.weight = w;
        e.exact_weight = -0.5 * std::expm1(log_keep);
    }
}

std::vector<VertexId> DecodingGraph::boundary_of(const std::vector<EdgeId> &edge_set) const {
    std::vector<uint8_t> parity(num_vertices(), 0);
    for (EdgeId e : edge_set) {
        parity[edges.at(e).u] ^= 1;
        parity[edges[e].v] ^= 1;
    }
    std::vector<VertexId> out;
    for (VertexId v = 0; v < parity.size(); v++) {
        if (parity[v]) {
            out.push_back(v);
        }
    }
    return out;
}

bool DecodingGraph::logical_parity(const std::vector<EdgeId> &edge_set) const {
    bool parity = false;
    for (EdgeId e : edge_set) {
        parity ^= edges.at(e).logical;
    }
    return parity;
}

DecodingGraph build_decoding_graph(const Layout &layout, uint32_t rounds, double p) {
    if (rounds < 1) {
        throw std::invalid_argument("at least one noisy round is required");
    }
    DecodingGraph g;
    g.distance = layout.code.distance;
    g.rounds = rounds;
    g.kind = layout.kind;
    g.layer_size = static_cast<uint32_t>(layout.code.plaquettes_of(Axis::X).size());
    g.sites = enumerate_fault_sites(layout.schedule);
    g.site_offset_.resize(g.sites.size());
    for (size_t s = 0; s < g.sites.size(); s++) {
        g.site_offset_[s] = g.faults_per_round_;
        g.faults_per_round_ += (size_t{1} << g.sites[s].num_bits()) - 1;
    }
    g.fault_edge_.assign(rounds * g.faults_per_round_, kNoEdge);
    std::unordered_map<uint64_t, EdgeId> index;

    for_each_fault(layout, rounds, g.sites,
                   [&](uint32_t tau, uint32_t s, uint8_t bits, const std::vector<VertexId> &dets, bool logical) {
                       const FaultSite &site = g.sites[s];
                       if (dets.size() >= 3) {
                           throw std::logic_error("fault flips " + std::to_string(dets.size()) +
                                                  " detectors: " + describe(site, tau, bits));
                       }
                       if (dets.empty()) {
                           if (logical) {
                               throw std::logic_error("undetectable logical fault: " + describe(site, tau, bits));
                           }
                           return;
                       }
                       VertexId u = dets.size() == 1 ? kBoundaryVertex : dets[0];
                       VertexId v = dets.back();
                       uint64_t key = (uint64_t{u} << 32) | v;
                       auto [it, inserted] = index.try_emplace(key, static_cast<EdgeId>(g.edges.size()));
                       if (inserted) {
                           GraphEdge edge;
                           edge.u = u;
                           edge.v = v;
                           edge.logical = logical;
                           g.edges.push_back(edge);
                           g.preimage.emplace_back();
                       } else if (g.edges[it->second].logical != logical) {
                           throw std::logic_error("faults on one edge disagree on the logical: " +
                                                  describe(site, tau, bits));
                       }
                       EdgeId e = it->second;
                       int n = site.num_bits();
                       g.edges[e].counts[n == 2 ? 0 : n == 3 ? 1 : 2]++;
                       g.preimage[e].push_back({tau, s, bits});
                       g.fault_edge_[(tau - 1) * g.faults_per_round_ + g.site_offset_[s] + bits - 1] = e;
                   });
    g.rebuild_index();
    g.set_noise(p);
    return g;
}

FlipCensus fault_flip_census(const Layout &layout, uint32_t rounds) {
    FlipCensus census;
    std::vector<FaultSite> sites = enumerate_fault_sites(layout.schedule);
    for_each_fault(layout, rounds, sites,
                   [&](uint32_t, uint32_t, uint8_t, const std::vector<VertexId> &dets, bool logical) {
                       census.by_count[std::min<size_t>(dets.size(), 3)]++;
                       census.undetected_logical += dets.empty() && logical;
                   });
    return census;
}

size_t graph_distance_check(const DecodingGraph &graph) {
    size_t n = graph.num_vertices();
    size_t best = kInfiniteDistance;
    // Shortest walk from (v, even) to (v, odd) in the cut-parity double cover.
    std::vector<size_t> dist(2 * n);
    std::deque<size_t> queue;
    for (VertexId start = 0; start < n; start++) {
        std::fill(dist.begin(), dist.end(), kInfiniteDistance);
        dist[2 * start] = 0;
        queue.assign(1, 2 * start);
        while (!queue.empty()) {
            size_t state = queue.front();
            queue.pop_front();
            if (dist[state] + 1 >= best) {
                break;
            }
            VertexId v = static_cast<VertexId>(state / 2);
            size_t parity = state % 2;
            for (EdgeId e : graph.incident(v)) {
                const GraphEdge &edge = graph.edges[e];
                VertexId w = edge.u == v ? edge.v : edge.u;
                size_t next = 2 * w + (parity ^ edge.logical);
                if (dist[next] == kInfiniteDistance) {
                    dist[next] = dist[state] + 1;
                    queue.push_back(next);
                }
            }
        }
        if (dist[2 * start + 1] < best) {
            best = dist[2 * start + 1];
        }
    }
    return best;
}

}  // namespace mbsurf
