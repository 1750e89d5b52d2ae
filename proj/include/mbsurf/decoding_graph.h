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

#ifndef MBSURF_DECODING_GRAPH_H
#define MBSURF_DECODING_GRAPH_H

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "mbsurf/circuit.h"
#include "mbsurf/layouts.h"

namespace mbsurf {

using VertexId = uint32_t;
using EdgeId = uint32_t;
constexpr VertexId kBoundaryVertex = 0;
constexpr EdgeId kNoEdge = UINT32_MAX;
constexpr size_t kInfiniteDistance = std::numeric_limits<size_t>::max();

/// A fault in round `round` (1-based) of a memory experiment.
struct SpaceTimeFault {
    uint32_t round = 1;
    FaultLocation location;
    Fault fault;
};

/// Detector flips and the effect on the logical observable.
struct FaultEffect {
    /// Sorted detector vertices (never the boundary vertex).
    std::vector<VertexId> detectors;
    /// Whether the final data frame anticommutes with X_L.
    bool logical = false;
    bool operator==(const FaultEffect &) const = default;
};

/// Propagates faults through `rounds` noisy rounds followed by one noiseless
/// round by direct Pauli-frame simulation.
FaultEffect propagate_faults(const Layout &layout, uint32_t rounds, const std::vector<SpaceTimeFault> &faults);
FaultEffect propagate_fault(const Layout &layout, uint32_t rounds, const SpaceTimeFault &fault);

struct GraphEdge {
    VertexId u = 0;
    VertexId v = 0;
    bool logical = false;
    /// Number of preimage faults living on locations with 2, 3 and 5 fault bits.
    std::array<uint32_t, 3> counts{};
    /// Linearized weight (sum of inclusive rates) and exact flip probability.
    double weight = 0;
    double exact_weight = 0;

    uint32_t preimage_size() const {
        return counts[0] + counts[1] + counts[2];
    }
};

/// Compact reference to a fault: round, site index in the round's site list,
/// and fault bits.
struct FaultRef {
    uint32_t round = 0;
    uint32_t site = 0;
    uint8_t bits = 0;
};

/// X-syndrome space-time decoding graph of a memory experiment: `rounds`
/// noisy rounds plus a final noiseless round. Vertex 0 is the boundary vertex;
/// vertex 1 + (layer - 1) * m + k is the detector of X plaquette k in layer
/// 1..rounds+1, with m X plaquettes per layer.
class DecodingGraph {
   public:
    int distance = 0;
    uint32_t rounds = 0;
    LayoutKind kind = LayoutKind::kWindmill;
    /// X plaquettes per layer.
    uint32_t layer_size = 0;
    std::vector<GraphEdge> edges;
    /// Fault sites of one round.
    std::vector<FaultSite> sites;
    /// Preimage of each edge.
    std::vector<std::vector<FaultRef>> preimage;
    /// Physical rate the weights were computed for.
    double p = 0;

    size_t num_vertices() const {
        return 1 + static_cast<size_t>(rounds + 1) * layer_size;
    }
    size_t num_edges() const {
        return edges.size();
    }
    uint32_t layer(VertexId v) const {
        return v == kBoundaryVertex ? 0 : 1 + (v - 1) / layer_size;
    }
    uint32_t plaquette(VertexId v) const {
        return v == kBoundaryVertex ? 0 : (v - 1) % layer_size;
    }
    VertexId vertex(uint32_t layer, uint32_t k) const {
        return 1 + (layer - 1) * layer_size + k;
    }
    /// True for edges inside one layer or to the boundary vertex.
    bool is_spatial(EdgeId e) const;
    std::vector<EdgeId> logical_cut() const;

    /// Incident edges of each vertex; call after editing `edges`.
    void rebuild_index();
    const std::vector<EdgeId> &incident(VertexId v) const {
        return incident_[v];
    }
    EdgeId find_edge(VertexId u, VertexId v) const;

    /// Edge hit by nontrivial fault `bits` at `site` in `round`, or kNoEdge.
    EdgeId edge_of(uint32_t round, uint32_t site, uint8_t bits) const;
    /// Number of nontrivial faults in one round.
    size_t faults_per_round() const {
        return faults_per_round_;
    }

    /// Recomputes W and W' for the uniform exclusive model at rate p.
    void set_noise(double p);

    /// 0-boundary of an edge set; the boundary vertex absorbs the parity.
    std::vector<VertexId> boundary_of(const std::vector<EdgeId> &edge_set) const;
    /// Parity of the logical bits of an edge set.
    bool logical_parity(const std::vector<EdgeId> &edge_set) const;

   private:
    friend DecodingGraph build_decoding_graph(const Layout &layout, uint32_t rounds, double p);
    std::vector<std::vector<EdgeId>> incident_;
    std::vector<size_t> site_offset_;
    size_t faults_per_round_ = 0;
    std::vector<EdgeId> fault_edge_;
};

/// Builds the graph over `rounds` noisy rounds (default: the distance).
DecodingGraph build_decoding_graph(const Layout &layout, uint32_t rounds, double p = 1e-3);

struct FlipCensus {
    /// Entry k counts faults flipping k detectors; the last bucket is >= 3.
    std::array<size_t, 4> by_count{};
    /// Faults flipping the logical observable without any detector.
    size_t undetected_logical = 0;
    size_t total() const {
        return by_count[0] + by_count[1] + by_count[2] + by_count[3];
    }
};

/// Detector-flip histogram over every nontrivial fault in every noisy round.
FlipCensus fault_flip_census(const Layout &layout, uint32_t rounds);

/// Length of the shortest cycle with odd overlap with the logical cut, or
/// kInfiniteDistance if there is none.
size_t graph_distance_check(const DecodingGraph &graph);

}  // namespace mbsurf

#endif
