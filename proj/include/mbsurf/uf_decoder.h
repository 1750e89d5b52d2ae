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

#ifndef MBSURF_UF_DECODER_H
#define MBSURF_UF_DECODER_H

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mbsurf/decoding_graph.h"

namespace mbsurf {

enum class GrowthPolicy {
    /// Every active cluster grows by half an edge per step.
    kAllActive,
    /// Only the smallest active cluster (ties: lowest root) grows per step.
    kSmallestFirst,
};
std::string growth_policy_name(GrowthPolicy policy);
GrowthPolicy parse_growth_policy(const std::string &name);


/// Union-Find decoder without weighted growth: odd clusters not touching the
/// boundary vertex grow by half an edge along their boundary until none are
/// left, then a spanning forest of the grown edges is peeled into a correction.
///
/// Scratch memory is reused across calls; one instance per thread.
class UnionFindDecoder {
   public:
    explicit UnionFindDecoder(const DecodingGraph &graph, GrowthPolicy policy = GrowthPolicy::kAllActive);

    /// Returns C with 0-boundary equal to `syndrome` (the boundary vertex
    /// absorbs parity). `syndrome` must have even size and no duplicates.
    const std::vector<EdgeId> &decode(const std::vector<VertexId> &syndrome);

    /// Edges fully grown by the last decode.
    std::vector<EdgeId> grown_edges() const;

   private:
    VertexId find(VertexId v);
    void merge(VertexId a, VertexId b);
    void visit(VertexId v);
    bool active(VertexId root) const {
        return parity_[root] && !has_boundary_[root];
    }
    void reset();
    void peel();
    // Grows the cluster rooted at `root` by half an edge, appending fused edges.
    void grow(VertexId root);

    const DecodingGraph *graph_;
    GrowthPolicy policy_;
    std::vector<VertexId> parent_;
    std::vector<uint8_t> rank_;
    std::vector<uint32_t> size_;
    std::vector<uint8_t> parity_;
    std::vector<uint8_t> has_boundary_;
    std::vector<uint8_t> visited_;
    std::vector<uint8_t> mark_;
    std::vector<std::vector<VertexId>> frontier_;
    std::vector<uint8_t> growth_;
    std::vector<uint32_t> stamp_;
    uint32_t clock_ = 0;
    std::vector<VertexId> touched_vertices_;
    std::vector<EdgeId> touched_edges_;
    std::set<std::pair<uint32_t, VertexId>> queue_;
    std::vector<EdgeId> fused_;
    std::vector<VertexId> growing_;
    std::vector<EdgeId> correction_;
    // Peeling scratch.
    std::vector<EdgeId> tree_edge_;
    std::vector<uint8_t> seen_;
    std::vector<VertexId> order_;
};

/// Residual = actual flips XOR correction. True iff it has odd overlap with
/// the logical cut. Throws if the residual has a nonempty boundary.
bool is_logical_failure(const DecodingGraph &graph, const std::vector<EdgeId> &residual);

/// Symmetric difference of two edge sets (result sorted).
std::vector<EdgeId> symmetric_difference(std::vector<EdgeId> a, std::vector<EdgeId> b);

}  // namespace mbsurf

#endif
