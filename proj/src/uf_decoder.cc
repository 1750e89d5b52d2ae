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

#include "mbsurf/uf_decoder.h"

#include <algorithm>
#include <stdexcept>

namespace mbsurf {

std::string growth_policy_name(GrowthPolicy policy) {
    return policy == GrowthPolicy::kAllActive ? "all" : "smallest";
}

GrowthPolicy parse_growth_policy(const std::string &name) {
    if (name == "all") {
        return GrowthPolicy::kAllActive;
    }
    if (name == "smallest") {
        return GrowthPolicy::kSmallestFirst;
    }
    throw std::invalid_argument("unknown growth policy: " + name);
}

UnionFindDecoder::UnionFindDecoder(const DecodingGraph &graph, GrowthPolicy policy) : graph_(&graph), policy_(policy) {
    size_t n = graph.num_vertices();
    parent_.resize(n);
    for (VertexId v = 0; v < n; v++) {
        parent_[v] = v;
    }
    rank_.assign(n, 0);
    size_.assign(n, 1);
    parity_.assign(n, 0);
    has_boundary_.assign(n, 0);
    has_boundary_[kBoundaryVertex] = 1;
    visited_.assign(n, 0);
    mark_.assign(n, 0);
    frontier_.assign(n, {});
    growth_.assign(graph.num_edges(), 0);
    stamp_.assign(graph.num_edges(), 0);
    tree_edge_.assign(n, kNoEdge);
    seen_.assign(n, 0);
}

VertexId UnionFindDecoder::find(VertexId v) {
    while (parent_[v] != v) {
        parent_[v] = parent_[parent_[v]];
        v = parent_[v];
    }
    return v;
}

void UnionFindDecoder::visit(VertexId v) {
    if (visited_[v]) {
        return;
    }
    visited_[v] = 1;
    touched_vertices_.push_back(v);
    // The boundary vertex never grows.
    if (v != kBoundaryVertex) {
        frontier_[v].push_back(v);
    }
}

void UnionFindDecoder::merge(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) {
        return;
    }
    queue_.erase({size_[a], a});
    queue_.erase({size_[b], b});
    if (rank_[a] < rank_[b] || (rank_[a] == rank_[b] && b < a)) {
        std::swap(a, b);
    }
    parent_[b] = a;
    if (rank_[a] == rank_[b]) {
        rank_[a]++;
    }
    size_[a] += size_[b];
    parity_[a] ^= parity_[b];
    has_boundary_[a] |= has_boundary_[b];
    if (frontier_[a].size() < frontier_[b].size()) {
        frontier_[a].swap(frontier_[b]);
    }
    frontier_[a].insert(frontier_[a].end(), frontier_[b].begin(), frontier_[b].end());
    frontier_[b].clear();
    if (active(a)) {
        queue_.insert({size_[a], a});
    }
}

void UnionFindDecoder::reset() {
    for (VertexId v : touched_vertices_) {
        parent_[v] = v;
        rank_[v] = 0;
        size_[v] = 1;
        parity_[v] = 0;
        has_boundary_[v] = v == kBoundaryVertex;
        visited_[v] = 0;
        mark_[v] = 0;
        frontier_[v].clear();
        tree_edge_[v] = kNoEdge;
        seen_[v] = 0;
    }
    for (EdgeId e : touched_edges_) {
        growth_[e] = 0;
    }
    touched_vertices_.clear();
    touched_edges_.clear();
    queue_.clear();
    correction_.clear();
}

const std::vector<EdgeId> &UnionFindDecoder::decode(const std::vector<VertexId> &syndrome) {
    reset();
    if (syndrome.size() % 2) {
        throw std::invalid_argument("syndrome has odd parity");
    }
    const DecodingGraph &g = *graph_;
    for (VertexId v : syndrome) {
        if (v >= g.num_vertices()) {
            throw std::out_of_range("syndrome vertex out of range");
        }
        if (mark_[v]) {
            throw std::invalid_argument("duplicate syndrome vertex");
        }
        mark_[v] = 1;
        parity_[v] = 1;
        visit(v);
        if (active(v)) {
            queue_.insert({1, v});
        }
    }

    while (!queue_.empty()) {
        fused_.clear();
        if (policy_ == GrowthPolicy::kSmallestFirst) {
            grow(queue_.begin()->second);
        } else {
            growing_.clear();
            for (const auto &[size, root] : queue_) {
                growing_.push_back(root);
            }
            for (VertexId root : growing_) {
                grow(root);
            }
        }
        for (EdgeId e : fused_) {
            visit(g.edges[e].u);
            visit(g.edges[e].v);
            merge(g.edges[e].u, g.edges[e].v);
        }
    }
    peel();
    return correction_;
}

void UnionFindDecoder::grow(VertexId root) {
    const DecodingGraph &g = *graph_;
    // Drop frontier vertices with nothing left to grow.
    auto &frontier = frontier_[root];
    frontier.erase(std::remove_if(frontier.begin(), frontier.end(),
                                  [&](VertexId v) {
                                      for (EdgeId e : g.incident(v)) {
                                          if (growth_[e] < 2) {
                                              return false;
                                          }
                                      }
                                      return true;
                                  }),
                   frontier.end());
    if (frontier.empty()) {
        throw std::logic_error("odd cluster cannot reach the boundary vertex");
    }
    clock_++;
    for (VertexId v : frontier) {
        for (EdgeId e : g.incident(v)) {
            if (growth_[e] >= 2 || stamp_[e] == clock_) {
                continue;
            }
            stamp_[e] = clock_;
            if (growth_[e] == 0) {
                touched_edges_.push_back(e);
            }
            if (++growth_[e] == 2) {
                fused_.push_back(e);
            }
        }
    }
}

void UnionFindDecoder::peel() {
    const DecodingGraph &g = *graph_;
    // Spanning forest of the grown subgraph, each tree rooted at its lowest vertex.
    std::vector<VertexId> roots(touched_vertices_);
    std::sort(roots.begin(), roots.end());
    order_.clear();
    for (VertexId r : roots) {
        if (seen_[r]) {
            continue;
        }
        seen_[r] = 1;
        size_t head = order_.size();
        order_.push_back(r);
        while (head < order_.size()) {
            VertexId v = order_[head++];
            for (EdgeId e : g.incident(v)) {
                if (growth_[e] < 2) {
                    continue;
                }
                VertexId w = g.edges[e].u == v ? g.edges[e].v : g.edges[e].u;
                if (!seen_[w]) {
                    seen_[w] = 1;
                    tree_edge_[w] = e;
                    order_.push_back(w);
                }
            }
        }
    }
    for (size_t i = order_.size(); i-- > 0;) {
        VertexId v = order_[i];
        if (!mark_[v]) {
            continue;
        }
        EdgeId e = tree_edge_[v];
        if (e == kNoEdge) {
            if (v != kBoundaryVertex) {
                throw std::logic_error("peeling left an unmatched vertex");
            }
            continue;
        }
        correction_.push_back(e);
        mark_[v] = 0;
        VertexId w = g.edges[e].u == v ? g.edges[e].v : g.edges[e].u;
        mark_[w] ^= 1;
    }
}

std::vector<EdgeId> UnionFindDecoder::grown_edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e : touched_edges_) {
        if (growth_[e] == 2) {
            out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_logical_failure(const DecodingGraph &graph, const std::vector<EdgeId> &residual) {
    if (!graph.boundary_of(residual).empty()) {
        throw std::invalid_argument("residual has a nonempty boundary");
    }
    return graph.logical_parity(residual);
}

std::vector<EdgeId> symmetric_difference(std::vector<EdgeId> a, std::vector<EdgeId> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<EdgeId> out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace mbsurf
