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

#include "gtest/gtest.h"

using namespace mbsurf;

namespace {

const LayoutKind kKinds[] = {LayoutKind::kWindmill, LayoutKind::kDoubleAncilla};
const GrowthPolicy kPolicies[] = {GrowthPolicy::kAllActive, GrowthPolicy::kSmallestFirst};

std::vector<VertexId> syndrome_of(const DecodingGraph &g, const std::vector<EdgeId> &flipped) {
    std::vector<VertexId> out;
    for (VertexId v : g.boundary_of(flipped)) {
        if (v != kBoundaryVertex) {
            out.push_back(v);
        }
    }
    return out;
}

bool fails(const DecodingGraph &g, UnionFindDecoder &decoder, const std::vector<EdgeId> &flipped) {
    std::vector<VertexId> syndrome = syndrome_of(g, flipped);
    if (syndrome.size() % 2) {
        syndrome.insert(syndrome.begin(), kBoundaryVertex);
    }
    return is_logical_failure(g, symmetric_difference(flipped, decoder.decode(syndrome)));
}

}  // namespace

TEST(uf_decoder, empty_syndrome) {
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3);
    UnionFindDecoder decoder(g);
    EXPECT_TRUE(decoder.decode({}).empty());
    EXPECT_TRUE(decoder.grown_edges().empty());
}

TEST(uf_decoder, rejects_bad_syndromes) {
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3);
    UnionFindDecoder decoder(g);
    EXPECT_THROW(decoder.decode({1}), std::invalid_argument);
    EXPECT_THROW(decoder.decode({2, 2}), std::invalid_argument);
    EXPECT_THROW(decoder.decode({1, static_cast<VertexId>(g.num_vertices())}), std::out_of_range);
    // Still usable afterwards.
    EXPECT_TRUE(decoder.decode({}).empty());
}

TEST(uf_decoder, adjacent_pair_is_matched_directly) {
    DecodingGraph g = build_decoding_graph(build_double_ancilla_layout(3), 3);
    for (GrowthPolicy policy : kPolicies) {
        UnionFindDecoder decoder(g, policy);
        for (EdgeId e = 0; e < g.num_edges(); e++) {
            const GraphEdge &edge = g.edges[e];
            if (edge.u == kBoundaryVertex) {
                continue;
            }
            const auto &c = decoder.decode({edge.u, edge.v});
            ASSERT_EQ(c.size(), 1u);
            // Any edge between the same pair is equivalent.
            EXPECT_EQ(g.edges[c[0]].u, edge.u);
            EXPECT_EQ(g.edges[c[0]].v, edge.v);
        }
    }
}

TEST(uf_decoder, corrects_every_single_edge) {
    for (int d : {3, 5}) {
        for (LayoutKind kind : kKinds) {
            DecodingGraph g = build_decoding_graph(build_layout(kind, d), d);
            for (GrowthPolicy policy : kPolicies) {
                UnionFindDecoder decoder(g, policy);
                for (EdgeId e = 0; e < g.num_edges(); e++) {
                    ASSERT_FALSE(fails(g, decoder, {e})) << layout_kind_name(kind) << " d=" << d << " edge " << e;
                }
            }
        }
    }
}

TEST(uf_decoder, corrects_every_edge_pair_at_distance_five) {
    for (LayoutKind kind : kKinds) {
        DecodingGraph g = build_decoding_graph(build_layout(kind, 5), 5);
        for (GrowthPolicy policy : kPolicies) {
            UnionFindDecoder decoder(g, policy);
            size_t failures = 0;
            for (EdgeId a = 0; a < g.num_edges(); a++) {
                for (EdgeId b = a + 1; b < g.num_edges(); b++) {
                    failures += fails(g, decoder, {a, b});
                }
            }
            EXPECT_EQ(failures, 0u) << layout_kind_name(kind) << " " << growth_policy_name(policy);
        }
    }
}

TEST(uf_decoder, correction_has_the_syndrome_as_boundary) {
    Rng rng(61);
    DecodingGraph g = build_decoding_graph(build_windmill_layout(5), 5);
    for (GrowthPolicy policy : kPolicies) {
        UnionFindDecoder decoder(g, policy);
        for (int trial = 0; trial < 500; trial++) {
            std::vector<VertexId> syndrome;
            for (VertexId v = 1; v < g.num_vertices(); v++) {
                if (rng() % 8 == 0) {
                    syndrome.push_back(v);
                }
            }
            if (syndrome.size() % 2) {
                syndrome.pop_back();
            }
            std::vector<EdgeId> c = decoder.decode(syndrome);
            EXPECT_EQ(syndrome_of(g, c), syndrome);
            std::vector<EdgeId> sorted = c;
            std::sort(sorted.begin(), sorted.end());
            EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
            std::vector<EdgeId> grown = decoder.grown_edges();
            for (EdgeId e : c) {
                EXPECT_TRUE(std::binary_search(grown.begin(), grown.end(), e));
            }
        }
    }
}

TEST(uf_decoder, deterministic) {
    Rng rng(62);
    DecodingGraph g = build_decoding_graph(build_double_ancilla_layout(5), 5);
    UnionFindDecoder a(g), b(g);
    for (int trial = 0; trial < 200; trial++) {
        std::vector<VertexId> syndrome;
        for (VertexId v = 1; v < g.num_vertices(); v++) {
            if (rng() % 10 == 0) {
                syndrome.push_back(v);
            }
        }
        if (syndrome.size() % 2) {
            syndrome.pop_back();
        }
        // Interleave unrelated decodes on `b` to exercise scratch reuse.
        b.decode({});
        EXPECT_EQ(a.decode(syndrome), b.decode(syndrome));
    }
}

TEST(uf_decoder, growth_policy_names) {
    for (GrowthPolicy policy : kPolicies) {
        EXPECT_EQ(parse_growth_policy(growth_policy_name(policy)), policy);
    }
    EXPECT_THROW(parse_growth_policy("largest"), std::invalid_argument);
}

TEST(uf_decoder, logical_failure_requires_closed_residual) {
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3);
    EXPECT_FALSE(is_logical_failure(g, {}));
    EdgeId e = g.logical_cut().front();
    EXPECT_THROW(is_logical_failure(g, {e}), std::invalid_argument);
    EXPECT_FALSE(is_logical_failure(g, {e, e}));
    EXPECT_EQ(symmetric_difference({3, 1, 2}, {2, 4}), (std::vector<EdgeId>{1, 3, 4}));
}

TEST(uf_decoder, some_edge_pairs_fail_at_distance_three) {
    // Two flips exceed the correction radius of a distance-3 code.
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3);
    UnionFindDecoder decoder(g);
    size_t failures = 0;
    for (EdgeId a = 0; a < g.num_edges(); a++) {
        for (EdgeId b = a + 1; b < g.num_edges(); b++) {
            failures += fails(g, decoder, {a, b});
        }
    }
    EXPECT_GT(failures, 0u);
}
