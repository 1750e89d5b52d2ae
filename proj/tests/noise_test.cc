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

#include "mbsurf/noise.h"

#include <array>
#include <cmath>
#include <numeric>

#include "gtest/gtest.h"

using namespace mbsurf;

namespace {

// Exclusive model of one qubit from independent X, Y, Z rates.
std::array<double, 4> single_qubit_exclusive(double px, double py, double pz) {
    double nx = 1 - px, ny = 1 - py, nz = 1 - pz;
    return {nx * ny * nz + px * py * pz, px * ny * nz + nx * py * pz, nx * py * nz + px * ny * pz,
            nx * ny * pz + px * py * nz};
}

// Brute force over all subsets of the nontrivial faults.
FaultTable brute_force_exclusive(int n, double rate) {
    uint32_t size = 1u << n;
    uint32_t m = size - 1;
    FaultTable q(size, 0);
    for (uint64_t subset = 0; subset < (uint64_t{1} << m); subset++) {
        uint32_t f = 0;
        double prob = 1;
        for (uint32_t k = 0; k < m; k++) {
            if ((subset >> k) & 1) {
                f ^= k + 1;
                prob *= rate;
            } else {
                prob *= 1 - rate;
            }
        }
        q[f] += prob;
    }
    return q;
}

}  // namespace

TEST(noise, inclusive_model_two_bits_matches_closed_form) {
    for (double q : {1e-4, 1e-3, 1e-2, 0.1, 0.2}) {
        for (bool plus : {false, true}) {
            double rate = inclusive_from_uniform(2, q, plus);
            auto qs = single_qubit_exclusive(rate, rate, rate);
            for (int f = 1; f < 4; f++) {
                EXPECT_NEAR(qs[f], q, 1e-14) << q << " " << plus;
            }
            EXPECT_NEAR(qs[0], 1 - 3 * q, 1e-14);
            // Inverse relation for a uniform model.
            double root = std::sqrt((0.5 - 2 * q) * (0.5 - 2 * q) / (1 - 4 * q));
            EXPECT_NEAR(rate, plus ? 0.5 + root : 0.5 - root, 1e-12);
        }
    }
}

TEST(noise, inclusive_model_three_bits_brute_force) {
    for (double q : {1e-4, 1e-3, 1e-2, 0.1}) {
        for (bool plus : {false, true}) {
            double rate = inclusive_from_uniform(3, q, plus);
            FaultTable brute = brute_force_exclusive(3, rate);
            for (int f = 1; f < 8; f++) {
                EXPECT_NEAR(brute[f], q, 1e-14);
            }
            FaultTable inclusive(8, rate);
            FaultTable induced = induced_exclusive(3, inclusive);
            for (int f = 0; f < 8; f++) {
                EXPECT_NEAR(induced[f], brute[f], 1e-14);
            }
        }
    }
}

TEST(noise, inclusive_model_five_bits_exact_convolution) {
    for (double q : {1e-4, 1e-3, 1e-2}) {
        double rate = inclusive_from_uniform(5, q);
        FaultTable induced = induced_exclusive(5, FaultTable(32, rate));
        for (int f = 1; f < 32; f++) {
            EXPECT_NEAR(induced[f] / q, 1, 1e-9);
        }
        EXPECT_NEAR(std::accumulate(induced.begin(), induced.end(), 0.0), 1, 1e-12);
    }
}

TEST(noise, inclusive_model_five_bits_sampled) {
    Rng rng(51);
    const double q = 1e-2;
    const uint64_t samples = 1000000;
    InclusiveSampler sampler(5, inclusive_from_uniform(5, q));
    std::vector<uint64_t> counts(32, 0);
    for (uint64_t i = 0; i < samples; i++) {
        counts[sampler.sample(rng)]++;
    }
    double sigma = std::sqrt(samples * q * (1 - q));
    for (int f = 1; f < 32; f++) {
        EXPECT_LT(std::abs(counts[f] - samples * q), 4 * sigma) << f;
    }
}

TEST(noise, inclusive_rate_limits) {
    for (int n : {2, 3, 5}) {
        double top = std::ldexp(1.0, -n);
        EXPECT_NEAR(inclusive_from_uniform(n, top), 0.5, 1e-12);
        EXPECT_NEAR(inclusive_from_uniform(n, top, true), 0.5, 1e-12);
        EXPECT_EQ(inclusive_from_uniform(n, 0), 0);
        EXPECT_EQ(inclusive_from_uniform(n, 0, true), 1);
        EXPECT_THROW(inclusive_from_uniform(n, top * 1.01), std::domain_error);
        // First order agreement with q.
        double q = 1e-7;
        EXPECT_NEAR(inclusive_from_uniform(n, q) / q, 1, 1e-5);
        EXPECT_NEAR(inclusive_rate(n, 1e-3), inclusive_from_uniform(n, 1e-3 / ((1 << n) - 1)), 1e-18);
    }
}

TEST(noise, uniform_exclusive_round_trip) {
    for (int n : {2, 3, 5}) {
        double p = 1e-3;
        FaultTable target = uniform_exclusive(n, p);
        EXPECT_NEAR(target[0], 1 - p, 1e-15);
        FaultTable induced = induced_exclusive(n, FaultTable(size_t{1} << n, inclusive_rate(n, p)));
        for (size_t f = 0; f < target.size(); f++) {
            EXPECT_NEAR(induced[f], target[f], 1e-15);
        }
    }
}

TEST(noise, geometric_skip_mean) {
    Rng rng(52);
    double p = 0.01;
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; i++) {
        sum += geometric_skip(rng, std::log1p(-p));
    }
    double mean = (1 - p) / p;
    EXPECT_NEAR(sum / n / mean, 1, 0.02);
    EXPECT_EQ(geometric_skip(rng, 0.0), UINT64_MAX);
}

TEST(noise, edge_sampler_frequencies) {
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3, 2e-2);
    EdgeSampler sampler(g);
    Rng rng(53);
    const int trials = 100000;
    std::vector<uint64_t> counts(g.num_edges(), 0);
    std::vector<EdgeId> flipped;
    for (int t = 0; t < trials; t++) {
        sampler.sample(rng, flipped);
        for (EdgeId e : flipped) {
            counts[e]++;
        }
    }
    for (EdgeId e = 0; e < g.num_edges(); e++) {
        double w = g.edges[e].weight;
        double sigma = std::sqrt(trials * w * (1 - w));
        EXPECT_LT(std::abs(counts[e] - trials * w), 5 * sigma) << e;
    }
}

TEST(noise, fault_sampler_rate) {
    DecodingGraph g = build_decoding_graph(build_double_ancilla_layout(3), 3, 1e-3);
    FaultSampler sampler(g, 1e-2);
    EXPECT_EQ(sampler.num_locations(), g.sites.size() * 3);
    Rng rng(54);
    const int trials = 20000;
    double total = 0;
    std::vector<SampledFault> faults;
    for (int t = 0; t < trials; t++) {
        sampler.sample(rng, faults);
        for (const auto &f : faults) {
            ASSERT_LT(f.location, sampler.num_locations());
            ASSERT_GT(f.bits, 0);
            ASSERT_LT(f.bits, 1 << g.sites[f.location % g.sites.size()].num_bits());
        }
        total += faults.size();
    }
    double mean = 1e-2 * sampler.num_locations();
    EXPECT_NEAR(total / trials / mean, 1, 0.02);
}

TEST(noise, edge_and_fault_sampling_agree_on_edge_marginals) {
    const double p = 3e-3;
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3, p);
    EdgeSampler edges(g);
    FaultSampler faults(g, p);
    Rng rng(55);
    const int trials = 100000;
    std::vector<uint64_t> by_edge(g.num_edges(), 0), by_fault(g.num_edges(), 0);
    std::vector<EdgeId> flipped;
    std::vector<SampledFault> sampled;
    for (int t = 0; t < trials; t++) {
        edges.sample(rng, flipped);
        for (EdgeId e : flipped) {
            by_edge[e]++;
        }
        faults.sample(rng, sampled);
        faults.to_edges(sampled, flipped);
        for (EdgeId e : flipped) {
            by_fault[e]++;
        }
    }
    for (EdgeId e = 0; e < g.num_edges(); e++) {
        // Fault sampling flips e with probability W'; edge sampling with W.
        const GraphEdge &edge = g.edges[e];
        double sigma = std::sqrt(2 * trials * edge.weight);
        double bias = trials * (edge.weight - edge.exact_weight);
        EXPECT_LT(std::abs(static_cast<double>(by_edge[e]) - static_cast<double>(by_fault[e]) - bias), 5 * sigma)
            << e;
    }
}
