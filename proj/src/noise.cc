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

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace mbsurf {

namespace {

void check_bits(int n) {
    if (n < 1 || n > 8) {
        throw std::invalid_argument("fault bit count out of range: " + std::to_string(n));
    }
}

}  // namespace

uint64_t geometric_skip(Rng &rng, double log_one_minus_p) {
    if (log_one_minus_p == 0) {
        return UINT64_MAX;
    }
    double u = 1.0 - uniform01(rng);
    double k = std::floor(std::log(u) / log_one_minus_p);
    return k >= 1.8e19 ? UINT64_MAX : static_cast<uint64_t>(k);
}

FaultTable uniform_exclusive(int n, double p) {
    check_bits(n);
    size_t size = size_t{1} << n;
    FaultTable q(size, p / static_cast<double>(size - 1));
    q[0] = 1 - p;
    return q;
}

FaultTable induced_exclusive(int n, const FaultTable &inclusive) {
    check_bits(n);
    size_t size = size_t{1} << n;
    if (inclusive.size() != size) {
        throw std::invalid_argument("inclusive table has the wrong size");
    }
    FaultTable q(size, 0.0);
    if (n <= 3) {
        // Every subset S of the nontrivial faults contributes to Q(XOR of S).
        size_t m = size - 1;
        for (uint64_t subset = 0; subset < (uint64_t{1} << m); subset++) {
            double prob = 1;
            size_t x = 0;
            for (size_t f = 1; f <= m; f++) {
                if ((subset >> (f - 1)) & 1) {
                    prob *= inclusive[f];
                    x ^= f;
                } else {
                    prob *= 1 - inclusive[f];
                }
            }
            q[x] += prob;
        }
        return q;
    }
    q[0] = 1;
    FaultTable next(size);
    for (size_t f = 1; f < size; f++) {
        double p = inclusive[f];
        for (size_t x = 0; x < size; x++) {
            next[x] = (1 - p) * q[x] + p * q[x ^ f];
        }
        q.swap(next);
    }
    return q;
}

double inclusive_from_uniform(int n, double q, bool plus_branch) {
    check_bits(n);
    double bound = std::ldexp(1.0, -n);
    if (q < 0 || q > bound * (1 + 1e-12)) {
        throw std::domain_error("exclusive rate outside [0, 2^-n]");
    }
    double radicand = std::max(0.0, 1 - std::ldexp(q, n));
    double root = std::pow(radicand, std::ldexp(1.0, 1 - n));
    if (plus_branch) {
        return 0.5 + 0.5 * root;
    }
    // 0.5 * (1 - root) without cancellation for small q.
    return -0.5 * std::expm1(std::ldexp(1.0, 1 - n) * std::log1p(-std::ldexp(q, n)));
}

double inclusive_rate(int n, double p) {
    return inclusive_from_uniform(n, p / static_cast<double>((1 << n) - 1));
}

InclusiveSampler::InclusiveSampler(int n, double rate) : n_(n), log_one_minus_rate_(std::log1p(-rate)) {
    check_bits(n);
    if (rate < 0 || rate >= 1) {
        throw std::domain_error("inclusive rate outside [0, 1)");
    }
}

uint32_t InclusiveSampler::sample(Rng &rng) const {
    uint32_t m = (1u << n_) - 1;
    uint32_t x = 0;
    uint64_t pos = 0;
    while (true) {
        uint64_t skip = geometric_skip(rng, log_one_minus_rate_);
        if (skip >= m - pos) {
            return x;
        }
        pos += skip;
        x ^= static_cast<uint32_t>(pos + 1);
        pos++;
    }
}

EdgeSampler::EdgeSampler(const DecodingGraph &graph) {
    std::map<double, size_t> index;
    for (EdgeId e = 0; e < graph.num_edges(); e++) {
        double w = graph.edges[e].weight;
        if (w <= 0) {
            continue;
        }
        if (w > 1) {
            throw std::domain_error("edge weight above 1");
        }
        auto [it, inserted] = index.try_emplace(w, classes_.size());
        if (inserted) {
            classes_.push_back({w >= 1 ? -INFINITY : std::log1p(-w), {}});
        }
        classes_[it->second].edges.push_back(e);
    }
}

void EdgeSampler::sample(Rng &rng, std::vector<EdgeId> &flipped) const {
    flipped.clear();
    for (const Class &c : classes_) {
        size_t size = c.edges.size();
        size_t pos = 0;
        while (true) {
            uint64_t skip = c.log_one_minus_w == -INFINITY ? 0 : geometric_skip(rng, c.log_one_minus_w);
            if (skip >= size - pos) {
                break;
            }
            pos += skip;
            flipped.push_back(c.edges[pos]);
            pos++;
        }
    }
}

FaultSampler::FaultSampler(const DecodingGraph &graph, double p)
    : graph_(&graph), log_one_minus_p_(std::log1p(-p)), num_locations_(uint64_t{graph.rounds} * graph.sites.size()) {
    if (p < 0 || p >= 1) {
        throw std::domain_error("fault rate outside [0, 1)");
    }
}

void FaultSampler::sample(Rng &rng, std::vector<SampledFault> &faults) const {
    faults.clear();
    uint64_t pos = 0;
    size_t sites = graph_->sites.size();
    while (true) {
        uint64_t skip = geometric_skip(rng, log_one_minus_p_);
        if (skip >= num_locations_ - pos) {
            return;
        }
        pos += skip;
        int n = graph_->sites[pos % sites].num_bits();
        // Unbiased pick in 1..2^n - 1 by rejection.
        uint64_t f;
        do {
            f = rng() >> (64 - n);
        } while (f == 0);
        faults.push_back({pos, static_cast<uint8_t>(f)});
        pos++;
    }
}

void FaultSampler::to_edges(const std::vector<SampledFault> &faults, std::vector<EdgeId> &flipped) const {
    flipped.clear();
    size_t sites = graph_->sites.size();
    for (const SampledFault &f : faults) {
        EdgeId e = graph_->edge_of(static_cast<uint32_t>(f.location / sites + 1),
                                   static_cast<uint32_t>(f.location % sites), f.bits);
        if (e != kNoEdge) {
            flipped.push_back(e);
        }
    }
    std::sort(flipped.begin(), flipped.end());
    // Keep edges hit an odd number of times.
    size_t out = 0;
    for (size_t i = 0; i < flipped.size();) {
        size_t j = i;
        while (j < flipped.size() && flipped[j] == flipped[i]) {
            j++;
        }
        if ((j - i) & 1) {
            flipped[out++] = flipped[i];
        }
        i = j;
    }
    flipped.resize(out);
}

}  // namespace mbsurf
