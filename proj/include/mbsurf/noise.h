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

#ifndef MBSURF_NOISE_H
#define MBSURF_NOISE_H

#include <cstdint>
#include <vector>

#include "mbsurf/decoding_graph.h"
#include "mbsurf/stabilizer_state.h"

namespace mbsurf {

/// Distribution or rate table over Z_2^n indexed by fault bits (size 2^n).
using FaultTable = std::vector<double>;

/// Uniform in [0, 1) with 53 random bits.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Number of failures before the first success of a Bernoulli(p) sequence,
/// given log1p(-p). Saturates at UINT64_MAX for p = 0.
uint64_t geometric_skip(Rng &rng, double log_one_minus_p);

/// Exclusive model with rate p spread uniformly over the nontrivial faults.
FaultTable uniform_exclusive(int n, double p);

/// Exclusive model induced by independent inclusive rates P (P[0] ignored).
/// Exact: subset enumeration for n <= 3, XOR convolution above.
FaultTable induced_exclusive(int n, const FaultTable &inclusive);

/// Constant inclusive rate inducing the uniform exclusive model with Q(f) = q
/// for every nontrivial f. Requires 0 <= q <= 2^-n.
double inclusive_from_uniform(int n, double q, bool plus_branch = false);

/// Inclusive rate for an n-bit location whose exclusive fault rate is p.
double inclusive_rate(int n, double p);

/// Draws from the inclusive model with the same rate on every nontrivial
/// fault: XOR of independently occurring faults.
class InclusiveSampler {
   public:
    InclusiveSampler(int n, double rate);
    uint32_t sample(Rng &rng) const;

   private:
    int n_;
    double log_one_minus_rate_;
};

/// Flips every edge independently with probability W(e). Edges with equal
/// weight are grouped and sampled by geometric skipping.
class EdgeSampler {
   public:
    explicit EdgeSampler(const DecodingGraph &graph);
    /// Replaces `flipped` with the sampled edge ids (unsorted).
    void sample(Rng &rng, std::vector<EdgeId> &flipped) const;

   private:
    struct Class {
        double log_one_minus_w;
        std::vector<EdgeId> edges;
    };
    std::vector<Class> classes_;
};

/// One faulty location: global index (round - 1) * sites + site, and bits.
struct SampledFault {
    uint64_t location = 0;
    uint8_t bits = 0;
};

/// Exclusive uniform model at rate p over every location of rounds 1..T:
/// each location faulty with probability p, fault uniform over its
/// nontrivial elements.
class FaultSampler {
   public:
    FaultSampler(const DecodingGraph &graph, double p);
    void sample(Rng &rng, std::vector<SampledFault> &faults) const;
    /// Edges flipped an odd number of times by `faults`.
    void to_edges(const std::vector<SampledFault> &faults, std::vector<EdgeId> &flipped) const;
    uint64_t num_locations() const {
        return num_locations_;
    }

   private:
    const DecodingGraph *graph_;
    double log_one_minus_p_;
    uint64_t num_locations_;
};

}  // namespace mbsurf

#endif
