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

#ifndef MBSURF_EXPERIMENTS_H
#define MBSURF_EXPERIMENTS_H

#include <cstdint>
#include <string>
#include <vector>

#include "mbsurf/decoding_graph.h"
#include "mbsurf/layouts.h"
#include "mbsurf/noise.h"
#include "mbsurf/uf_decoder.h"

namespace mbsurf {

struct Estimate {
    uint64_t trials = 0;
    uint64_t failures = 0;
    double rate = 0;
    double ci_lo = 0;
    double ci_hi = 0;
};

/// Binomial estimate with a Wilson score interval (95% by default).
Estimate wilson_estimate(uint64_t failures, uint64_t trials, double z = 1.959963984540054);

enum class SamplingMode { kEdge, kFault };
std::string sampling_mode_name(SamplingMode mode);
SamplingMode parse_sampling_mode(const std::string &name);

struct ExperimentConfig {
    LayoutKind layout = LayoutKind::kWindmill;
    int distance = 3;
    double p = 1e-3;
    uint64_t trials = 100000;
    /// Noisy rounds; 0 means the distance.
    uint32_t rounds = 0;
    uint64_t seed = 1;
    SamplingMode mode = SamplingMode::kEdge;
    GrowthPolicy growth = GrowthPolicy::kAllActive;
    /// Worker threads; 0 means hardware concurrency.
    unsigned threads = 0;

    uint32_t effective_rounds() const {
        return rounds == 0 ? static_cast<uint32_t>(distance) : rounds;
    }
    void validate() const;
};

/// Trials are split into blocks of this size; block b draws from an rng
/// seeded by (seed, b), so counts do not depend on the thread count.
constexpr uint64_t kTrialBlock = 1024;
Rng block_rng(uint64_t seed, uint64_t block);

/// One memory-experiment trial: sample flips, decode, check the residual.
class TrialRunner {
   public:
    TrialRunner(const DecodingGraph &graph, SamplingMode mode = SamplingMode::kEdge,
                GrowthPolicy growth = GrowthPolicy::kAllActive);
    bool run(Rng &rng);
    /// Decodes a given set of flipped edges; true iff logical failure.
    bool decode_flips(const std::vector<EdgeId> &flipped);

   private:
    const DecodingGraph *graph_;
    SamplingMode mode_;
    EdgeSampler edge_sampler_;
    FaultSampler fault_sampler_;
    UnionFindDecoder decoder_;
    std::vector<EdgeId> flipped_;
    std::vector<SampledFault> faults_;
    std::vector<VertexId> syndrome_;
    std::vector<uint8_t> parity_;
    std::vector<VertexId> dirty_;
};

bool run_trial(const DecodingGraph &graph, Rng &rng);

/// Runs `trials` trials on a graph whose weights are already set.
Estimate estimate_rate(const DecodingGraph &graph, uint64_t trials, uint64_t seed,
                       SamplingMode mode = SamplingMode::kEdge, unsigned threads = 0,
                       GrowthPolicy growth = GrowthPolicy::kAllActive);
/// Builds the layout and graph described by `config` and estimates p_L.
Estimate estimate_rate(const ExperimentConfig &config);

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    /// sqrt(sum r^2 / sum y^2) over the fitted points.
    double relative_residual = 0;
};

/// Ordinary least squares y = slope * x + intercept (needs 2 distinct x).
LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y);

struct TimeBoundaryResult {
    std::vector<uint32_t> rounds;
    std::vector<Estimate> estimates;
    /// p_logical(T) ~ alpha * T + beta over 0.6 <= T/d <= 1.5.
    double alpha = 0;
    double beta = 0;
    double relative_residual = 0;
    /// alpha * d / p_logical(T = d).
    double ratio = 0;
};

TimeBoundaryResult time_boundary_sweep(LayoutKind kind, int d, double p, const std::vector<uint32_t> &rounds,
                                       uint64_t trials, uint64_t seed, unsigned threads = 0);
/// Fit part of the sweep on given points (used for synthetic checks).
TimeBoundaryResult fit_time_boundary(int d, const std::vector<uint32_t> &rounds, const std::vector<double> &rates);

struct ImportanceTerm {
    uint32_t w = 0;
    double a = 0;
    double a_stderr = 0;
    double b = 0;
    uint64_t b_failures = 0;
};

struct ImportanceResult {
    double rate = 0;
    double stderr_ = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    uint32_t w_mode = 0;
    uint32_t w_start = 0;
    uint64_t samples = 0;
    std::vector<ImportanceTerm> terms;
};

/// Importance sampling over the number w of flipped edges: estimates A_w by
/// uniform w-subsets and B_w by w-subsets drawn with weights W/(1-W), over a
/// window of 20 values of w starting at max(t + 1, w' - 10).
ImportanceResult importance_sample(const DecodingGraph &graph, uint64_t samples, uint64_t seed, unsigned threads = 0,
                                   int max_t = 6);

struct ModelFit {
    std::string model;
    std::vector<std::pair<std::string, double>> parameters;
    double residual = 0;
    double parameter(const std::string &name) const;
};

struct RatePoint {
    int d = 0;
    double p = 0;
    double p_logical = 0;
};

/// p_L = c(d) (p / p_th)^((d+1)/2) with p_th fixed; one fit per distance.
std::vector<ModelFit> fit_per_distance(const std::vector<RatePoint> &data, double p_th);
/// p_L = c (p / p'_th)^((d+1)/2) with c and p'_th shared across distances.
ModelFit fit_uniform(const std::vector<RatePoint> &data);
/// p_pseudo = p_th (1 - a d^-b) with p_th fixed; points are (d, p_pseudo).
ModelFit fit_pseudothreshold(const std::vector<std::pair<int, double>> &data, double p_th);

struct PseudothresholdResult {
    double p_pseudo = 0;
    /// Final bisection bracket.
    double bracket_lo = 0;
    double bracket_hi = 0;
    /// Local power law p_L = exp(log_c) p^exponent fitted to the probes.
    double log_c = 0;
    double exponent = 0;
    std::vector<std::pair<double, Estimate>> probes;
};

/// Bisection on log p for p_L(p) = p; the crossing is solved on a power law
/// fitted to the probes.
PseudothresholdResult find_pseudothreshold(LayoutKind kind, int d, uint64_t trials_per_point, uint64_t seed,
                                           unsigned threads = 0, double p_lo = 1e-5, double p_hi = 2e-3,
                                           int iterations = 6);

/// Log-spaced grid of `count` points in [lo, hi].
std::vector<double> log_grid(double lo, double hi, size_t count);

/// Header and row of the results CSV.
std::string csv_header();
std::string csv_row(const ExperimentConfig &config, const Estimate &estimate);

}  // namespace mbsurf

#endif
