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

#include "mbsurf/experiments.h"

#include <algorithm>
#include <cmath>

#include "gtest/gtest.h"

using namespace mbsurf;

namespace {

bool overlap(double lo1, double hi1, double lo2, double hi2) {
    return lo1 <= hi2 && lo2 <= hi1;
}

}  // namespace

TEST(experiments, wilson_interval) {
    Estimate zero = wilson_estimate(0, 100);
    EXPECT_EQ(zero.rate, 0);
    EXPECT_EQ(zero.ci_lo, 0);
    double z2 = 1.959963984540054 * 1.959963984540054;
    EXPECT_NEAR(zero.ci_hi, z2 / (100 + z2), 1e-12);
    Estimate half = wilson_estimate(50, 100);
    EXPECT_NEAR(half.rate, 0.5, 1e-15);
    EXPECT_NEAR(half.ci_lo + half.ci_hi, 1, 1e-12);
    EXPECT_NEAR(half.ci_hi - half.ci_lo, 0.1918, 1e-3);
    Estimate all = wilson_estimate(10, 10);
    EXPECT_NEAR(all.ci_hi, 1, 1e-12);
    EXPECT_THROW(wilson_estimate(1, 0), std::invalid_argument);
}

TEST(experiments, line_fit) {
    LinearFit f = fit_line({1, 2, 3}, {3, 5, 7});
    EXPECT_NEAR(f.slope, 2, 1e-12);
    EXPECT_NEAR(f.intercept, 1, 1e-12);
    EXPECT_NEAR(f.relative_residual, 0, 1e-12);
    EXPECT_THROW(fit_line({1, 1}, {1, 2}), std::invalid_argument);
}

TEST(experiments, uniform_fit_round_trip) {
    const double c = 0.059787, p_th = 0.0013193;
    std::vector<RatePoint> data;
    for (int d : {3, 5, 7, 9, 11}) {
        for (double p : log_grid(1e-5, 1e-4, 5)) {
            data.push_back({d, p, c * std::pow(p / p_th, 0.5 * (d + 1))});
        }
    }
    ModelFit fit = fit_uniform(data);
    EXPECT_NEAR(fit.parameter("c") / c, 1, 1e-6);
    EXPECT_NEAR(fit.parameter("p_th") / p_th, 1, 1e-6);
    EXPECT_LT(fit.residual, 1e-9);
    EXPECT_THROW(fit.parameter("a"), std::out_of_range);
}

TEST(experiments, per_distance_fit_round_trip) {
    const double p_th = 1.54e-3;
    const std::vector<std::pair<int, double>> cs = {{3, 0.0579}, {5, 0.098}, {7, 0.136}};
    std::vector<RatePoint> data;
    for (const auto &[d, c] : cs) {
        for (double p : log_grid(1e-5, 1e-4, 4)) {
            data.push_back({d, p, c * std::pow(p / p_th, 0.5 * (d + 1))});
        }
    }
    std::vector<ModelFit> fits = fit_per_distance(data, p_th);
    ASSERT_EQ(fits.size(), 3u);
    for (size_t i = 0; i < cs.size(); i++) {
        EXPECT_EQ(fits[i].parameter("d"), cs[i].first);
        EXPECT_NEAR(fits[i].parameter("c") / cs[i].second, 1, 1e-9);
    }
}

TEST(experiments, pseudothreshold_fit_round_trip) {
    const double a = 1.95431, b = 0.512408, p_th = 1.54e-3;
    std::vector<std::pair<int, double>> data;
    for (int d = 5; d <= 41; d += 2) {
        data.push_back({d, p_th * (1 - a * std::pow(d, -b))});
    }
    ModelFit fit = fit_pseudothreshold(data, p_th);
    EXPECT_NEAR(fit.parameter("a") / a, 1, 1e-6);
    EXPECT_NEAR(fit.parameter("b") / b, 1, 1e-6);
    data.push_back({43, 2 * p_th});
    EXPECT_THROW(fit_pseudothreshold(data, p_th), std::invalid_argument);
}

TEST(experiments, time_boundary_fit) {
    const double alpha = 1e-3, beta = 2.5e-3;
    std::vector<uint32_t> rounds;
    std::vector<double> rates;
    for (uint32_t t = 3; t <= 10; t++) {
        rounds.push_back(t);
        rates.push_back(alpha * t + beta);
    }
    TimeBoundaryResult r = fit_time_boundary(5, rounds, rates);
    EXPECT_NEAR(r.alpha, alpha, 1e-12);
    EXPECT_NEAR(r.beta, beta, 1e-12);
    EXPECT_NEAR(r.ratio, alpha * 5 / (alpha * 5 + beta), 1e-12);
    EXPECT_NEAR(r.relative_residual, 0, 1e-12);
    // Only 3 <= T <= 7 lies in the window at d = 5.
    rates.back() = 1;
    EXPECT_NEAR(fit_time_boundary(5, rounds, rates).alpha, alpha, 1e-12);
}

TEST(experiments, config_and_names) {
    ExperimentConfig config;
    EXPECT_NO_THROW(config.validate());
    EXPECT_EQ(config.effective_rounds(), 3u);
    config.distance = 4;
    EXPECT_THROW(config.validate(), std::invalid_argument);
    config.distance = 5;
    config.p = 1.5;
    EXPECT_THROW(config.validate(), std::invalid_argument);
    EXPECT_EQ(parse_sampling_mode(sampling_mode_name(SamplingMode::kFault)), SamplingMode::kFault);
    EXPECT_THROW(parse_sampling_mode("vertex"), std::invalid_argument);
    std::vector<double> grid = log_grid(1e-4, 1e-2, 3);
    ASSERT_EQ(grid.size(), 3u);
    EXPECT_NEAR(grid[1], 1e-3, 1e-15);
}

TEST(experiments, csv_row_format) {
    ExperimentConfig config;
    config.layout = LayoutKind::kDoubleAncilla;
    config.distance = 5;
    config.p = 1e-3;
    config.seed = 9;
    Estimate e = wilson_estimate(3, 1000);
    std::string row = csv_row(config, e);
    EXPECT_EQ(row.rfind("double_ancilla,5,0.001,5,1000,3,0.003,", 0), 0u) << row;
    EXPECT_TRUE(row.ends_with(",9,edge,all")) << row;
    std::string header = csv_header();
    size_t header_fields = std::count(header.begin(), header.end(), ',');
    EXPECT_EQ(static_cast<size_t>(std::count(row.begin(), row.end(), ',')), header_fields);
}

TEST(experiments, zero_noise_never_fails) {
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3, 0);
    Estimate e = estimate_rate(g, 5000, 1, SamplingMode::kEdge, 1);
    EXPECT_EQ(e.failures, 0u);
    e = estimate_rate(g, 5000, 1, SamplingMode::kFault, 1);
    EXPECT_EQ(e.failures, 0u);
}

TEST(experiments, counts_do_not_depend_on_threads) {
    DecodingGraph g = build_decoding_graph(build_double_ancilla_layout(3), 3, 3e-3);
    Estimate one = estimate_rate(g, 20000, 77, SamplingMode::kEdge, 1);
    Estimate three = estimate_rate(g, 20000, 77, SamplingMode::kEdge, 3);
    EXPECT_EQ(one.failures, three.failures);
    EXPECT_EQ(one.trials, 20000u);
    Estimate other = estimate_rate(g, 20000, 78, SamplingMode::kEdge, 1);
    EXPECT_NE(one.failures, other.failures);
}

TEST(experiments, fault_sampling_equals_edge_sampling_at_exact_weights) {
    // Under the inclusive model edges flip independently with probability W'.
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3, 2e-3);
    Estimate fault = estimate_rate(g, 200000, 6, SamplingMode::kFault);
    for (auto &e : g.edges) {
        e.weight = e.exact_weight;
    }
    Estimate edge = estimate_rate(g, 200000, 5, SamplingMode::kEdge);
    EXPECT_TRUE(overlap(edge.ci_lo, edge.ci_hi, fault.ci_lo, fault.ci_hi))
        << edge.rate << " vs " << fault.rate;
}

TEST(experiments, config_estimate_matches_graph_estimate) {
    ExperimentConfig config;
    config.distance = 3;
    config.p = 2e-3;
    config.trials = 4096;
    config.seed = 3;
    config.threads = 1;
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3, 2e-3);
    EXPECT_EQ(estimate_rate(config).failures, estimate_rate(g, 4096, 3, SamplingMode::kEdge, 1).failures);
}

TEST(experiments, importance_sampling_matches_direct_sampling) {
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3, 1e-3);
    ImportanceResult imp = importance_sample(g, 4000, 11, 0);
    EXPECT_EQ(imp.terms.size(), 20u);
    EXPECT_GE(imp.w_start, 2u);
    for (const auto &term : imp.terms) {
        EXPECT_GE(term.b, 0);
        EXPECT_LE(term.b, 1);
        EXPECT_GE(term.a, 0);
    }
    Estimate mc = estimate_rate(g, 200000, 12);
    EXPECT_TRUE(overlap(imp.ci_lo, imp.ci_hi, mc.ci_lo, mc.ci_hi)) << imp.rate << " vs " << mc.rate;
    // Deterministic for a fixed seed.
    EXPECT_EQ(importance_sample(g, 500, 4, 1).rate, importance_sample(g, 500, 4, 2).rate);
}

TEST(experiments, importance_sampling_with_uniform_weights) {
    // With every weight equal, A_w is an exact binomial term.
    DecodingGraph g = build_decoding_graph(build_windmill_layout(3), 3, 1e-3);
    for (auto &e : g.edges) {
        e.weight = 2e-3;
    }
    ImportanceResult imp = importance_sample(g, 200, 13, 1);
    double m = static_cast<double>(g.num_edges());
    for (const auto &term : imp.terms) {
        double w = term.w;
        double log_a = std::lgamma(m + 1) - std::lgamma(w + 1) - std::lgamma(m - w + 1) + w * std::log(2e-3) +
                       (m - w) * std::log1p(-2e-3);
        EXPECT_NEAR(term.a / std::exp(log_a), 1, 1e-9);
        EXPECT_LE(term.a_stderr, 1e-6 * term.a);
    }
}
