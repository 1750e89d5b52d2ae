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
#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mbsurf {

namespace {

unsigned resolve_threads(unsigned threads) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    return threads;
}

Rng stream_rng(std::initializer_list<uint64_t> words) {
    std::vector<uint32_t> seeds;
    for (uint64_t w : words) {
        seeds.push_back(static_cast<uint32_t>(w));
        seeds.push_back(static_cast<uint32_t>(w >> 32));
    }
    std::seed_seq seq(seeds.begin(), seeds.end());
    return Rng(seq);
}

// Runs body(block, worker_state) for blocks 0..num_blocks-1 over `threads` workers.
template <typename MakeState, typename Body>
void parallel_blocks(uint64_t num_blocks, unsigned threads, MakeState make_state, Body body) {
    threads = static_cast<unsigned>(std::min<uint64_t>(resolve_threads(threads), std::max<uint64_t>(num_blocks, 1)));
    std::atomic<uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        try {
            auto state = make_state();
            for (uint64_t b = next++; b < num_blocks; b = next++) {
                body(b, state);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            error = std::current_exception();
            next = num_blocks;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; i++) {
            pool.emplace_back(worker);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

double log_binomial(uint64_t n, uint64_t k) {
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

}  // namespace

Estimate wilson_estimate(uint64_t failures, uint64_t trials, double z) {
    if (failures > trials) {
        throw std::invalid_argument("more failures than trials");
    }
    Estimate e;
    e.trials = trials;
    e.failures = failures;
    if (trials == 0) {
        e.ci_hi = 1;
        return e;
    }
    double n = static_cast<double>(trials);
    double phat = failures / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    e.rate = phat;
    e.ci_lo = failures == 0 ? 0.0 : std::max(0.0, center - half);
    e.ci_hi = failures == trials ? 1.0 : std::min(1.0, center + half);
    return e;
}

std::string sampling_mode_name(SamplingMode mode) {
    return mode == SamplingMode::kEdge ? "edge" : "fault";
}

SamplingMode parse_sampling_mode(const std::string &name) {
    if (name == "edge") {
        return SamplingMode::kEdge;
    }
    if (name == "fault") {
        return SamplingMode::kFault;
    }
    throw std::invalid_argument("unknown sampling mode: " + name);
}

void ExperimentConfig::validate() const {
    if (distance < 3 || distance % 2 == 0) {
        throw std::invalid_argument("distance must be odd and at least 3");
    }
    if (!(p >= 0 && p < 1)) {
        throw std::invalid_argument("p must lie in [0, 1)");
    }
    if (trials < 1) {
        throw std::invalid_argument("at least one trial is required");
    }
}

Rng block_rng(uint64_t seed, uint64_t block) {
    return stream_rng({seed, block});
}

TrialRunner::TrialRunner(const DecodingGraph &graph, SamplingMode mode, GrowthPolicy growth)
    : graph_(&graph),
      mode_(mode),
      edge_sampler_(graph),
      fault_sampler_(graph, graph.p),
      decoder_(graph, growth),
      parity_(graph.num_vertices(), 0) {
}

bool TrialRunner::run(Rng &rng) {
    if (mode_ == SamplingMode::kEdge) {
        edge_sampler_.sample(rng, flipped_);
    } else {
        fault_sampler_.sample(rng, faults_);
        fault_sampler_.to_edges(faults_, flipped_);
    }
    if (flipped_.empty()) {
        return false;
    }
    return decode_flips(flipped_);
}

bool TrialRunner::decode_flips(const std::vector<EdgeId> &flipped) {
    const DecodingGraph &g = *graph_;
    dirty_.clear();
    bool logical = false;
    for (EdgeId e : flipped) {
        for (VertexId v : {g.edges[e].u, g.edges[e].v}) {
            if (parity_[v] == 0 && std::find(dirty_.begin(), dirty_.end(), v) == dirty_.end()) {
                dirty_.push_back(v);
            }
            parity_[v] ^= 1;
        }
        logical ^= g.edges[e].logical;
    }
    syndrome_.clear();
    for (VertexId v : dirty_) {
        if (parity_[v]) {
            syndrome_.push_back(v);
        }
        parity_[v] = 0;
    }
    if (syndrome_.empty()) {
        return logical;
    }
    std::sort(syndrome_.begin(), syndrome_.end());
    for (EdgeId e : decoder_.decode(syndrome_)) {
        logical ^= g.edges[e].logical;
    }
    return logical;
}

bool run_trial(const DecodingGraph &graph, Rng &rng) {
    TrialRunner runner(graph);
    return runner.run(rng);
}

Estimate estimate_rate(const DecodingGraph &graph, uint64_t trials, uint64_t seed, SamplingMode mode,
                       unsigned threads, GrowthPolicy growth) {
    uint64_t blocks = (trials + kTrialBlock - 1) / kTrialBlock;
    std::vector<uint64_t> failures(blocks, 0);
    parallel_blocks(
        blocks, threads, [&]() { return TrialRunner(graph, mode, growth); },
        [&](uint64_t b, TrialRunner &runner) {
            Rng rng = block_rng(seed, b);
            uint64_t count = std::min(kTrialBlock, trials - b * kTrialBlock);
            uint64_t f = 0;
            for (uint64_t i = 0; i < count; i++) {
                f += runner.run(rng);
            }
            failures[b] = f;
        });
    return wilson_estimate(std::accumulate(failures.begin(), failures.end(), uint64_t{0}), trials);
}

Estimate estimate_rate(const ExperimentConfig &config) {
    config.validate();
    Layout layout = build_layout(config.layout, config.distance);
    DecodingGraph graph = build_decoding_graph(layout, config.effective_rounds(), config.p);
    return estimate_rate(graph, config.trials, config.seed, config.mode, config.threads, config.growth);
}

LinearFit fit_line(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("line fit needs at least two points");
    }
    double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); i++) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) {
        throw std::invalid_argument("line fit needs two distinct abscissae");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double rr = 0, yy = 0;
    for (size_t i = 0; i < x.size(); i++) {
        double r = y[i] - (fit.slope * x[i] + fit.intercept);
        rr += r * r;
        yy += y[i] * y[i];
    }
    fit.relative_residual = yy > 0 ? std::sqrt(rr / yy) : 0;
    return fit;
}

TimeBoundaryResult fit_time_boundary(int d, const std::vector<uint32_t> &rounds, const std::vector<double> &rates) {
    if (rounds.size() != rates.size() || rounds.size() < 2) {
        throw std::invalid_argument("time-boundary fit needs at least two round counts");
    }
    TimeBoundaryResult out;
    out.rounds = rounds;
    std::vector<double> x, y;
    double at_d = -1;
    for (size_t i = 0; i < rounds.size(); i++) {
        double ratio = static_cast<double>(rounds[i]) / d;
        if (ratio >= 0.6 - 1e-12 && ratio <= 1.5 + 1e-12) {
            x.push_back(rounds[i]);
            y.push_back(rates[i]);
        }
        if (rounds[i] == static_cast<uint32_t>(d)) {
            at_d = rates[i];
        }
    }
    if (x.size() < 2) {
        throw std::invalid_argument("fewer than two round counts inside 0.6 <= T/d <= 1.5");
    }
    LinearFit fit = fit_line(x, y);
    out.alpha = fit.slope;
    out.beta = fit.intercept;
    out.relative_residual = fit.relative_residual;
    if (at_d < 0) {
        at_d = fit.slope * d + fit.intercept;
    }
    out.ratio = at_d > 0 ? fit.slope * d / at_d : 0;
    return out;
}

TimeBoundaryResult time_boundary_sweep(LayoutKind kind, int d, double p, const std::vector<uint32_t> &rounds,
                                       uint64_t trials, uint64_t seed, unsigned threads) {
    if (rounds.size() < 2) {
        throw std::invalid_argument("time-boundary sweep needs at least two round counts");
    }
    Layout layout = build_layout(kind, d);
    std::vector<Estimate> estimates;
    std::vector<double> rates;
    for (uint32_t t : rounds) {
        if (t < 1) {
            throw std::invalid_argument("round counts must be positive");
        }
        DecodingGraph graph = build_decoding_graph(layout, t, p);
        estimates.push_back(estimate_rate(graph, trials, seed + t, SamplingMode::kEdge, threads));
        rates.push_back(estimates.back().rate);
    }
    TimeBoundaryResult out = fit_time_boundary(d, rounds, rates);
    out.estimates = std::move(estimates);
    return out;
}

ImportanceResult importance_sample(const DecodingGraph &graph, uint64_t samples, uint64_t seed, unsigned threads,
                                   int max_t) {
    int t = (graph.distance - 1) / 2;
    if (t > max_t) {
        throw std::invalid_argument("importance sampling is limited to t <= " + std::to_string(max_t));
    }
    if (samples < 2) {
        throw std::invalid_argument("importance sampling needs at least two samples per w");
    }
    const size_t m = graph.num_edges();
    double mu = 0, log_none = 0;
    std::vector<double> logit(m), rate(m);
    for (size_t e = 0; e < m; e++) {
        double w = graph.edges[e].weight;
        if (w >= 1) {
            throw std::domain_error("edge weight must be below 1");
        }
        mu += w;
        log_none += std::log1p(-w);
        logit[e] = std::log(w) - std::log1p(-w);
        rate[e] = w / (1 - w);
    }
    ImportanceResult out;
    out.samples = samples;
    // Mode of Binomial(|E|, mu / |E|).
    out.w_mode = static_cast<uint32_t>(std::floor((m + 1) * (mu / m)));
    out.w_start = static_cast<uint32_t>(std::max<int64_t>(t + 1, static_cast<int64_t>(out.w_mode) - 10));
    uint32_t w_end = static_cast<uint32_t>(std::min<uint64_t>(out.w_start + 19, m));
    uint64_t blocks = (samples + kTrialBlock - 1) / kTrialBlock;
    double var = 0;

    struct Scratch {
        std::vector<EdgeId> perm;
        std::vector<std::pair<double, EdgeId>> keys;
        std::vector<EdgeId> chosen;
        TrialRunner runner;
    };
    for (uint32_t w = out.w_start; w <= w_end; w++) {
        double log_count = log_binomial(m, w);
        std::vector<double> sum(blocks, 0), sum_sq(blocks, 0);
        std::vector<uint64_t> fails(blocks, 0);
        parallel_blocks(
            blocks, threads,
            [&]() {
                Scratch s{std::vector<EdgeId>(m), {}, {}, TrialRunner(graph)};
                std::iota(s.perm.begin(), s.perm.end(), 0);
                s.keys.resize(m);
                return s;
            },
            [&](uint64_t b, Scratch &s) {
                Rng rng = stream_rng({seed, w, b});
                uint64_t count = std::min(kTrialBlock, samples - b * kTrialBlock);
                for (uint64_t i = 0; i < count; i++) {
                    // Uniform w-subset via a partial shuffle.
                    double log_prob = log_none + log_count;
                    for (uint32_t j = 0; j < w; j++) {
                        size_t k = j + static_cast<size_t>(uniform01(rng) * (m - j));
                        std::swap(s.perm[j], s.perm[k]);
                        log_prob += logit[s.perm[j]];
                    }
                    double v = std::exp(log_prob);
                    sum[b] += v;
                    sum_sq[b] += v * v;
                    // Weighted subset without replacement: w smallest Exp(1)/rate keys.
                    for (size_t e = 0; e < m; e++) {
                        double u = 1.0 - uniform01(rng);
                        s.keys[e] = {rate[e] > 0 ? -std::log(u) / rate[e] : INFINITY, static_cast<EdgeId>(e)};
                    }
                    std::nth_element(s.keys.begin(), s.keys.begin() + (w - 1), s.keys.end());
                    s.chosen.clear();
                    for (uint32_t j = 0; j < w; j++) {
                        s.chosen.push_back(s.keys[j].second);
                    }
                    fails[b] += s.runner.decode_flips(s.chosen);
                }
            });
        double n = static_cast<double>(samples);
        double a = std::accumulate(sum.begin(), sum.end(), 0.0) / n;
        double a2 = std::accumulate(sum_sq.begin(), sum_sq.end(), 0.0) / n;
        double a_var = std::max(0.0, a2 - a * a) / (n - 1);
        uint64_t f = std::accumulate(fails.begin(), fails.end(), uint64_t{0});
        double bw = f / n;
        ImportanceTerm term{w, a, std::sqrt(a_var), bw, f};
        out.terms.push_back(term);
        out.rate += a * bw;
        var += bw * bw * a_var + a * a * bw * (1 - bw) / n;
    }
    out.stderr_ = std::sqrt(var);
    out.ci_lo = std::max(0.0, out.rate - 1.959963984540054 * out.stderr_);
    out.ci_hi = out.rate + 1.959963984540054 * out.stderr_;
    return out;
}

double ModelFit::parameter(const std::string &name) const {
    for (const auto &[k, v] : parameters) {
        if (k == name) {
            return v;
        }
    }
    throw std::out_of_range("no fit parameter " + name);
}

std::vector<ModelFit> fit_per_distance(const std::vector<RatePoint> &data, double p_th) {
    std::vector<int> ds;
    for (const auto &pt : data) {
        ds.push_back(pt.d);
    }
    std::sort(ds.begin(), ds.end());
    ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
    std::vector<ModelFit> out;
    for (int d : ds) {
        // log c = mean of log p_L - (d+1)/2 log(p / p_th).
        std::vector<double> r;
        for (const auto &pt : data) {
            if (pt.d == d) {
                if (pt.p <= 0 || pt.p_logical <= 0) {
                    throw std::invalid_argument("fit points must be positive");
                }
                r.push_back(std::log(pt.p_logical) - 0.5 * (d + 1) * std::log(pt.p / p_th));
            }
        }
        if (r.size() < 2) {
            throw std::invalid_argument("per-distance fit needs two points for d = " + std::to_string(d));
        }
        double log_c = std::accumulate(r.begin(), r.end(), 0.0) / r.size();
        double res = 0;
        for (double x : r) {
            res += (x - log_c) * (x - log_c);
        }
        out.push_back({"per_d", {{"d", d}, {"c", std::exp(log_c)}, {"p_th", p_th}}, std::sqrt(res)});
    }
    return out;
}

ModelFit fit_uniform(const std::vector<RatePoint> &data) {
    // y = log p_L - k log p = log c - k log p'_th with k = (d+1)/2:
    // a line in k with slope -log p'_th and intercept log c.
    std::vector<double> k, y;
    for (const auto &pt : data) {
        if (pt.p <= 0 || pt.p_logical <= 0) {
            throw std::invalid_argument("fit points must be positive");
        }
        double kk = 0.5 * (pt.d + 1);
        k.push_back(kk);
        y.push_back(std::log(pt.p_logical) - kk * std::log(pt.p));
    }
    if (data.size() < 4) {
        throw std::invalid_argument("uniform fit needs at least four points");
    }
    LinearFit fit = fit_line(k, y);
    double res = 0;
    for (size_t i = 0; i < k.size(); i++) {
        double r = y[i] - (fit.slope * k[i] + fit.intercept);
        res += r * r;
    }
    return {"uniform", {{"c", std::exp(fit.intercept)}, {"p_th", std::exp(-fit.slope)}}, std::sqrt(res)};
}

ModelFit fit_pseudothreshold(const std::vector<std::pair<int, double>> &data, double p_th) {
    // log(p_th - p_pseudo) = log(p_th a) - b log d.
    std::vector<double> x, y;
    for (const auto &[d, pp] : data) {
        if (pp >= p_th || pp <= 0) {
            throw std::invalid_argument("pseudothresholds must lie in (0, p_th)");
        }
        x.push_back(std::log(static_cast<double>(d)));
        y.push_back(std::log(p_th - pp));
    }
    if (x.size() < 4) {
        throw std::invalid_argument("pseudothreshold fit needs at least four points");
    }
    LinearFit fit = fit_line(x, y);
    double res = 0;
    for (size_t i = 0; i < x.size(); i++) {
        double r = y[i] - (fit.slope * x[i] + fit.intercept);
        res += r * r;
    }
    return {"pseudothreshold", {{"a", std::exp(fit.intercept) / p_th}, {"b", -fit.slope}, {"p_th", p_th}},
            std::sqrt(res)};
}

PseudothresholdResult find_pseudothreshold(LayoutKind kind, int d, uint64_t trials_per_point, uint64_t seed,
                                           unsigned threads, double p_lo, double p_hi, int iterations) {
    Layout layout = build_layout(kind, d);
    DecodingGraph graph = build_decoding_graph(layout, static_cast<uint32_t>(d), p_lo);
    PseudothresholdResult out;
    uint64_t probe_index = 0;
    auto probe = [&](double p) {
        graph.set_noise(p);
        Estimate e = estimate_rate(graph, trials_per_point, seed + 7919 * probe_index++, SamplingMode::kEdge, threads);
        out.probes.push_back({p, e});
        return e.rate;
    };
    for (int i = 0; probe(p_lo) >= p_lo; i++) {
        if (i == 4) {
            throw std::runtime_error("no pseudothreshold bracket below " + std::to_string(p_lo));
        }
        p_lo /= 4;
    }
    for (int i = 0; probe(p_hi) <= p_hi; i++) {
        if (i == 4 || p_hi > 0.05) {
            throw std::runtime_error("no pseudothreshold bracket above " + std::to_string(p_hi));
        }
        p_hi *= 2;
    }
    for (int i = 0; i < iterations; i++) {
        double mid = std::sqrt(p_lo * p_hi);
        if (probe(mid) < mid) {
            p_lo = mid;
        } else {
            p_hi = mid;
        }
    }
    out.bracket_lo = p_lo;
    out.bracket_hi = p_hi;
    // Weighted power-law fit over probes near the crossing; weight = failures,
    // the inverse variance of log p_L.
    double lo = p_lo / 8, hi = p_hi * 8;
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &[p, e] : out.probes) {
        if (p < lo || p > hi || e.failures == 0) {
            continue;
        }
        double wgt = static_cast<double>(e.failures);
        double x = std::log(p), y = std::log(e.rate);
        sw += wgt;
        sx += wgt * x;
        sy += wgt * y;
        sxx += wgt * x * x;
        sxy += wgt * x * y;
    }
    double det = sw * sxx - sx * sx;
    if (sw > 0 && det > 1e-12 * sw * sw) {
        out.exponent = (sw * sxy - sx * sy) / det;
        out.log_c = (sy - out.exponent * sx) / sw;
    }
    if (out.exponent > 1) {
        out.p_pseudo = std::exp(out.log_c / (1 - out.exponent));
        out.p_pseudo = std::clamp(out.p_pseudo, p_lo, p_hi);
    } else {
        out.p_pseudo = std::sqrt(p_lo * p_hi);
    }
    return out;
}

std::vector<double> log_grid(double lo, double hi, size_t count) {
    if (count == 0 || lo <= 0 || hi < lo) {
        throw std::invalid_argument("invalid log grid");
    }
    std::vector<double> out;
    for (size_t i = 0; i < count; i++) {
        double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        out.push_back(std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo))));
    }
    return out;
}

std::string csv_header() {
    return "layout,d,p,T,trials,failures,p_L,ci_lo,ci_hi,seed,mode,growth";
}

std::string csv_row(const ExperimentConfig &config, const Estimate &e) {
    std::ostringstream out;
    out << std::setprecision(10) << layout_kind_name(config.layout) << ',' << config.distance << ',' << config.p << ','
        << config.effective_rounds() << ',' << e.trials << ',' << e.failures << ',' << e.rate << ',' << e.ci_lo << ','
        << e.ci_hi << ',' << config.seed << ',' << sampling_mode_name(config.mode) << ','
        << growth_policy_name(config.growth);
    return out.str();
}

}  // namespace mbsurf
