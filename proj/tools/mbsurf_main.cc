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

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mbsurf/decoding_graph.h"
#include "mbsurf/experiments.h"
#include "mbsurf/export.h"
#include "mbsurf/gadgets.h"
#include "mbsurf/layouts.h"

using namespace mbsurf;
using nlohmann::json;

namespace {

constexpr const char *kVersion = "0.1.0";

struct Common {
    std::string config;
    std::string manifest;
    std::string out;
    uint64_t seed = 1;
    unsigned threads = 0;
};

void add_common(CLI::App *app, Common &c, bool with_out = true) {
    app->add_option("--config", c.config, "JSON config file (flags take precedence)");
    app->add_option("--manifest", c.manifest, "Run manifest path (default: <out>.manifest.json)");
    if (with_out) {
        app->add_option("--out", c.out, "Output file (default: stdout)");
    }
    app->add_option("--seed", c.seed, "Master seed");
    app->add_option("--threads", c.threads, "Worker threads (0: hardware concurrency)");
}

std::string json_scalar_to_string(const json &v) {
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_boolean()) {
        return v.get<bool>() ? "true" : "false";
    }
    return v.dump();
}

// Fills options not given on the command line from the JSON config file.
void apply_config(CLI::App *app, const std::string &path) {
    if (path.empty()) {
        return;
    }
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path);
    }
    json cfg = json::parse(in);
    if (cfg.contains("config") && cfg["config"].is_object()) {
        cfg = cfg["config"];
    }
    for (CLI::Option *opt : app->get_options()) {
        if (opt->count() > 0 || opt->get_lnames().empty()) {
            continue;
        }
        const std::string &name = opt->get_lnames().front();
        if (name == "config" || name == "manifest" || !cfg.contains(name)) {
            continue;
        }
        const json &v = cfg[name];
        if (v.is_array()) {
            if (v.empty()) {
                continue;
            }
            for (const auto &x : v) {
                opt->add_result(json_scalar_to_string(x));
            }
        } else {
            opt->add_result(json_scalar_to_string(v));
        }
        opt->run_callback();
    }
}

// Writes `text` to `path`, or stdout when empty.
void emit(const std::string &path, const std::string &text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

class Manifest {
   public:
    Manifest(std::string subcommand, const Common &common)
        : subcommand_(std::move(subcommand)), common_(common), start_(std::chrono::steady_clock::now()) {
    }
    json config = json::object();
    std::vector<std::string> outputs;

    void write() const {
        std::string path = common_.manifest;
        if (path.empty()) {
            path = (common_.out.empty() ? "mbsurf_" + subcommand_ : common_.out) + ".manifest.json";
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        json m = {{"subcommand", subcommand_},
                  {"version", kVersion},
                  {"seed", common_.seed},
                  {"config", config},
                  {"outputs", outputs},
                  {"wall_clock_seconds", seconds}};
        std::ofstream out(path);
        out << m.dump(2) << '\n';
    }

   private:
    std::string subcommand_;
    const Common &common_;
    std::chrono::steady_clock::time_point start_;
};

std::vector<double> resolve_grid(const std::vector<double> &ps, const std::vector<double> &grid) {
    if (!grid.empty()) {
        if (grid.size() != 3 || grid[2] < 1) {
            throw std::invalid_argument("--p-grid expects lo hi count");
        }
        return log_grid(grid[0], grid[1], static_cast<size_t>(grid[2]));
    }
    return ps;
}

std::string fmt(double x) {
    std::ostringstream out;
    out << std::setprecision(10) << x;
    return out.str();
}

// ---- verify ----

struct VerifyArgs {
    Common common;
    size_t trials = 100;
    std::vector<int> distances{3, 5, 7};
    std::vector<int> census_distances{3, 5};
    std::string corrupt;
};

int cmd_verify(const VerifyArgs &a) {
    Manifest manifest("verify", a.common);
    manifest.config = {{"trials", a.trials},
                       {"distances", a.distances},
                       {"census-distances", a.census_distances},
                       {"seed", a.common.seed},
                       {"corrupt", a.corrupt},
                       {"out", a.common.out}};
    json report = {{"gadgets", json::array()}, {"layouts", json::array()}, {"census", json::array()}};
    bool ok = true;
    Rng rng(a.common.seed);
    for (ScheduledCircuit g : gadget_catalog()) {
        if (g.name == a.corrupt) {
            // Negative control: drop the last conditional update.
            for (auto step = g.steps.rbegin(); step != g.steps.rend(); ++step) {
                auto it = std::find_if(step->begin(), step->end(), [](const Instruction &i) { return i.has_update(); });
                if (it != step->end()) {
                    it->update = PauliOperator();
                    it->update_ref = kNoMeasurement;
                    break;
                }
            }
        }
        VerifyReport r = verify_gadget_report(g, a.trials, rng);
        ok &= r.ok;
        report["gadgets"].push_back({{"name", g.name},
                                     {"ok", r.ok},
                                     {"inputs", r.inputs},
                                     {"branches", r.branches},
                                     {"steps", g.num_steps()},
                                     {"single", g.count_single()},
                                     {"joint", g.count_joint()},
                                     {"detail", r.detail}});
        std::cerr << (r.ok ? "ok   " : "FAIL ") << "gadget " << g.name << (r.ok ? "" : ": " + r.detail) << '\n';
    }
    for (int d : a.distances) {
        for (LayoutKind kind : {LayoutKind::kWindmill, LayoutKind::kDoubleAncilla}) {
            std::string detail;
            bool good = true;
            try {
                Layout layout = build_layout(kind, d);
                layout.schedule.validate();
                for (const auto &q : layout.qubits) {
                    size_t bound = q.role == QubitRole::kData ? 4 : 5;
                    if (layout.degree(q.id) > bound) {
                        good = false;
                        detail = "degree bound violated at qubit " + std::to_string(q.id);
                    }
                }
                for (const auto &step : layout.schedule.steps) {
                    for (const auto &ins : step) {
                        if (ins.kind == InstructionKind::kJoint && !layout.connected(ins.q0, ins.q1)) {
                            good = false;
                            detail = "joint measurement off the connectivity graph: " + ins.str();
                        }
                    }
                }
            } catch (const std::exception &e) {
                good = false;
                detail = e.what();
            }
            ok &= good;
            report["layouts"].push_back({{"layout", layout_kind_name(kind)}, {"d", d}, {"ok", good}, {"detail", detail}});
            std::cerr << (good ? "ok   " : "FAIL ") << "layout " << layout_kind_name(kind) << " d=" << d
                      << (good ? "" : ": " + detail) << '\n';
        }
    }
    for (int d : a.census_distances) {
        for (LayoutKind kind : {LayoutKind::kWindmill, LayoutKind::kDoubleAncilla}) {
            Layout layout = build_layout(kind, d);
            FlipCensus c = fault_flip_census(layout, d);
            DecodingGraph g = build_decoding_graph(layout, d);
            bool good = c.by_count[3] == 0 && c.undetected_logical == 0 && c.total() == g.faults_per_round() * d;
            ok &= good;
            report["census"].push_back({{"layout", layout_kind_name(kind)},
                                        {"d", d},
                                        {"faults", c.total()},
                                        {"flip0", c.by_count[0]},
                                        {"flip1", c.by_count[1]},
                                        {"flip2", c.by_count[2]},
                                        {"flip3plus", c.by_count[3]},
                                        {"undetected_logical", c.undetected_logical},
                                        {"ok", good}});
            std::cerr << (good ? "ok   " : "FAIL ") << "census " << layout_kind_name(kind) << " d=" << d << ": "
                      << c.total() << " faults, " << c.by_count[3] << " flip three or more\n";
        }
    }
    report["ok"] = ok;
    emit(a.common.out, report.dump(2) + "\n");
    if (!a.common.out.empty()) {
        manifest.outputs.push_back(a.common.out);
    }
    manifest.write();
    return ok ? 0 : 1;
}

// ---- simulate ----

struct SimulateArgs {
    Common common;
    std::vector<std::string> layouts{"windmill"};
    std::vector<int> distances{3};
    std::vector<double> ps{1e-3};
    std::vector<double> p_grid;
    uint64_t trials = 100000;
    uint32_t rounds = 0;
    std::string mode = "edge";
    std::string growth = "all";
    bool pseudothreshold = false;
};

int cmd_simulate(const SimulateArgs &a) {
    Manifest manifest("simulate", a.common);
    std::vector<double> ps = resolve_grid(a.ps, a.p_grid);
    manifest.config = {{"layout", a.layouts}, {"distance", a.distances}, {"p", ps},
                       {"trials", a.trials},  {"rounds", a.rounds},      {"mode", a.mode},
                       {"growth", a.growth},  {"seed", a.common.seed},   {"pseudothreshold", a.pseudothreshold},
                       {"out", a.common.out}};
    std::ostringstream csv;
    uint64_t index = 0;
    if (a.pseudothreshold) {
        csv << "layout,d,p_pseudo,bracket_lo,bracket_hi,trials,seed\n";
        for (const auto &name : a.layouts) {
            for (int d : a.distances) {
                uint64_t seed = a.common.seed + 1000003 * index++;
                PseudothresholdResult r =
                    find_pseudothreshold(parse_layout_kind(name), d, a.trials, seed, a.common.threads);
                csv << layout_kind_name(parse_layout_kind(name)) << ',' << d << ',' << fmt(r.p_pseudo) << ','
                    << fmt(r.bracket_lo) << ',' << fmt(r.bracket_hi) << ',' << a.trials << ',' << seed << '\n';
            }
        }
    } else {
        csv << csv_header() << '\n';
        for (const auto &name : a.layouts) {
            for (int d : a.distances) {
                ExperimentConfig config;
                config.layout = parse_layout_kind(name);
                config.distance = d;
                config.trials = a.trials;
                config.rounds = a.rounds;
                config.mode = parse_sampling_mode(a.mode);
                config.growth = parse_growth_policy(a.growth);
                config.threads = a.common.threads;
                config.validate();
                Layout layout = build_layout(config.layout, d);
                DecodingGraph graph = build_decoding_graph(layout, config.effective_rounds(), ps.empty() ? 0 : ps[0]);
                for (double p : ps) {
                    config.p = p;
                    config.seed = a.common.seed + 1000003 * index++;
                    config.validate();
                    graph.set_noise(p);
                    Estimate e = estimate_rate(graph, config.trials, config.seed, config.mode, config.threads,
                                               config.growth);
                    csv << csv_row(config, e) << '\n';
                }
            }
        }
    }
    emit(a.common.out, csv.str());
    if (!a.common.out.empty()) {
        manifest.outputs.push_back(a.common.out);
    }
    manifest.write();
    return 0;
}

// ---- importance ----

struct ImportanceArgs {
    Common common;
    std::vector<std::string> layouts{"windmill"};
    std::vector<int> distances{3};
    std::vector<double> ps{1e-4};
    std::vector<double> p_grid;
    uint64_t samples = 100000;
    std::string terms;
};

int cmd_importance(const ImportanceArgs &a) {
    Manifest manifest("importance", a.common);
    std::vector<double> ps = resolve_grid(a.ps, a.p_grid);
    manifest.config = {{"layout", a.layouts}, {"distance", a.distances}, {"p", ps},          {"samples", a.samples},
                       {"seed", a.common.seed}, {"terms", a.terms},      {"out", a.common.out}};
    std::ostringstream csv;
    csv << "layout,d,p,samples,p_L,stderr,ci_lo,ci_hi,w_mode,w_start,seed\n";
    json all_terms = json::array();
    uint64_t index = 0;
    for (const auto &name : a.layouts) {
        LayoutKind kind = parse_layout_kind(name);
        for (int d : a.distances) {
            Layout layout = build_layout(kind, d);
            DecodingGraph graph = build_decoding_graph(layout, d, ps.empty() ? 0 : ps[0]);
            for (double p : ps) {
                uint64_t seed = a.common.seed + 1000003 * index++;
                graph.set_noise(p);
                ImportanceResult r = importance_sample(graph, a.samples, seed, a.common.threads);
                csv << layout_kind_name(kind) << ',' << d << ',' << fmt(p) << ',' << a.samples << ',' << fmt(r.rate)
                    << ',' << fmt(r.stderr_) << ',' << fmt(r.ci_lo) << ',' << fmt(r.ci_hi) << ',' << r.w_mode << ','
                    << r.w_start << ',' << seed << '\n';
                json entry = importance_to_json(r);
                entry["layout"] = layout_kind_name(kind);
                entry["d"] = d;
                entry["p"] = p;
                all_terms.push_back(entry);
            }
        }
    }
    emit(a.common.out, csv.str());
    if (!a.common.out.empty()) {
        manifest.outputs.push_back(a.common.out);
    }
    if (!a.terms.empty()) {
        emit(a.terms, all_terms.dump(2) + "\n");
        manifest.outputs.push_back(a.terms);
    }
    manifest.write();
    return 0;
}

// ---- fit ----

struct FitArgs {
    Common common;
    std::string input;
    std::string model = "uniform";
    double p_th = 1.54e-3;
    std::string layout;
};

// Reads a CSV with a header row into columns keyed by name.
std::map<std::string, std::vector<std::string>> read_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    std::string line;
    std::vector<std::string> names;
    std::map<std::string, std::vector<std::string>> cols;
    auto split = [](const std::string &s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            out.push_back(cell);
        }
        return out;
    };
    if (!std::getline(in, line)) {
        throw std::runtime_error("empty CSV " + path);
    }
    names = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto cells = split(line);
        if (cells.size() != names.size()) {
            throw std::runtime_error("ragged CSV row in " + path);
        }
        for (size_t i = 0; i < names.size(); i++) {
            cols[names[i]].push_back(cells[i]);
        }
    }
    return cols;
}

const std::vector<std::string> &column(const std::map<std::string, std::vector<std::string>> &cols,
                                       const std::string &name) {
    auto it = cols.find(name);
    if (it == cols.end()) {
        throw std::runtime_error("CSV lacks column " + name);
    }
    return it->second;
}

int cmd_fit(const FitArgs &a) {
    Manifest manifest("fit", a.common);
    if (a.input.empty()) {
        throw std::invalid_argument("fit needs --in");
    }
    manifest.config = {{"in", a.input}, {"model", a.model}, {"p-th", a.p_th}, {"layout", a.layout}, {"out", a.common.out}};
    auto cols = read_csv(a.input);
    if (!a.layout.empty()) {
        // Keep only rows of one layout.
        const auto &names = column(cols, "layout");
        std::string wanted = layout_kind_name(parse_layout_kind(a.layout));
        std::map<std::string, std::vector<std::string>> kept;
        for (size_t row = 0; row < names.size(); row++) {
            if (names[row] == wanted) {
                for (const auto &[name, values] : cols) {
                    kept[name].push_back(values[row]);
                }
            }
        }
        cols = std::move(kept);
    }
    json out;
    if (a.model == "pseudo") {
        const auto &d = column(cols, "d");
        const auto &pp = column(cols, "p_pseudo");
        std::vector<std::pair<int, double>> data;
        for (size_t i = 0; i < d.size(); i++) {
            data.push_back({std::stoi(d[i]), std::stod(pp[i])});
        }
        out = fit_to_json(fit_pseudothreshold(data, a.p_th));
    } else {
        const auto &d = column(cols, "d");
        const auto &p = column(cols, "p");
        const auto &pl = column(cols, "p_L");
        std::vector<RatePoint> data;
        for (size_t i = 0; i < d.size(); i++) {
            double rate = std::stod(pl[i]);
            if (rate > 0) {
                data.push_back({std::stoi(d[i]), std::stod(p[i]), rate});
            }
        }
        if (a.model == "uniform") {
            out = fit_to_json(fit_uniform(data));
        } else if (a.model == "per_d") {
            out = json::array();
            for (const auto &f : fit_per_distance(data, a.p_th)) {
                out.push_back(fit_to_json(f));
            }
        } else {
            throw std::invalid_argument("unknown model " + a.model + " (uniform, per_d, pseudo)");
        }
    }
    emit(a.common.out, out.dump(2) + "\n");
    if (!a.common.out.empty()) {
        manifest.outputs.push_back(a.common.out);
    }
    manifest.write();
    return 0;
}

// ---- graph ----

struct GraphArgs {
    Common common;
    std::string layout = "windmill";
    int distance = 3;
    uint32_t rounds = 0;
    double p = 1e-3;
    std::string vertices_csv;
    std::string edges_csv;
    std::string layout_json;
};

int cmd_graph(const GraphArgs &a) {
    Manifest manifest("graph", a.common);
    manifest.config = {{"layout", a.layout},
                       {"distance", a.distance},
                       {"rounds", a.rounds},
                       {"p", a.p},
                       {"vertices-csv", a.vertices_csv},
                       {"edges-csv", a.edges_csv},
                       {"layout-json", a.layout_json},
                       {"out", a.common.out}};
    Layout layout = build_layout(parse_layout_kind(a.layout), a.distance);
    DecodingGraph graph = build_decoding_graph(layout, a.rounds == 0 ? a.distance : a.rounds, a.p);
    emit(a.common.out, graph_to_json(graph).dump(2) + "\n");
    if (!a.common.out.empty()) {
        manifest.outputs.push_back(a.common.out);
    }
    if (!a.vertices_csv.empty()) {
        emit(a.vertices_csv, graph_vertices_csv(graph));
        manifest.outputs.push_back(a.vertices_csv);
    }
    if (!a.edges_csv.empty()) {
        emit(a.edges_csv, graph_edges_csv(graph));
        manifest.outputs.push_back(a.edges_csv);
    }
    if (!a.layout_json.empty()) {
        emit(a.layout_json, layout_to_json(layout).dump(2) + "\n");
        manifest.outputs.push_back(a.layout_json);
    }
    manifest.write();
    return 0;
}

// ---- resources ----

struct ResourcesArgs {
    Common common;
    std::vector<std::string> layouts{"windmill", "double_ancilla"};
    std::vector<int> distances{3, 5, 7, 9};
};

int cmd_resources(const ResourcesArgs &a) {
    Manifest manifest("resources", a.common);
    manifest.config = {{"layout", a.layouts}, {"distance", a.distances}, {"out", a.common.out}};
    std::ostringstream csv;
    csv << "layout,d,qubits,steps_per_round,steps_per_cycle,spacetime_volume\n";
    for (const auto &name : a.layouts) {
        LayoutKind kind = parse_layout_kind(name);
        for (int d : a.distances) {
            ResourceMetrics m = resource_metrics(kind, d);
            csv << layout_kind_name(kind) << ',' << d << ',' << m.qubits << ',' << m.steps_per_round << ','
                << m.steps_per_cycle << ',' << m.spacetime_volume << '\n';
        }
    }
    emit(a.common.out, csv.str());
    if (!a.common.out.empty()) {
        manifest.outputs.push_back(a.common.out);
    }
    manifest.write();
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Measurement-based surface code toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    VerifyArgs verify;
    CLI::App *v = app.add_subcommand("verify", "Check gadgets, layouts and the fault-to-edge property");
    add_common(v, verify.common);
    v->add_option("--trials", verify.trials, "Random inputs per gadget");
    v->add_option("--distances", verify.distances, "Layout distances to check");
    v->add_option("--census-distances", verify.census_distances, "Distances for the fault census");
    v->add_option("--corrupt", verify.corrupt, "Gadget name to corrupt (negative control)");

    SimulateArgs sim;
    CLI::App *s = app.add_subcommand("simulate", "Monte Carlo memory experiments");
    add_common(s, sim.common);
    s->add_option("--layout", sim.layouts, "windmill and/or double_ancilla");
    s->add_option("--distance", sim.distances, "Code distances");
    s->add_option("--p", sim.ps, "Physical error rates");
    s->add_option("--p-grid", sim.p_grid, "Log grid: lo hi count")->expected(3);
    s->add_option("--trials", sim.trials, "Trials per point");
    s->add_option("--rounds", sim.rounds, "Noisy rounds (0: distance)");
    s->add_option("--mode", sim.mode, "edge or fault sampling");
    s->add_option("--growth", sim.growth, "Cluster growth: all or smallest");
    s->add_flag("--pseudothreshold", sim.pseudothreshold, "Search p_L(p) = p per distance instead");

    ImportanceArgs imp;
    CLI::App *i = app.add_subcommand("importance", "Importance-sampled logical error rates");
    add_common(i, imp.common);
    i->add_option("--layout", imp.layouts, "windmill and/or double_ancilla");
    i->add_option("--distance", imp.distances, "Code distances");
    i->add_option("--p", imp.ps, "Physical error rates");
    i->add_option("--p-grid", imp.p_grid, "Log grid: lo hi count")->expected(3);
    i->add_option("--samples", imp.samples, "Samples per w");
    i->add_option("--terms", imp.terms, "JSON file for the per-w terms");

    FitArgs fit;
    CLI::App *f = app.add_subcommand("fit", "Fit logical-rate or pseudothreshold models");
    add_common(f, fit.common);
    f->add_option("--in", fit.input, "Input CSV (simulate/importance output, or d,p_pseudo)");
    f->add_option("--model", fit.model, "uniform, per_d or pseudo");
    f->add_option("--p-th", fit.p_th, "Fixed threshold for per_d and pseudo");
    f->add_option("--layout", fit.layout, "Only fit rows of this layout");

    GraphArgs graph;
    CLI::App *g = app.add_subcommand("graph", "Export the decoding graph");
    add_common(g, graph.common);
    g->add_option("--layout", graph.layout, "windmill or double_ancilla");
    g->add_option("--distance", graph.distance, "Code distance");
    g->add_option("--rounds", graph.rounds, "Noisy rounds (0: distance)");
    g->add_option("--p", graph.p, "Physical error rate for the weights");
    g->add_option("--vertices-csv", graph.vertices_csv, "Vertex table CSV");
    g->add_option("--edges-csv", graph.edges_csv, "Edge table CSV");
    g->add_option("--layout-json", graph.layout_json, "Layout JSON");

    ResourcesArgs res;
    CLI::App *r = app.add_subcommand("resources", "Qubit and time-step counts");
    add_common(r, res.common);
    r->add_option("--layout", res.layouts, "Layouts");
    r->add_option("--distance", res.distances, "Code distances");

    CLI11_PARSE(app, argc, argv);

    try {
        if (v->parsed()) {
            apply_config(v, verify.common.config);
            return cmd_verify(verify);
        }
        if (s->parsed()) {
            apply_config(s, sim.common.config);
            return cmd_simulate(sim);
        }
        if (i->parsed()) {
            apply_config(i, imp.common.config);
            return cmd_importance(imp);
        }
        if (f->parsed()) {
            apply_config(f, fit.common.config);
            return cmd_fit(fit);
        }
        if (g->parsed()) {
            apply_config(g, graph.common.config);
            return cmd_graph(graph);
        }
        if (r->parsed()) {
            apply_config(r, res.common.config);
            return cmd_resources(res);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
