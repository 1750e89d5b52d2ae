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

#include "mbsurf/export.h"

#include <iomanip>
#include <sstream>

namespace mbsurf {

using nlohmann::json;

json circuit_to_json(const ScheduledCircuit &circuit) {
    json steps = json::array();
    for (const auto &step : circuit.steps) {
        json ops = json::array();
        for (const auto &ins : step) {
            ops.push_back(ins.str());
        }
        steps.push_back(ops);
    }
    json readouts = json::array();
    for (const auto &r : circuit.readouts) {
        readouts.push_back({{"name", r.name}, {"refs", r.refs}});
    }
    return {{"name", circuit.name},
            {"num_qubits", circuit.num_qubits},
            {"num_steps", circuit.num_steps()},
            {"single_measurements", circuit.count_single()},
            {"joint_measurements", circuit.count_joint()},
            {"steps", steps},
            {"readouts", readouts}};
}

json layout_to_json(const Layout &layout) {
    json qubits = json::array();
    for (const auto &q : layout.qubits) {
        qubits.push_back({{"id", q.id},
                          {"role", q.role == QubitRole::kData ? "data" : "ancilla"},
                          {"x", q.x},
                          {"y", q.y},
                          {"plaquette", q.plaquette}});
    }
    json edges = json::array();
    for (const auto &[a, b] : layout.connectivity) {
        edges.push_back({a, b});
    }
    json plaquettes = json::array();
    for (const auto &p : layout.code.plaquettes) {
        plaquettes.push_back({{"type", p.type == Axis::X ? "X" : "Z"},
                              {"row", p.row},
                              {"col", p.col},
                              {"support", p.support}});
    }
    return {{"layout", layout_kind_name(layout.kind)},
            {"distance", layout.code.distance},
            {"qubits", qubits},
            {"connectivity", edges},
            {"plaquettes", plaquettes},
            {"logical_x", layout.code.logical_x.str()},
            {"logical_z", layout.code.logical_z.str()},
            {"schedule", circuit_to_json(layout.schedule)}};
}

json graph_to_json(const DecodingGraph &graph) {
    json vertices = json::array();
    for (VertexId v = 0; v < graph.num_vertices(); v++) {
        vertices.push_back({{"id", v},
                            {"layer", graph.layer(v)},
                            {"plaquette", graph.plaquette(v)},
                            {"is_boundary", v == kBoundaryVertex}});
    }
    json edges = json::array();
    for (EdgeId e = 0; e < graph.num_edges(); e++) {
        const GraphEdge &edge = graph.edges[e];
        edges.push_back({{"id", e},
                         {"u", edge.u},
                         {"v", edge.v},
                         {"W", edge.weight},
                         {"W_exact", edge.exact_weight},
                         {"preimage", edge.preimage_size()},
                         {"logical", edge.logical}});
    }
    return {{"layout", layout_kind_name(graph.kind)},
            {"distance", graph.distance},
            {"rounds", graph.rounds},
            {"p", graph.p},
            {"num_vertices", graph.num_vertices()},
            {"num_edges", graph.num_edges()},
            {"vertices", vertices},
            {"edges", edges},
            {"logical_cut", graph.logical_cut()}};
}

std::string graph_vertices_csv(const DecodingGraph &graph) {
    std::ostringstream out;
    out << "id,layer,plaquette,is_boundary\n";
    for (VertexId v = 0; v < graph.num_vertices(); v++) {
        out << v << ',' << graph.layer(v) << ',' << graph.plaquette(v) << ',' << (v == kBoundaryVertex) << '\n';
    }
    return out.str();
}

std::string graph_edges_csv(const DecodingGraph &graph) {
    std::ostringstream out;
    out << std::setprecision(17) << "id,u,v,W,W_exact,preimage,logical\n";
    for (EdgeId e = 0; e < graph.num_edges(); e++) {
        const GraphEdge &edge = graph.edges[e];
        out << e << ',' << edge.u << ',' << edge.v << ',' << edge.weight << ',' << edge.exact_weight << ','
            << edge.preimage_size() << ',' << edge.logical << '\n';
    }
    return out.str();
}

json estimate_to_json(const Estimate &e) {
    return {{"trials", e.trials}, {"failures", e.failures}, {"p_L", e.rate}, {"ci_lo", e.ci_lo}, {"ci_hi", e.ci_hi}};
}

json fit_to_json(const ModelFit &fit) {
    json params = json::object();
    for (const auto &[k, v] : fit.parameters) {
        params[k] = v;
    }
    return {{"model", fit.model}, {"parameters", params}, {"residual", fit.residual}};
}

json importance_to_json(const ImportanceResult &r) {
    json terms = json::array();
    for (const auto &t : r.terms) {
        terms.push_back({{"w", t.w}, {"A", t.a}, {"A_stderr", t.a_stderr}, {"B", t.b}, {"B_failures", t.b_failures}});
    }
    return {{"p_L", r.rate}, {"stderr", r.stderr_}, {"ci_lo", r.ci_lo},          {"ci_hi", r.ci_hi},
            {"w_mode", r.w_mode}, {"w_start", r.w_start}, {"samples", r.samples}, {"terms", terms}};
}

}  // namespace mbsurf
