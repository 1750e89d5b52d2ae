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

#ifndef MBSURF_EXPORT_H
#define MBSURF_EXPORT_H

#include <string>

#include "json.hpp"
#include "mbsurf/circuit.h"
#include "mbsurf/decoding_graph.h"
#include "mbsurf/experiments.h"
#include "mbsurf/layouts.h"

namespace mbsurf {

/// Steps as lists of instruction strings, plus readouts and counts.
nlohmann::json circuit_to_json(const ScheduledCircuit &circuit);
/// Qubits (id, role, x, y), connectivity, plaquettes and the round schedule.
nlohmann::json layout_to_json(const Layout &layout);
/// Vertex table, edge table (u, v, W, W', preimage size) and logical-cut ids.
nlohmann::json graph_to_json(const DecodingGraph &graph);
/// "id,layer,plaquette,is_boundary" rows.
std::string graph_vertices_csv(const DecodingGraph &graph);
/// "id,u,v,W,W_exact,preimage,logical" rows.
std::string graph_edges_csv(const DecodingGraph &graph);

nlohmann::json estimate_to_json(const Estimate &estimate);
nlohmann::json fit_to_json(const ModelFit &fit);
nlohmann::json importance_to_json(const ImportanceResult &result);

}  // namespace mbsurf

#endif
