// Copyright 2026 The reachcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>

#include "reachcert/search.hpp"
#include "reachcert/synth.hpp"

namespace reachcert {

// All emitted documents carry "schema": 1; parsers reject other versions.
inline constexpr int kSchemaVersion = 1;

// SuperOpMatrix <-> {"schema", "d", "kind": "channel"|"generator",
//                    "mat": row-major flat array of d^4 numbers}
std::string superop_to_json(const SuperOpMatrix& s);
SuperOpMatrix superop_from_json(const std::string& text);

// Model descriptors: {"family": "gad"|"dephasing"|"depolarizing"|"lambda"|
// "random", ...params}.  Returns the master-equation data; `random`
// additionally consumes "d", "scale" and "seed".
LindbladData model_from_json(const std::string& text);

// GeneratorSpec <-> {"schema", "segments": [{"duration", "generator"}]}
std::string spec_to_json(const GeneratorSpec& spec);
GeneratorSpec spec_from_json(const std::string& text);

// Certification report, stable field names:
// {"schema", "det_time": {...}, "evaluated_time", "anisotropy": {...},
//  "unital_anisotropy": {...}, "non_unitality": [...], "overall"}
std::string report_to_json(const CriterionReport& report);

// Bang-bang schedule <-> {"schema", "d", "weights", "residual", "steps":
// [{"rotation_axis": [x,y,z], "angle": a} | {"free_time": t}]}.
// Axis-angle export is defined for qubit schedules.
std::string schedule_to_json(const SynthesisResult& result);
ControlSchedule schedule_from_json(const std::string& text);

}  // namespace reachcert
