// Copyright 2026 qmstransport Authors
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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qmt/funcineq.hpp"

namespace qmt::cli {

using nlohmann::json;

enum ExitCode { kOk = 0, kValidation = 2, kSolver = 3, kSchema = 4 };

/// Malformed scenario. The message carries the field path or line/column.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Scenario {
  json normalized;  // canonical form with every default filled in
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

/// Parses scenario text into canonical form. Throws SchemaError.
Scenario parse_scenario(const std::string& text);
Scenario normalize(const json& raw);

/// Builds the structure of a normalized scenario (not validated).
DifferentialStructure make_structure(const json& normalized);
ThetaAssignment make_theta(const DifferentialStructure& ds, const json& normalized);

/// Appends a default block for `cmd` when the scenario has none.
void ensure_task(Scenario& sc, const std::string& cmd);

/// Applies KEY=VAL overrides to every task block.
void apply_overrides(Scenario& sc, const std::vector<std::string>& overrides);

Mat parse_matrix(const json& j, const std::string& path);
json matrix_json(const Mat& m);

}  // namespace qmt::cli
