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

#include <optional>
#include <string>
#include <vector>

#include "qmt/scenario.hpp"

namespace qmt::cli {

struct RunOptions {
  std::string command;
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool allow_nonconvex = false;
  bool dump_normalized = false;
  std::vector<std::string> overrides;
  int threads = 1;
};

/// A single rendered output file.
struct TaskOutput {
  std::string file;
  std::string content;
  int exit_code = kOk;
  std::string message;
};

/// Runs one task block of a normalized scenario on a validated structure.
TaskOutput run_task(const DifferentialStructure& ds, const ThetaAssignment& theta,
                    const json& task, std::uint64_t seed, bool allow_nonconvex);

/// Entry point shared by the executable and the tests. Returns the exit code.
int run(const RunOptions& opt);

/// printf("%.17g").
std::string format_real(double x);

}  // namespace qmt::cli
