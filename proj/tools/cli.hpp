// Copyright 2026 The tomocs Authors
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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace tomocs::cli {

/// Process exit status of every command.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitInfeasible = 3,
  kExitMaxIterations = 4,
  kExitIo = 5,
};

/// Record of one command invocation, written next to every output file.
/// Replaying `argv` reproduces the outputs bit-exactly (with --no-timing for
/// commands that report wall-clock time).
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  nlohmann::json inputs = nlohmann::json::object();    // path -> sha256
  nlohmann::json outputs = nlohmann::json::object();   // path -> sha256
  nlohmann::json sensing_cache = nlohmann::json::object();
  std::string tool_version;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

/// Sidecar path "<output>.manifest.json".
std::filesystem::path manifest_path(const std::filesystem::path& output);

/// Runs the command line (argv[0] is the program name). Diagnostics go to
/// \p err, short summaries to \p out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

const char* tool_version();

}  // namespace tomocs::cli
