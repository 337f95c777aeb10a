// Copyright 2026 The qtail Authors
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

#ifndef QTAIL_COMMANDS_H
#define QTAIL_COMMANDS_H

#include <string>

#include "json.hpp"
#include "qtail/config.h"

namespace qtail {

constexpr const char *kToolName = "qtail";
constexpr const char *kToolVersion = "0.1.0";

enum class OutputFormat { Json, Csv };

struct CommandResult {
    std::string artifact;   // file contents
    std::string extension;  // "json" or "csv"
    int exit_code = 0;      // 0 ok, 2 certification or bound check failed
};

/// Runs one subcommand (plan, estimate, certify, verify, resources, qae-scaling) and renders its artifact.
/// Artifacts depend only on the configuration (thread count excluded). Errors propagate as qtail::Error.
CommandResult run_command(const std::string &command, const RunConfig &config, OutputFormat format);

/// JSON renderings used inside the artifacts.
nlohmann::json to_json(const HorizonPlan &plan);
nlohmann::json to_json(const CertificationReport &report);
nlohmann::json to_json(const BoundCheckReport &report);
nlohmann::json to_json(const ResourceReport &report);
nlohmann::json to_json(const MaxWeightDriftSpec &spec);

}  // namespace qtail

#endif
