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

#ifndef QTAIL_CONFIG_H
#define QTAIL_CONFIG_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qtail/harness.h"

namespace qtail {

enum class ModelKind { Gg1, MaxWeight, Jsq };

std::string model_name(ModelKind kind);

/// User-supplied MaxWeight drift certificate. p may instead be estimated from a trajectory.
struct DriftCertificate {
    double eps = 0;
    double nu = 0;
    int64_t m = 1;
    double p = 0;
    bool estimate_p = false;
    std::vector<double> weights;  // drift set C = {q : sum w_i q_i <= level}
    double level = 0;
    int64_t estimate_slots = 1000000;
};

struct PlanConfig {
    std::optional<double> eps_tot;
    std::optional<int> k;
    double alpha_Q = 0.05;
    std::optional<double> beta;  // overrides the computed drift rate (GI/GI/1)
    std::optional<double> gamma;  // JSQ cycle-length decay rate for the arrival-count exponent
};

struct VerifyConfig {
    std::vector<std::string> suites;
    int64_t n_cycles = 100000;
    int64_t long_run_length = 10000000;
    int64_t truncation_M = 0;  // 0: planned M
    double clip_B = 0;         // 0: planned B
    int64_t R_A = 0;           // 0: the model's arrival cap
    int64_t n_batches = 20;
};

struct ResourcesConfig {
    int64_t B_A = 8;
    int64_t B_S = 8;
    int64_t B_Y = 8;
    int64_t seed_bits_m = 0;  // 0: run.seed_bits_m
    int64_t M = 0;            // 0: planned M
};

struct ScalingConfig {
    double a = 0.01;
    std::vector<double> eps = {1e-2, 3e-3, 1e-3, 3e-4};
    double delta = 0.05;
    int64_t runs = 50;
};

struct RunConfig {
    ModelKind model = ModelKind::Gg1;
    Gg1Model gg1;
    WirelessParams maxweight;
    DriftCertificate drift;
    JsqParams jsq;
    PlanConfig plan;
    EstimateMode mode = EstimateMode::ClassicalMc;
    RunOptions run;
    VerifyConfig verify;
    ResourcesConfig resources;
    ScalingConfig scaling;
    std::string output_dir;
    /// The input document with seed and thread overrides applied; hashed for provenance.
    nlohmann::json effective;
};

/// Parses and validates a configuration document. Violations throw Error(InvalidConfig) with a message that
/// starts with the JSON pointer of the offending value.
RunConfig parse_run_config(const nlohmann::json &doc);

/// Reads and parses a file; parse errors are InvalidConfig, unreadable files Io.
nlohmann::json load_json_file(const std::string &path);

/// Applies seed and thread overrides and refreshes `effective`.
void apply_overrides(RunConfig &config, std::optional<uint64_t> seed, std::optional<int> threads);

/// FNV-1a 64 of the canonical dump of `effective` without the thread count and output paths, as 16 hex digits.
std::string config_hash(const RunConfig &config);

}  // namespace qtail

#endif
