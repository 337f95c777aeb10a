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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qtail/commands.h"
#include "qtail/config.h"
#include "qtail/error.h"

using namespace qtail;

namespace {

std::optional<std::string> env(const char *name) {
    const char *v = std::getenv(name);
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

uint64_t parse_u64(const std::string &text, const char *what) {
    try {
        size_t used = 0;
        if (!text.empty() && text[0] == '-') {
            throw std::invalid_argument("negative");
        }
        uint64_t v = std::stoull(text, &used, 0);
        if (used != text.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return v;
    } catch (const std::exception &) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be an unsigned integer, got '" + text + "'");
    }
}

int run(int argc, char **argv) {
    CLI::App app{"Regenerative delay-tail estimation with emulated amplitude estimation"};
    std::string command;
    std::string config_path;
    std::optional<std::string> seed_flag;
    std::optional<int> threads_flag;
    std::string out_dir;
    std::string format_name;
    app.add_option("command", command, "plan | estimate | certify | verify | resources | qae-scaling")
        ->required()
        ->check(CLI::IsMember({"plan", "estimate", "certify", "verify", "resources", "qae-scaling"}));
    app.add_option("--config", config_path, "run configuration (JSON)")->required();
    app.add_option("--seed", seed_flag, "master seed (overrides QTAIL_SEED and the config)");
    app.add_option("--threads", threads_flag, "worker threads, 0 for all cores (overrides QTAIL_THREADS)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_dir, "directory for artifacts; standard output when omitted");
    app.add_option("--format", format_name, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg = parse_run_config(load_json_file(config_path));
        std::optional<uint64_t> seed;
        std::optional<int> threads;
        if (auto s = env("QTAIL_SEED")) {
            seed = parse_u64(*s, "QTAIL_SEED");
        }
        if (auto t = env("QTAIL_THREADS")) {
            threads = static_cast<int>(parse_u64(*t, "QTAIL_THREADS"));
        }
        if (seed_flag) {
            seed = parse_u64(*seed_flag, "--seed");
        }
        if (threads_flag) {
            threads = *threads_flag;
        }
        apply_overrides(cfg, seed, threads);

        OutputFormat format = command == "qae-scaling" ? OutputFormat::Csv : OutputFormat::Json;
        if (!format_name.empty()) {
            format = format_name == "csv" ? OutputFormat::Csv : OutputFormat::Json;
        }
        std::cerr << "qtail " << command << ": model " << model_name(cfg.model) << ", seed " << cfg.run.master_seed
                  << ", threads " << cfg.run.threads << "\n";
        CommandResult result = run_command(command, cfg, format);

        std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
        if (dir.empty()) {
            std::cout << result.artifact;
        } else {
            std::filesystem::create_directories(dir);
            std::filesystem::path path = std::filesystem::path(dir) / (command + "." + result.extension);
            std::ofstream file(path, std::ios::binary);
            file << result.artifact;
            if (!file) {
                throw Error(ErrorCode::Io, "cannot write " + path.string());
            }
            std::cerr << "wrote " << path.string() << "\n";
        }
        if (result.exit_code == 2) {
            std::cerr << "qtail " << command << ": check failed\n";
        }
        return result.exit_code;
    } catch (const Error &e) {
        std::cerr << "error: " << error_code_name(e.code()) << ": " << e.what() << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "error: " << error_code_name(ErrorCode::Io) << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char **argv) {
    return run(argc, argv);
}
