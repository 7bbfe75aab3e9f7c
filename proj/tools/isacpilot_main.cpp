// SPDX-License-Identifier: Apache-2.0
//
// isacpilot - mutual-information pilot design for integrated sensing and communication
// Copyright (C) 2026 The isacpilot authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// isacpilot <task> --config <file> [--seed N] [--out DIR] [--threads N]
// isacpilot verify --config <file> --out DIR

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "isacpilot/experiment.hpp"
#include "isacpilot/parallel.hpp"

int main(int argc, char** argv)
{
    using namespace isacpilot;

    CLI::App app{"Mutual-information pilot design for integrated sensing and communication"};
    app.set_version_flag("--version", std::string(version_string));

    std::string task;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    unsigned threads = 0;

    app.add_option("task", task,
                   "optimize | sweep | pareto-cloud | roc | nmse | ser | gradcheck | diagnostics | verify")
        ->required();
    app.add_option("--config", config_path, "experiment configuration (JSON)")->required();
    auto* seed_opt = app.add_option("--seed", seed, "master seed, overrides the config");
    auto* out_opt = app.add_option("--out", out_dir, "output directory, overrides the config");
    auto* threads_opt =
        app.add_option("--threads", threads, "worker threads (default: hardware concurrency)")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::Success& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return 2;
    }

    if (threads_opt->count())
        set_worker_threads(threads);

    if (task == "verify")
    {
        if (!out_opt->count())
        {
            std::cerr << "error: verify requires --out\n";
            return 2;
        }
        return verify_outputs(config_path, out_dir);
    }

    const auto parsed = parse_task(task);
    if (!parsed)
    {
        std::cerr << "error: unknown task '" << task << "'\n";
        return 2;
    }
    RunOptions options;
    if (seed_opt->count())
        options.seed = seed;
    if (out_opt->count())
        options.out_dir = out_dir;
    return run_config(*parsed, config_path, options);
}
