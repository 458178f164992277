// SPDX-License-Identifier: Apache-2.0
//
// abp-sim: auxiliary beam pair angle estimation for mmWave MIMO links
// Copyright (C) 2026 The abp-sim contributors
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

#include "abp/sim/experiments.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace
{
    std::string read_file(const std::string &path)
    {
        std::ifstream is(path, std::ios::binary);
        if (!is)
            throw abp::Error(abp::ErrorCode::IoError, "cannot read config '" + path + "'");
        std::ostringstream ss;
        ss << is.rdbuf();
        return ss.str();
    }

    int exit_code(const abp::Error &e)
    {
        switch (e.code())
        {
        case abp::ErrorCode::ParseError:
        case abp::ErrorCode::ConfigError:
            return 2;
        case abp::ErrorCode::IoError:
            return 3;
        default:
            return 1;
        }
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Auxiliary beam pair channel estimation simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "results";
    std::uint64_t seed = 0;
    int trials = 0, threads = 0;
    bool no_plots = false;

    auto *run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("config", config_path, "Config file (key = value lines)")->required();
    auto *seed_opt = run->add_option("--seed", seed, "Master seed");
    auto *trials_opt = run->add_option("--trials", trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    auto *threads_opt = run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    run->add_option("--out-dir", out_dir, "Output directory");
    run->add_flag("--no-plots", no_plots, "Skip SVG plots");

    std::string validate_path;
    auto *val = app.add_subcommand("validate", "Parse and check a config file");
    val->add_option("config", validate_path, "Config file")->required();

    auto *list = app.add_subcommand("list-experiments", "Print the experiment ids");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (list->parsed())
        {
            for (const auto &id : abp::sim::experiment_ids())
                std::cout << id << "\n";
            return 0;
        }
        if (val->parsed())
        {
            const auto cfg = abp::sim::validate_config(read_file(validate_path));
            std::cout << abp::sim::describe(cfg);
            return 0;
        }

        auto cfg = abp::sim::validate_config(read_file(config_path));
        if (*seed_opt)
            cfg.seed = seed;
        if (*trials_opt)
            cfg.trials = trials;
        if (*threads_opt)
            cfg.threads = threads;
        if (no_plots)
            cfg.plots = false;
        const auto result = abp::sim::run_experiment(cfg);
        for (const auto &path : abp::sim::emit_outputs(result, out_dir, cfg.plots))
            std::cout << path << "\n";
        return 0;
    }
    catch (const abp::Error &e)
    {
        std::cerr << "abpsim: " << e.what() << "\n";
        return exit_code(e);
    }
    catch (const std::exception &e)
    {
        std::cerr << "abpsim: " << e.what() << "\n";
        return 1;
    }
}
