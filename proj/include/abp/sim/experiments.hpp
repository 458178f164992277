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

#ifndef ABP_SIM_EXPERIMENTS_H
#define ABP_SIM_EXPERIMENTS_H

#include "abp/sim/config.hpp"
#include "abp/sim/plot.hpp"
#include "abp/sim/table.hpp"

#include <functional>
#include <string>
#include <vector>

namespace abp::sim
{
    struct NamedPlot
    {
        std::string name; // file stem
        PlotSpec spec;
    };

    struct RunResult
    {
        std::vector<Table> tables; // first entry is the experiment's main table
        Table metrics;             // experiment, snr_db, scheme, metric, value, ci95
        std::vector<NamedPlot> plots;
    };

    // Stream ids for derive_seed(master, trial, stream, sub)
    enum class Stream : std::uint64_t
    {
        channel = 1,
        noise = 2,
        probing = 3,
        selection = 4
    };

    std::uint64_t trial_seed(std::uint64_t master, int trial, Stream s, std::uint64_t sub = 0);

    // Runs fn(trial) for every trial on `threads` workers; results are indexed by trial
    void for_each_trial(int trials, int threads, const std::function<void(int)> &fn);

    RunResult run_experiment(const ExperimentConfig &cfg);

    // Writes <stem>.csv for every table, metrics.csv and optionally <stem>.svg.
    // Returns the written paths.
    std::vector<std::string> emit_outputs(const RunResult &result, const std::string &out_dir, bool plots);
}

#endif
