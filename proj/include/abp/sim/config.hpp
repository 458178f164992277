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

#ifndef ABP_SIM_CONFIG_H
#define ABP_SIM_CONFIG_H

#include "abp/feedback.hpp"
#include "abp/metrics.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace abp::sim
{
    const std::vector<std::string> &experiment_ids();

    enum class GainNormalization
    {
        unit,
        array_gain
    };

    struct ExperimentConfig
    {
        std::string experiment = "maee_vs_snr";
        std::uint64_t seed = 1;
        int trials = 500;
        int threads = 1;
        std::vector<double> snr_db;

        ArrayConfig arrays;
        CoverageSectors sectors;
        OfdmConfig ofdm;
        GainNormalization normalization = GainNormalization::array_gain;

        // narrowband Rician channel
        double k_factor_db = 13.2;
        int n_nlos = 5;

        // clustered wideband channel, including chi and varsigma
        ClusterProfile cluster;

        // pilots
        std::vector<int> roots{25, 29, 34};
        int shift_p = 6;
        PilotLayout pilot_layout = PilotLayout::dc_punctured;
        int window = 0;

        // feedback
        int quant_bits = 3;
        std::vector<int> quant_bits_sweep{2, 3, 4, 5, 6}; // total bits, sign included for differential
        std::vector<int> n_y_sweep{8, 16};
        DifferentialVariant variant = DifferentialVariant::magnitude_sign;

        // probing, one entry per stream count
        std::vector<int> n_s{2, 3};
        std::vector<int> n_tx{20, 30};
        std::vector<int> m_rx{20, 25};

        OverheadModel overhead;
        int n_bm = 10;
        int m_bm = 4;

        std::vector<double> sweep; // varsigma in degrees or chi, per experiment
        RatioInversion inversion = RatioInversion::array_factor;
        bool plots = true;

        std::set<std::string> explicit_keys;

        double gain_scale() const;
        void validate() const;
    };

    // Defaults for one experiment family
    ExperimentConfig defaults_for(const std::string &experiment);

    // key = value lines, '#' comments. Unknown keys and bad values raise ParseError.
    ExperimentConfig validate_config(const std::string &raw_text);

    // "a:step:b" or comma separated values
    std::vector<double> parse_grid(const std::string &text);

    std::string describe(const ExperimentConfig &cfg);
}

#endif
