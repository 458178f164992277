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

#ifndef ABP_METRICS_H
#define ABP_METRICS_H

#include "abp/estimator.hpp"

#include <cstdint>
#include <vector>

namespace abp
{
    // Mean absolute difference of angles given in radians, reported in degrees
    double maee(const std::vector<double> &truth, const std::vector<double> &estimates, bool wrap = false);
    double maqe(const std::vector<double> &estimates, const std::vector<double> &quantized);

    struct Summary
    {
        double mean = 0.0;
        double ci95 = 0.0; // half-width of the normal-approximation interval
        std::size_t n = 0;
    };

    Summary summarize(const std::vector<double> &values);

    // (1/N) sum_k log2 det(I + gamma / n_s * H_TR H_TR^*), H_TR = W^* H[k] F
    double spectral_efficiency(const ChannelRealization &ch, const CMatrix &F, const CMatrix &W, double gamma, int n_s);

    struct OverheadModel
    {
        double epsilon_t = 1000.0;
        int t_tot = 200;
        void validate() const;
    };

    std::int64_t abp_complexity(int n_rf, int n_tx, int m_rf, int m_rx);
    std::int64_t gob_complexity(int n_bm, int m_bm, int n_rf, int m_rf);
    int estimation_slots(std::int64_t iterations, const OverheadModel &ov);
    double normalized_spectral_efficiency(double R, std::int64_t iterations, const OverheadModel &ov);

    struct Beamformers
    {
        CMatrix F, W;
    };

    // One steering column per stream at the given spatial frequencies. The
    // polarization half follows the codebook coverage split.
    Beamformers steering_beamformers(const Codebooks &cb, const std::vector<SpatialFrequencies> &dirs);
    Beamformers beamformers_from_estimates(const Codebooks &cb, const EstimationReport &rep, int n_s);
    // Dominant paths ranked by the power each delivers through its own steering pair
    Beamformers beamformers_from_truth(const Codebooks &cb, const ChannelRealization &ch, int n_s);
}

#endif
