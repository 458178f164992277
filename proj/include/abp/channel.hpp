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

#ifndef ABP_CHANNEL_H
#define ABP_CHANNEL_H

#include "abp/geometry.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace abp
{
    enum class PulseShape
    {
        unit_sample,
        raised_cosine
    };

    struct OfdmConfig
    {
        int n_subcarriers = 512;
        int cp_length = 64;
        double subcarrier_spacing = 270e3;             // Hz
        double sample_period = 1.0 / (512.0 * 270e3); // s
        PulseShape pulse = PulseShape::raised_cosine;
        double rolloff = 0.25;

        // N-point OFDM grid with T_s = 1 / (N * spacing)
        static OfdmConfig profile(int n, int cp, double spacing = 270e3);
        static OfdmConfig narrowband();
        double cp_duration() const { return cp_length * sample_period; }
        void validate() const;
    };

    struct PathParams
    {
        cd g_vv = 1.0;
        cd g_vh = 0.0;
        cd g_hv = 0.0;
        cd g_hh = 0.0;
        double tau = 0.0;
        AngleSet angles;
    };

    struct CrossPolConfig
    {
        double chi = 0.2;
        double varsigma = deg2rad(20.0);
    };

    // Per-block gains of the partitioned cross-polarized channel
    struct BlockGains
    {
        cd vv, vh, hv, hh;
    };

    enum class Pol
    {
        v,
        h
    };

    struct ChannelRealization
    {
        ArrayConfig arrays;
        OfdmConfig ofdm;
        std::vector<CMatrix> H; // M_tot x N_tot per subcarrier
        std::vector<PathParams> paths;
        std::optional<CrossPolConfig> crosspol;
        double gain_scale = 1.0;
        std::vector<int> dominant; // ground-truth path indices (one per cluster)

        int n_subcarriers() const { return int(H.size()); }

        // Sub-block (rx polarization, tx polarization) of H[k]; co mode returns H[k]
        CMatrix block(int k, Pol rx, Pol tx) const;
    };

    // Givens-rotated gains without the 1/sqrt(1+chi) factor
    BlockGains rotated_gains(const PathParams &path, const CrossPolConfig &xp);

    // Block gains including the power-imbalance normalization
    BlockGains effective_gains(const PathParams &path, const CrossPolConfig &xp);

    double pulse_sample(double t, const OfdmConfig &ofdm);
    cd pulse_coefficient(double tau, int k, const OfdmConfig &ofdm);
    CVector pulse_response(double tau, const OfdmConfig &ofdm);

    // sqrt(N_tot * M_tot); scales H so a matched beam pair sees the full array gain
    double array_gain_scale(const ArrayConfig &arrays);

    ChannelRealization copol_frequency_response(const std::vector<PathParams> &paths, const ArrayConfig &arrays,
                                                const OfdmConfig &ofdm, double gain_scale = 1.0);

    ChannelRealization crosspol_frequency_response(const std::vector<PathParams> &paths, const ArrayConfig &arrays,
                                                   const OfdmConfig &ofdm, const CrossPolConfig &xp,
                                                   double gain_scale = 1.0);

    // Dispatches on arrays.mode
    ChannelRealization frequency_response(const std::vector<PathParams> &paths, const ArrayConfig &arrays,
                                          const OfdmConfig &ofdm, const std::optional<CrossPolConfig> &xp,
                                          double gain_scale = 1.0);

    // Narrowband Rician channel. Path 0 is the line-of-sight component and the
    // ground truth. A missing LOS direction is drawn inside the coverage sectors.
    ChannelRealization rician_narrowband(double k_factor_db, int n_nlos, std::uint64_t seed, const ArrayConfig &arrays,
                                         std::optional<AngleSet> los = std::nullopt,
                                         const CoverageSectors &sectors = {}, double gain_scale = 1.0);

    struct ClusterProfile
    {
        int n_clusters = 3;
        int subpaths = 4;
        double delay_spread = 50e-9;      // RMS delay spread of each realization, s
        double angular_spread = 0.02;     // Laplacian scale of subpath offsets, rad/element
        double intra_delay_fraction = 0.1; // subpath delay offsets relative to the cluster spacing
        CoverageSectors sectors;
        CrossPolConfig xp;
    };

    ChannelRealization clustered_channel_generate(const ClusterProfile &profile, std::uint64_t seed,
                                                  const ArrayConfig &arrays, const OfdmConfig &ofdm,
                                                  double gain_scale = 1.0);

    // Power-weighted RMS delay spread using |g_vv|^2 + |g_vh|^2 + |g_hv|^2 + |g_hh|^2
    double rms_delay_spread(const std::vector<PathParams> &paths);

    // Text export of path parameters plus metadata; import rebuilds H
    void write_channel_csv(std::ostream &os, const ChannelRealization &ch);
    ChannelRealization read_channel_csv(std::istream &is);
}

#endif
