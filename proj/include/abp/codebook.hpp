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

#ifndef ABP_CODEBOOK_H
#define ABP_CODEBOOK_H

#include "abp/channel.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace abp
{
    enum class Axis
    {
        azimuth,
        elevation,
        receive
    };

    const char *axis_name(Axis a);
    const char *pol_name(Pol p);

    // Half pair spacings per axis (rad/element)
    struct PairSpacing
    {
        double delta_x = 0.0;
        double delta_y = 0.0;
        double delta_r = 0.0;

        // pi / (2 N) per axis, N counted per polarization
        static PairSpacing half_power(const ArrayConfig &cfg);

        // 2 l pi / N per axis; the ratio metric has a closed form here
        static PairSpacing grid(const ArrayConfig &cfg, int l_x = 1, int l_y = 1, int l_r = 1);
    };

    struct Beam
    {
        CVector vector;
        Pol pol = Pol::v;
        double mu_el = 0.0; // transmit beams
        double mu_az = 0.0; // transmit beams
        double nu = 0.0;    // receive beams
        int index = 0;
        int el_index = -1; // transmit grid position
        int az_index = -1;
    };

    struct Codebooks
    {
        ArrayConfig arrays;
        CoverageSectors sectors;
        PairSpacing deltas;
        std::vector<double> el_boresights;
        std::vector<double> az_boresights;
        std::vector<double> rx_boresights;
        std::vector<Beam> tx; // index = el_index * n_az + az_index
        std::vector<Beam> rx;
        int az_split = 0; // first horizontal azimuth index (cross mode)
        int rx_split = 0; // first horizontal receive index (cross mode)

        int n_el() const { return int(el_boresights.size()); }
        int n_az() const { return int(az_boresights.size()); }
        int tx_index(int el, int az) const { return el * n_az() + az; }
        Pol az_pol(int az) const;
        Pol rx_pol(int n) const;

        std::vector<int> tx_ids(Pol p) const;
        std::vector<int> rx_ids(Pol p) const;

        // Polarization a direction falls into under the split coverage rule
        Pol tx_pol_for(double mu_y) const;
        Pol rx_pol_for(double nu) const;

        // Zero-padded steering vectors at arbitrary spatial frequencies
        CVector tx_vector(double mu_x, double mu_y, Pol p) const;
        CVector rx_vector(double nu, Pol p) const;
    };

    // Boresights centered on zero, spacing 2 delta, ceil(width / (2 delta)) entries
    std::vector<double> boresight_grid(double width, double delta);

    Codebooks build_codebooks(const ArrayConfig &cfg, const CoverageSectors &sectors = {},
                              std::optional<PairSpacing> deltas = std::nullopt);

    struct AuxiliaryBeamPair
    {
        int abp_id = 0;
        Axis axis = Axis::azimuth;
        Pol pol = Pol::v;
        int beams[2] = {0, 0}; // b = 0 at center - delta, b = 1 at center + delta
        double center_mu = 0.0;
        double delta = 0.0;
    };

    std::vector<AuxiliaryBeamPair> enumerate_abps(const Codebooks &cb);

    enum class ProbingLayout
    {
        random,
        split_half
    };

    struct ProbingPlan
    {
        std::vector<std::vector<int>> tx; // N_T probings of N_RF transmit beam ids
        std::vector<std::vector<int>> rx; // M_T probings of M_RF receive beam ids
        int n_rf = 1;
        int m_rf = 1;

        int n_t() const { return int(tx.size()); }
        int m_t() const { return int(rx.size()); }
        CMatrix F(const Codebooks &cb, int t) const;
        CMatrix W(const Codebooks &cb, int m) const;
    };

    ProbingPlan random_probing_plan(const Codebooks &cb, int n_t, int m_t, int n_rf, int m_rf, std::uint64_t seed,
                                    ProbingLayout layout = ProbingLayout::random, bool coverage = true);

    // One-beam-per-probing sweep over every transmit and receive beam
    ProbingPlan exhaustive_plan(const Codebooks &cb);

    void write_codebook_csv(std::ostream &os, const Codebooks &cb);
}

#endif
