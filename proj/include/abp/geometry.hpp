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

#ifndef ABP_GEOMETRY_H
#define ABP_GEOMETRY_H

#include "abp/common.hpp"

namespace abp
{
    enum class PolarizationMode
    {
        co,
        cross
    };

    // Element counts are per polarization; m_tot counts all receive elements.
    // Spacings are in wavelengths.
    struct ArrayConfig
    {
        int n_x = 4;
        int n_y = 8;
        int m_tot = 4;
        double d_tx = 0.5;
        double d_ty = 0.5;
        double d_r = 0.5;
        PolarizationMode mode = PolarizationMode::co;

        bool cross() const { return mode == PolarizationMode::cross; }
        int tx_per_pol() const { return n_x * n_y; }
        int rx_per_pol() const { return cross() ? m_tot / 2 : m_tot; }
        int n_tot() const { return cross() ? 2 * n_x * n_y : n_x * n_y; }
        void validate() const;
    };

    struct AngleSet
    {
        double theta = 0.0; // elevation AoD
        double phi = 0.0;   // azimuth AoD
        double psi = 0.0;   // AoA
    };

    struct SpatialFrequencies
    {
        double mu_x = 0.0;
        double mu_y = 0.0;
        double nu = 0.0;
    };

    // Angular coverage widths, centered on boresight. Codebooks and the
    // channel generators read these in the spatial-frequency domain.
    struct CoverageSectors
    {
        double azimuth = deg2rad(120.0);
        double elevation = deg2rad(90.0);
        double receive = deg2rad(180.0);
    };

    struct DirectionEstimate
    {
        double theta = 0.0;
        double phi = 0.0;
        bool degenerate = false; // set when mu_x = mu_y = 0
    };

    SpatialFrequencies spatial_frequencies(const AngleSet &angles, const ArrayConfig &cfg);

    // a_tx(mu_x) kron a_ty(mu_y); entry (ix * n_y + iy)
    CVector upa_steering(double mu_x, double mu_y, int n_x, int n_y);

    CVector ula_steering(double nu, int m);

    DirectionEstimate angles_from_spatial_frequencies(double mu_x, double mu_y, const ArrayConfig &cfg);

    double aoa_from_spatial_frequency(double nu, const ArrayConfig &cfg);

    // Angle estimate set from spatial frequencies; psi from nu
    AngleSet angles_from(const SpatialFrequencies &sf, const ArrayConfig &cfg, bool *degenerate = nullptr);

    // Wrap to (-pi, pi]
    double wrap_angle(double x);
}

#endif
