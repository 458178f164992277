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

#include "abp/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace abp
{
    const char *error_name(ErrorCode code)
    {
        switch (code)
        {
        case ErrorCode::DegenerateDirection: return "DegenerateDirection";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidChi: return "InvalidChi";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EmptyRange: return "EmptyRange";
        case ErrorCode::InfeasibleCoverage: return "InfeasibleCoverage";
        case ErrorCode::InvalidRoot: return "InvalidRoot";
        case ErrorCode::PoolExhausted: return "PoolExhausted";
        case ErrorCode::ShiftConflict: return "ShiftConflict";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::BothZero: return "BothZero";
        case ErrorCode::NoSignal: return "NoSignal";
        case ErrorCode::InsufficientNeighbors: return "InsufficientNeighbors";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        }
        return "Error";
    }

    void ArrayConfig::validate() const
    {
        if (n_x < 1 || n_y < 1 || m_tot < 1)
            throw Error(ErrorCode::DimensionMismatch, "element counts must be positive");
        if (!(d_tx > 0.0) || !(d_ty > 0.0) || !(d_r > 0.0))
            throw Error(ErrorCode::InvalidArgument, "element spacings must be positive");
        if (cross() && m_tot % 2 != 0)
            throw Error(ErrorCode::DimensionMismatch, "cross-polarized receive array needs an even m_tot");
    }

    SpatialFrequencies spatial_frequencies(const AngleSet &a, const ArrayConfig &cfg)
    {
        SpatialFrequencies s;
        s.mu_x = 2.0 * pi * cfg.d_tx * std::sin(a.theta) * std::cos(a.phi);
        s.mu_y = 2.0 * pi * cfg.d_ty * std::sin(a.theta) * std::sin(a.phi);
        s.nu = 2.0 * pi * cfg.d_r * std::sin(a.psi);
        return s;
    }

    CVector upa_steering(double mu_x, double mu_y, int n_x, int n_y)
    {
        if (n_x < 1 || n_y < 1)
            throw Error(ErrorCode::DimensionMismatch, "upa_steering: empty array");
        const double scale = 1.0 / std::sqrt(double(n_x) * double(n_y));
        CVector a(n_x * n_y);
        for (int ix = 0; ix < n_x; ++ix)
            for (int iy = 0; iy < n_y; ++iy)
                a(ix * n_y + iy) = std::polar(scale, ix * mu_x + iy * mu_y);
        return a;
    }

    CVector ula_steering(double nu, int m)
    {
        if (m < 1)
            throw Error(ErrorCode::DimensionMismatch, "ula_steering: empty array");
        const double scale = 1.0 / std::sqrt(double(m));
        CVector a(m);
        for (int i = 0; i < m; ++i)
            a(i) = std::polar(scale, i * nu);
        return a;
    }

    DirectionEstimate angles_from_spatial_frequencies(double mu_x, double mu_y, const ArrayConfig &cfg)
    {
        DirectionEstimate out;
        if (mu_x == 0.0 && mu_y == 0.0)
        {
            out.degenerate = true;
            return out;
        }
        // direction cosines u = sin(theta)cos(phi), v = sin(theta)sin(phi)
        const double u = mu_x / (2.0 * pi * cfg.d_tx);
        const double v = mu_y / (2.0 * pi * cfg.d_ty);
        out.phi = std::atan2(cfg.d_tx * mu_y, cfg.d_ty * mu_x);
        out.theta = std::asin(std::clamp(std::hypot(u, v), -1.0, 1.0));
        return out;
    }

    double aoa_from_spatial_frequency(double nu, const ArrayConfig &cfg)
    {
        return std::asin(std::clamp(nu / (2.0 * pi * cfg.d_r), -1.0, 1.0));
    }

    AngleSet angles_from(const SpatialFrequencies &sf, const ArrayConfig &cfg, bool *degenerate)
    {
        const auto d = angles_from_spatial_frequencies(sf.mu_x, sf.mu_y, cfg);
        if (degenerate)
            *degenerate = d.degenerate;
        return {d.theta, d.phi, aoa_from_spatial_frequency(sf.nu, cfg)};
    }

    double wrap_angle(double x)
    {
        double y = std::remainder(x, 2.0 * pi);
        if (y <= -pi)
            y += 2.0 * pi;
        return y;
    }
}
