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

#include "abp/feedback.hpp"

#include <algorithm>
#include <cmath>

namespace abp
{
    void QuantizerConfig::validate() const
    {
        if (bits < 1 || bits > 30)
            throw Error(ErrorCode::InvalidArgument, "quantizer bits must lie in [1, 30]");
        if (!(range > 0.0))
            throw Error(ErrorCode::InvalidArgument, "quantizer range must be positive");
    }

    std::vector<double> uniform_codewords(double lo, double hi, int bits)
    {
        QuantizerConfig{bits, FeedbackScheme::direct, hi - lo}.validate();
        const int n = 1 << bits;
        const double step = (hi - lo) / n;
        std::vector<double> cw(n);
        for (int i = 0; i < n; ++i)
            cw[i] = lo + (i + 0.5) * step;
        return cw;
    }

    namespace
    {
        int nearest_index(double x, double lo, double hi, int bits)
        {
            const int n = 1 << bits;
            const double step = (hi - lo) / n;
            return std::clamp(int(std::floor((x - lo) / step)), 0, n - 1);
        }

        double codeword(int index, double lo, double hi, int bits)
        {
            return lo + (index + 0.5) * (hi - lo) / double(1 << bits);
        }

        constexpr double range_tol = 1e-12;
    }

    FeedbackWord quantize_differential(double mu_hat, double center, double delta, int bits, DifferentialVariant variant)
    {
        QuantizerConfig{bits, FeedbackScheme::differential, delta}.validate();
        const double off = mu_hat - center;
        if (std::abs(off) > delta * (1.0 + range_tol))
            throw Error(ErrorCode::OutOfRange, "estimate lies outside the pair interval");
        FeedbackWord w;
        w.scheme = FeedbackScheme::differential;
        w.variant = variant;
        w.bits = bits;
        w.center = center;
        w.half_range = delta;
        w.sign_bit = off <= 0.0 ? 1 : -1;
        const double x = variant == DifferentialVariant::magnitude_sign ? std::abs(off) : off;
        w.index = nearest_index(x, -delta, delta, bits);
        return w;
    }

    FeedbackWord quantize_direct(double mu_hat, double sector_width, int bits)
    {
        QuantizerConfig{bits, FeedbackScheme::direct, sector_width}.validate();
        const double h = 0.5 * sector_width;
        if (std::abs(mu_hat) > h * (1.0 + range_tol))
            throw Error(ErrorCode::OutOfRange, "estimate lies outside the feedback sector");
        FeedbackWord w;
        w.scheme = FeedbackScheme::direct;
        w.bits = bits;
        w.half_range = h;
        w.index = nearest_index(mu_hat, -h, h, bits);
        return w;
    }

    double reconstruct(const FeedbackWord &w, double center)
    {
        const double cw = codeword(w.index, -w.half_range, w.half_range, w.bits);
        if (w.scheme == FeedbackScheme::direct)
            return cw;
        if (w.variant == DifferentialVariant::signed_offset)
            return center + cw;
        return center - w.sign_bit * cw;
    }

    double reconstruct(const FeedbackWord &w) { return reconstruct(w, w.center); }
}
