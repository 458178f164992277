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

#ifndef ABP_FEEDBACK_H
#define ABP_FEEDBACK_H

#include "abp/common.hpp"

#include <vector>

namespace abp
{
    enum class FeedbackScheme
    {
        differential,
        direct
    };

    enum class DifferentialVariant
    {
        magnitude_sign, // |mu - center| against codewords on [-delta, delta], sign carried separately
        signed_offset  // signed offset against codewords on [-delta, delta]
    };

    struct QuantizerConfig
    {
        int bits = 3;
        FeedbackScheme scheme = FeedbackScheme::differential;
        double range = 0.0; // delta for differential, full sector width for direct
        void validate() const;
    };

    struct FeedbackWord
    {
        FeedbackScheme scheme = FeedbackScheme::differential;
        DifferentialVariant variant = DifferentialVariant::magnitude_sign;
        int sign_bit = 1; // +1 when the estimate sits left of the pair center (ratio metric > 0)
        int index = 0;
        int bits = 0;
        double center = 0.0;
        double half_range = 0.0;

        int total_bits() const { return scheme == FeedbackScheme::differential ? bits + 1 : bits; }
    };

    // 2^bits cell midpoints of a uniform partition of [lo, hi]
    std::vector<double> uniform_codewords(double lo, double hi, int bits);

    FeedbackWord quantize_differential(double mu_hat, double center, double delta, int bits,
                                       DifferentialVariant variant = DifferentialVariant::magnitude_sign);

    FeedbackWord quantize_direct(double mu_hat, double sector_width, int bits);

    // Differential words decode as center - sign * offset, so that a positive
    // ratio metric maps back to the left of the pair center
    double reconstruct(const FeedbackWord &word, double center);
    double reconstruct(const FeedbackWord &word);
}

#endif
