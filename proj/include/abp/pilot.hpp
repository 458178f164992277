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

#ifndef ABP_PILOT_H
#define ABP_PILOT_H

#include "abp/codebook.hpp"

#include <iosfwd>
#include <vector>

namespace abp
{
    enum class PilotLayout
    {
        analytic,     // length-N sequence on all N subcarriers
        dc_punctured  // length-(N-1) sequence, DC subcarrier N/2 left empty
    };

    enum class RootConstraint
    {
        sequence_length,  // gcd(r, L) = 1
        length_minus_one  // gcd(r, L - 1) = 1
    };

    int pilot_sequence_length(int n_subcarriers, PilotLayout layout);

    // exp(j pi r (k + p b)(k + p b + 1) / n), exact phase reduction mod 2n
    cd zc_symbol(int root, int b, int p, int n, int k);

    CVector zc_sequence(int root, int b, int p, int length);

    // Sequence mapped onto the subcarrier grid of the given layout
    CVector pilot_symbols(int root, int b, int p, int n_subcarriers, PilotLayout layout);

    // Roots 25, 29, 34 when coprime with the length, then the next coprime integers
    std::vector<int> default_root_pool(int seq_length, int count);

    bool is_prime(int n);

    struct PilotLabel
    {
        int root = 0;
        int b = 0;
        bool operator==(const PilotLabel &) const = default;
    };

    struct PilotAssignment
    {
        int n_subcarriers = 0;
        int seq_length = 0;
        PilotLayout layout = PilotLayout::dc_punctured;
        int p = 0;
        std::vector<int> abp_root;            // by abp_id; -1 for receive pairs
        std::vector<PilotLabel> beam_labels;  // by transmit beam index (may be empty)

        CVector symbols(const PilotLabel &l) const;
    };

    // Picks p: the requested value when valid, otherwise the smallest valid prime <= L/2
    int select_shift(const std::vector<int> &roots, int seq_length, int requested);

    PilotAssignment assign_pilots(const std::vector<AuxiliaryBeamPair> &abps, int n_subcarriers,
                                  const std::vector<int> &root_pool, int p,
                                  PilotLayout layout = PilotLayout::dc_punctured,
                                  RootConstraint constraint = RootConstraint::sequence_length);

    // Transmit pairs get roots; every transmit beam is labelled from the first pair
    // that contains it. Unpaired beams receive a further root of their own.
    PilotAssignment assign_beam_pilots(const Codebooks &cb, const std::vector<AuxiliaryBeamPair> &abps,
                                       int n_subcarriers, const std::vector<int> &root_pool, int p,
                                       PilotLayout layout = PilotLayout::dc_punctured);

    cd correlate_zero_lag(const CVector &received, const CVector &reference);

    // c_d = sum_k Y[k] x*[k] exp(j 2 pi k d / N) for all d
    CVector correlation_lags(const CVector &received, const CVector &reference);

    // Energy in lags [0, window) minus the interference floor measured on the
    // remaining lags, divided by N^2. Lags in [s, s + excl_width) for each s in
    // `excluded_starts` are kept out of the floor estimate.
    double windowed_strength(const CVector &received, const CVector &reference, int window,
                             const std::vector<int> &excluded_starts = {}, int excl_width = 0);

    // Predicted lag where a same-root pilot with shift difference db lands
    int replica_lag(int root, int p, int db, int seq_length, int n_subcarriers);

    struct InterferenceBounds
    {
        double i0 = 0.0, i1 = 0.0, i2 = 0.0, i3 = 0.0;
    };

    // Flat-gain bounds. sum_vv and sum_vh are sum(rho * h) with the Givens-rotated
    // gains before the 1/sqrt(1+chi) factor, which is applied here.
    InterferenceBounds interference_bounds(double chi, cd sum_vv, cd sum_vh, int seq_length, int n_e, int n_rf,
                                           bool same_root_conflict);

    struct CorrelationReport
    {
        cd total = 0.0;
        cd i0 = 0.0, i1 = 0.0, i2 = 0.0, i3 = 0.0;
        int n_e = 0;
        InterferenceBounds bounds;
    };

    // Zero-lag correlation of one receive beam against the pilot of column `ref`,
    // split into the reference, same-root, other-root co-pol and cross-pol terms.
    // H is a frequency-flat channel matrix; columns carry their own labels.
    CorrelationReport decompose_correlation(const CMatrix &H, const CVector &w, const std::vector<CVector> &columns,
                                            const std::vector<Pol> &column_pols,
                                            const std::vector<PilotLabel> &labels, int ref,
                                            const PilotAssignment &pa);

    void write_pilot_csv(std::ostream &os, const PilotAssignment &pa, const std::vector<AuxiliaryBeamPair> &abps);
}

#endif
