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

#ifndef ABP_ESTIMATOR_H
#define ABP_ESTIMATOR_H

#include "abp/pilot.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <vector>

namespace abp
{
    inline constexpr double noiseless = std::numeric_limits<double>::infinity();

    inline double snr_from_db(double db) { return std::pow(10.0, db / 10.0); }

    enum class RatioInversion
    {
        closed_form,  // exact only for pair spacings on the 2 l pi / N grid
        array_factor  // bisection on the array-factor power ratio
    };

    struct RatioMetric
    {
        double value = 0.0;
        double power_delta = 0.0; // beam at center - delta
        double power_sigma = 0.0; // beam at center + delta
    };

    RatioMetric ratio_metric(double power_delta, double power_sigma);

    // Closed-form ratio at offset x = mu - center
    double ratio_model(double x, double delta);

    // Ratio of the two beams' array-factor powers for an n-element axis
    double array_factor_ratio(double x, double delta, int n);

    double invert_ratio(double zeta, double center, double delta);
    double invert_ratio_exact(double zeta, double center, double delta, int n);

    cd received_symbol(const CVector &w, const CMatrix &Hk, const CVector &f, cd s, double sigma, std::mt19937_64 &rng);

    struct PairMeasurement
    {
        Axis axis = Axis::azimuth;
        Pol pol = Pol::v;
        int beams[2] = {-1, -1}; // lower and upper boresight
        double center = 0.0;
        double delta = 0.0;
        RatioMetric zeta;
        double mu_hat = 0.0;
    };

    struct PathEstimate
    {
        SpatialFrequencies mu;
        AngleSet angles;
        bool degenerate = false;
        int tx_beam = -1;
        int rx_beam = -1;
        double strength = 0.0;
        PairMeasurement el, az, rx;
    };

    struct EstimationReport
    {
        std::vector<PathEstimate> paths;
        std::int64_t iterations = 0;
    };

    struct EstimatorOptions
    {
        RatioInversion inversion = RatioInversion::array_factor;
        int window = 0;          // correlator lags; 0 uses the cyclic prefix length
        int replica_guard = 4;   // extra lags kept out of the floor around same-root replicas
        bool suppress_adjacent = true;
    };

    // Mean per-subcarrier received power for every (receive beam, transmit beam)
    // combination, one single-RF probe each. Rows are receive beams.
    Eigen::MatrixXd measure_power_grid(const ChannelRealization &ch, const Codebooks &cb, double gamma,
                                       std::mt19937_64 &rng);

    EstimationReport estimate_single_path(const ChannelRealization &ch, const Codebooks &cb, double gamma,
                                          std::mt19937_64 &rng, const EstimatorOptions &opt = {});
    EstimationReport estimate_single_path(const Eigen::MatrixXd &power, const Codebooks &cb,
                                          const EstimatorOptions &opt = {});

    EstimationReport gob_estimate(const ChannelRealization &ch, const Codebooks &cb, double gamma, std::mt19937_64 &rng);
    EstimationReport gob_estimate(const Eigen::MatrixXd &power, const Codebooks &cb);

    // Correlated strengths of every observed (receive beam, transmit beam) combination
    struct StrengthMap
    {
        Eigen::MatrixXd strength; // rows receive beams, -1 where never observed
        std::vector<double> rx_probing_sum;
    };

    StrengthMap measure_pilot_strengths(const ChannelRealization &ch, const Codebooks &cb, const ProbingPlan &plan,
                                        const PilotAssignment &pilots, double gamma, std::mt19937_64 &rng,
                                        const EstimatorOptions &opt = {});

    EstimationReport estimate_multipath(const ChannelRealization &ch, const Codebooks &cb, const ProbingPlan &plan,
                                        const PilotAssignment &pilots, double gamma, int n_select, std::mt19937_64 &rng,
                                        const EstimatorOptions &opt = {});

    // Selection and pairing on an already measured strength map
    EstimationReport estimate_multipath(const StrengthMap &map, const Codebooks &cb, const ProbingPlan &plan,
                                        int n_select, const EstimatorOptions &opt = {});

    // Exhaustive single-RF sweep; the n_select strongest separated combinations
    // are reported at their boresights
    EstimationReport gob_multipath(const ChannelRealization &ch, const Codebooks &cb, double gamma, int n_select,
                                   std::mt19937_64 &rng);

    // Received power of one path through (w, f) and the remainder contributed by
    // interaction with the other paths (frequency-flat, co-polarized)
    struct CrossTermSplit
    {
        double leading = 0.0;
        double cross = 0.0;
    };

    CrossTermSplit cross_term_split(const ChannelRealization &ch, int path, const CVector &w, const CVector &f);

    void write_estimation_csv_header(std::ostream &os);
    void write_estimation_csv(std::ostream &os, int trial, const std::vector<AngleSet> &truth,
                              const EstimationReport &rep);
}

#endif
