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

#include "abp/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace abp
{
    double maee(const std::vector<double> &truth, const std::vector<double> &est, bool wrap)
    {
        if (truth.size() != est.size())
            throw Error(ErrorCode::DimensionMismatch, "paired lists differ in length");
        if (truth.empty())
            throw Error(ErrorCode::EmptyInput, "no samples");
        double acc = 0.0;
        for (std::size_t i = 0; i < truth.size(); ++i)
        {
            const double d = truth[i] - est[i];
            acc += std::abs(wrap ? wrap_angle(d) : d);
        }
        return rad2deg(acc / double(truth.size()));
    }

    double maqe(const std::vector<double> &est, const std::vector<double> &quantized) { return maee(est, quantized); }

    Summary summarize(const std::vector<double> &v)
    {
        Summary s;
        s.n = v.size();
        if (v.empty())
            return s;
        double m = 0.0;
        for (double x : v)
            m += x;
        m /= double(v.size());
        double ss = 0.0;
        for (double x : v)
            ss += (x - m) * (x - m);
        s.mean = m;
        if (v.size() > 1)
            s.ci95 = 1.96 * std::sqrt(ss / double(v.size() - 1)) / std::sqrt(double(v.size()));
        return s;
    }

    double spectral_efficiency(const ChannelRealization &ch, const CMatrix &F, const CMatrix &W, double gamma, int n_s)
    {
        if (ch.H.empty())
            throw Error(ErrorCode::EmptyInput, "channel has no subcarriers");
        if (F.rows() != ch.H[0].cols() || W.rows() != ch.H[0].rows() || F.cols() != W.cols())
            throw Error(ErrorCode::DimensionMismatch, "beamformers do not match the channel");
        if (n_s < 1)
            throw Error(ErrorCode::InvalidArgument, "n_s must be positive");
        const Eigen::Index s = F.cols();
        const CMatrix I = CMatrix::Identity(s, s);
        double acc = 0.0;
        for (const auto &Hk : ch.H)
        {
            const CMatrix Ht = W.adjoint() * Hk * F;
            const CMatrix A = I + (gamma / n_s) * Ht * Ht.adjoint();
            Eigen::LLT<CMatrix> llt(A);
            double ld = 0.0;
            for (Eigen::Index i = 0; i < s; ++i)
                ld += 2.0 * std::log2(llt.matrixLLT()(i, i).real());
            acc += ld;
        }
        return acc / double(ch.H.size());
    }

    void OverheadModel::validate() const
    {
        if (epsilon_t < 1.0 || t_tot < 1)
            throw Error(ErrorCode::InvalidArgument, "overhead model needs epsilon_t >= 1 and t_tot >= 1");
    }

    std::int64_t abp_complexity(int n_rf, int n_tx, int m_rf, int m_rx)
    {
        return std::int64_t(n_rf) * n_tx * m_rf * m_rx;
    }

    std::int64_t gob_complexity(int n_bm, int m_bm, int n_rf, int m_rf)
    {
        std::int64_t e = 1;
        for (int i = 0; i < n_rf; ++i)
            e *= n_bm;
        for (int i = 0; i < m_rf; ++i)
            e *= m_bm;
        return e;
    }

    int estimation_slots(std::int64_t iterations, const OverheadModel &ov)
    {
        ov.validate();
        if (iterations < 0)
            throw Error(ErrorCode::InvalidArgument, "iteration count must be non-negative");
        return int(std::ceil(double(iterations) / ov.epsilon_t - 1e-12));
    }

    double normalized_spectral_efficiency(double R, std::int64_t iterations, const OverheadModel &ov)
    {
        const int t = estimation_slots(iterations, ov);
        return std::max(0.0, 1.0 - double(t) / ov.t_tot) * R;
    }

    Beamformers steering_beamformers(const Codebooks &cb, const std::vector<SpatialFrequencies> &dirs)
    {
        Beamformers b;
        b.F.resize(cb.arrays.n_tot(), Eigen::Index(dirs.size()));
        b.W.resize(cb.rx.at(0).vector.size(), Eigen::Index(dirs.size()));
        for (std::size_t i = 0; i < dirs.size(); ++i)
        {
            const auto &d = dirs[i];
            b.F.col(i) = cb.tx_vector(d.mu_x, d.mu_y, cb.tx_pol_for(d.mu_y));
            b.W.col(i) = cb.rx_vector(d.nu, cb.rx_pol_for(d.nu));
        }
        return b;
    }

    Beamformers beamformers_from_estimates(const Codebooks &cb, const EstimationReport &rep, int n_s)
    {
        std::vector<SpatialFrequencies> dirs;
        for (const auto &p : rep.paths)
            if (int(dirs.size()) < n_s)
                dirs.push_back(p.mu);
        return steering_beamformers(cb, dirs);
    }

    Beamformers beamformers_from_truth(const Codebooks &cb, const ChannelRealization &ch, int n_s)
    {
        std::vector<int> ids = ch.dominant;
        if (ids.empty())
            for (std::size_t i = 0; i < ch.paths.size(); ++i)
                ids.push_back(int(i));
        // rank by the power the path delivers through its own steering pair
        std::vector<double> power(ch.paths.size(), 0.0);
        for (int i : ids)
        {
            const auto sf = spatial_frequencies(ch.paths.at(i).angles, ch.arrays);
            const CVector f = cb.tx_vector(sf.mu_x, sf.mu_y, cb.tx_pol_for(sf.mu_y));
            const CVector w = cb.rx_vector(sf.nu, cb.rx_pol_for(sf.nu));
            for (const auto &Hk : ch.H)
                power[i] += std::norm(w.dot(Hk * f));
        }
        std::stable_sort(ids.begin(), ids.end(), [&](int a, int b)
                         { return power[a] > power[b]; });
        std::vector<SpatialFrequencies> dirs;
        for (int i : ids)
            if (int(dirs.size()) < n_s)
                dirs.push_back(spatial_frequencies(ch.paths.at(i).angles, ch.arrays));
        return steering_beamformers(cb, dirs);
    }
}
