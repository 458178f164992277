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

#include "abp/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace abp
{
    OfdmConfig OfdmConfig::profile(int n, int cp, double spacing)
    {
        OfdmConfig o;
        o.n_subcarriers = n;
        o.cp_length = cp;
        o.subcarrier_spacing = spacing;
        o.sample_period = 1.0 / (double(n) * spacing);
        return o;
    }

    OfdmConfig OfdmConfig::narrowband()
    {
        OfdmConfig o;
        o.n_subcarriers = 1;
        o.cp_length = 1;
        o.pulse = PulseShape::unit_sample;
        return o;
    }

    void OfdmConfig::validate() const
    {
        if (n_subcarriers < 1 || cp_length < 1)
            throw Error(ErrorCode::DimensionMismatch, "OFDM grid needs N >= 1 and D >= 1");
        if (n_subcarriers > 1 && cp_length >= n_subcarriers)
            throw Error(ErrorCode::InvalidArgument, "cyclic prefix must be shorter than the symbol");
        if (!(sample_period > 0.0))
            throw Error(ErrorCode::InvalidArgument, "sample period must be positive");
        if (rolloff < 0.0 || rolloff > 1.0)
            throw Error(ErrorCode::InvalidArgument, "roll-off must lie in [0, 1]");
    }

    CMatrix ChannelRealization::block(int k, Pol rx, Pol tx) const
    {
        const CMatrix &Hk = H.at(k);
        if (!arrays.cross())
            return Hk;
        const int mr = arrays.rx_per_pol(), nt = arrays.tx_per_pol();
        return Hk.block(rx == Pol::v ? 0 : mr, tx == Pol::v ? 0 : nt, mr, nt);
    }

    BlockGains rotated_gains(const PathParams &p, const CrossPolConfig &xp)
    {
        const double c = std::cos(xp.varsigma), s = std::sin(xp.varsigma), r = std::sqrt(xp.chi);
        return {p.g_vv * c + r * p.g_vh * s,
                -p.g_vv * s + r * p.g_vh * c,
                r * p.g_hv * c + p.g_hh * s,
                -r * p.g_hv * s + p.g_hh * c};
    }

    BlockGains effective_gains(const PathParams &p, const CrossPolConfig &xp)
    {
        if (xp.chi < 0.0)
            throw Error(ErrorCode::InvalidChi, "chi must be non-negative");
        BlockGains g = rotated_gains(p, xp);
        const double c = std::sqrt(1.0 / (1.0 + xp.chi));
        return {c * g.vv, c * g.vh, c * g.hv, c * g.hh};
    }

    double pulse_sample(double t, const OfdmConfig &ofdm)
    {
        const double x = t / ofdm.sample_period;
        if (ofdm.pulse == PulseShape::unit_sample)
            return std::abs(x) < 1e-9 ? 1.0 : 0.0;

        const double b = ofdm.rolloff;
        auto sinc = [](double u)
        { return std::abs(u) < 1e-12 ? 1.0 : std::sin(pi * u) / (pi * u); };
        const double den = 1.0 - 4.0 * b * b * x * x;
        if (b > 0.0 && std::abs(den) < 1e-10)
            return pi / 4.0 * sinc(1.0 / (2.0 * b));
        return sinc(x) * std::cos(pi * b * x) / den;
    }

    cd pulse_coefficient(double tau, int k, const OfdmConfig &ofdm)
    {
        const int N = ofdm.n_subcarriers;
        if (k < 0 || k >= N)
            throw Error(ErrorCode::OutOfRange, "subcarrier index out of range");
        cd acc = 0.0;
        for (int d = 0; d < ofdm.cp_length; ++d)
        {
            const double p = pulse_sample(d * ofdm.sample_period - tau, ofdm);
            if (p != 0.0)
                acc += p * std::polar(1.0, -2.0 * pi * double((std::int64_t(k) * d) % N) / N);
        }
        return acc;
    }

    CVector pulse_response(double tau, const OfdmConfig &ofdm)
    {
        const int N = ofdm.n_subcarriers, D = ofdm.cp_length;
        std::vector<double> taps(D);
        for (int d = 0; d < D; ++d)
            taps[d] = pulse_sample(d * ofdm.sample_period - tau, ofdm);

        std::vector<cd> twiddle(N);
        for (int i = 0; i < N; ++i)
            twiddle[i] = std::polar(1.0, -2.0 * pi * i / N);

        CVector rho = CVector::Zero(N);
        for (int d = 0; d < D; ++d)
        {
            if (taps[d] == 0.0)
                continue;
            for (int k = 0; k < N; ++k)
                rho(k) += taps[d] * twiddle[(std::int64_t(k) * d) % N];
        }
        return rho;
    }

    double array_gain_scale(const ArrayConfig &arrays)
    {
        return std::sqrt(double(arrays.n_tot()) * double(arrays.m_tot));
    }

    namespace
    {
        void check_paths(const std::vector<PathParams> &paths, const OfdmConfig &ofdm)
        {
            for (const auto &p : paths)
            {
                if (p.tau < 0.0 || p.tau > ofdm.cp_duration() * (1.0 + 1e-12))
                    throw Error(ErrorCode::OutOfRange, "path delay outside the cyclic prefix");
            }
        }

        CMatrix outer(const PathParams &p, const ArrayConfig &a, int n_x, int n_y, int m)
        {
            const auto sf = spatial_frequencies(p.angles, a);
            return ula_steering(sf.nu, m) * upa_steering(sf.mu_x, sf.mu_y, n_x, n_y).adjoint();
        }
    }

    ChannelRealization copol_frequency_response(const std::vector<PathParams> &paths, const ArrayConfig &arrays,
                                                const OfdmConfig &ofdm, double gain_scale)
    {
        arrays.validate();
        ofdm.validate();
        if (arrays.cross())
            throw Error(ErrorCode::DimensionMismatch, "co-polarized response requested for a cross-polarized array");
        check_paths(paths, ofdm);

        const int N = ofdm.n_subcarriers, M = arrays.m_tot, Nt = arrays.n_tot();
        ChannelRealization ch;
        ch.arrays = arrays;
        ch.ofdm = ofdm;
        ch.paths = paths;
        ch.gain_scale = gain_scale;
        ch.H.assign(N, CMatrix::Zero(M, Nt));

        for (const auto &p : paths)
        {
            const CMatrix A = gain_scale * p.g_vv * outer(p, arrays, arrays.n_x, arrays.n_y, M);
            const CVector rho = pulse_response(p.tau, ofdm);
            for (int k = 0; k < N; ++k)
                ch.H[k] += rho(k) * A;
        }
        return ch;
    }

    ChannelRealization crosspol_frequency_response(const std::vector<PathParams> &paths, const ArrayConfig &arrays,
                                                   const OfdmConfig &ofdm, const CrossPolConfig &xp, double gain_scale)
    {
        arrays.validate();
        ofdm.validate();
        if (!arrays.cross())
            throw Error(ErrorCode::DimensionMismatch, "cross-polarized response requested for a co-polarized array");
        if (xp.chi < 0.0)
            throw Error(ErrorCode::InvalidChi, "chi must be non-negative");
        check_paths(paths, ofdm);

        const int N = ofdm.n_subcarriers, mr = arrays.rx_per_pol(), nt = arrays.tx_per_pol();
        ChannelRealization ch;
        ch.arrays = arrays;
        ch.ofdm = ofdm;
        ch.paths = paths;
        ch.crosspol = xp;
        ch.gain_scale = gain_scale;
        ch.H.assign(N, CMatrix::Zero(2 * mr, 2 * nt));

        CMatrix P(2 * mr, 2 * nt);
        for (const auto &p : paths)
        {
            const CMatrix A = gain_scale * outer(p, arrays, arrays.n_x, arrays.n_y, mr);
            const BlockGains g = effective_gains(p, xp);
            P.block(0, 0, mr, nt) = g.vv * A;
            P.block(0, nt, mr, nt) = g.vh * A;
            P.block(mr, 0, mr, nt) = g.hv * A;
            P.block(mr, nt, mr, nt) = g.hh * A;
            const CVector rho = pulse_response(p.tau, ofdm);
            for (int k = 0; k < N; ++k)
                ch.H[k] += rho(k) * P;
        }
        return ch;
    }

    ChannelRealization frequency_response(const std::vector<PathParams> &paths, const ArrayConfig &arrays,
                                          const OfdmConfig &ofdm, const std::optional<CrossPolConfig> &xp,
                                          double gain_scale)
    {
        if (arrays.cross())
            return crosspol_frequency_response(paths, arrays, ofdm, xp.value_or(CrossPolConfig{}), gain_scale);
        return copol_frequency_response(paths, arrays, ofdm, gain_scale);
    }

    namespace
    {
        // Spatial frequencies drawn uniformly inside the coverage sectors
        AngleSet draw_in_sectors(std::mt19937_64 &rng, const CoverageSectors &s, const ArrayConfig &a)
        {
            std::uniform_real_distribution<double> u(-0.5, 0.5);
            SpatialFrequencies sf;
            sf.mu_x = u(rng) * s.elevation;
            sf.mu_y = u(rng) * s.azimuth;
            sf.nu = u(rng) * s.receive;
            return angles_from(sf, a);
        }

        cd cn(std::mt19937_64 &rng, double power)
        {
            std::normal_distribution<double> n(0.0, std::sqrt(power / 2.0));
            const double re = n(rng);
            const double im = n(rng);
            return {re, im};
        }
    }

    ChannelRealization rician_narrowband(double k_factor_db, int n_nlos, std::uint64_t seed, const ArrayConfig &arrays,
                                         std::optional<AngleSet> los, const CoverageSectors &sectors,
                                         double gain_scale)
    {
        if (n_nlos < 0)
            throw Error(ErrorCode::InvalidArgument, "n_nlos must be non-negative");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u01(0.0, 1.0);

        const double K = std::pow(10.0, k_factor_db / 10.0);
        const double a_los = std::sqrt(K / (1.0 + K)), a_nlos = std::sqrt(1.0 / (1.0 + K));

        std::vector<PathParams> paths;
        PathParams p0;
        p0.angles = los ? *los : draw_in_sectors(rng, sectors, arrays);
        p0.g_vv = a_los * std::polar(1.0, 2.0 * pi * u01(rng));
        paths.push_back(p0);

        for (int i = 0; i < n_nlos; ++i)
        {
            PathParams p;
            p.angles.theta = 0.5 * pi * u01(rng);
            p.angles.phi = pi * (2.0 * u01(rng) - 1.0);
            p.angles.psi = pi * (u01(rng) - 0.5);
            p.g_vv = a_nlos * cn(rng, 1.0 / n_nlos);
            paths.push_back(p);
        }

        ArrayConfig co = arrays;
        co.mode = PolarizationMode::co;
        auto ch = copol_frequency_response(paths, co, OfdmConfig::narrowband(), gain_scale);
        ch.dominant = {0};
        return ch;
    }

    double rms_delay_spread(const std::vector<PathParams> &paths)
    {
        double P = 0.0, m1 = 0.0, m2 = 0.0;
        for (const auto &p : paths)
        {
            const double w = std::norm(p.g_vv) + std::norm(p.g_vh) + std::norm(p.g_hv) + std::norm(p.g_hh);
            P += w;
            m1 += w * p.tau;
            m2 += w * p.tau * p.tau;
        }
        if (P <= 0.0)
            return 0.0;
        m1 /= P;
        m2 /= P;
        return std::sqrt(std::max(0.0, m2 - m1 * m1));
    }

    ChannelRealization clustered_channel_generate(const ClusterProfile &pr, std::uint64_t seed, const ArrayConfig &arrays,
                                                  const OfdmConfig &ofdm, double gain_scale)
    {
        if (pr.n_clusters < 1 || pr.subpaths < 1)
            throw Error(ErrorCode::InvalidArgument, "cluster profile needs at least one cluster and one subpath");
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        std::exponential_distribution<double> ex(1.0);

        const bool cross = arrays.cross();
        const int C = pr.n_clusters, S = pr.subpaths;

        auto laplace = [&](double scale)
        {
            const double e = ex(rng);
            return (u(rng) < 0.0 ? -scale : scale) * e;
        };
        auto inside = [](double x, double width)
        { return std::clamp(x, -0.5 * width, 0.5 * width); };

        // Normalized delays first; the realization is rescaled to the requested RMS spread below
        std::vector<PathParams> paths;
        std::vector<double> power;
        for (int c = 0; c < C; ++c)
        {
            const double tau_c = c == 0 ? 0.0 : ex(rng);
            const double p_c = std::exp(-tau_c) * std::exp(0.5 * laplace(1.0));
            SpatialFrequencies centre{u(rng) * pr.sectors.elevation, u(rng) * pr.sectors.azimuth,
                                      u(rng) * pr.sectors.receive};
            for (int s = 0; s < S; ++s)
            {
                PathParams p;
                p.tau = tau_c + (s == 0 ? 0.0 : pr.intra_delay_fraction * ex(rng));
                SpatialFrequencies sf = centre;
                if (s > 0)
                {
                    sf.mu_x = inside(sf.mu_x + laplace(pr.angular_spread), pr.sectors.elevation);
                    sf.mu_y = inside(sf.mu_y + laplace(pr.angular_spread), pr.sectors.azimuth);
                    sf.nu = inside(sf.nu + laplace(pr.angular_spread), pr.sectors.receive);
                }
                p.angles = angles_from(sf, arrays);
                paths.push_back(p);
                power.push_back(p_c * ex(rng));
            }
        }

        double total = 0.0;
        for (double p : power)
            total += p;
        for (std::size_t i = 0; i < paths.size(); ++i)
        {
            const double pw = power[i] / total;
            paths[i].g_vv = cn(rng, pw);
            if (cross)
            {
                paths[i].g_vh = cn(rng, pw);
                paths[i].g_hv = cn(rng, pw);
                paths[i].g_hh = cn(rng, pw);
            }
        }

        const double spread = rms_delay_spread(paths);
        const double scale = spread > 0.0 ? pr.delay_spread / spread : 0.0;
        const double tau_max = (ofdm.cp_length - 1) * ofdm.sample_period;
        for (auto &p : paths)
            p.tau = std::min(p.tau * scale, tau_max);

        auto ch = frequency_response(paths, arrays, ofdm, pr.xp, gain_scale);
        for (int c = 0; c < C; ++c)
        {
            int best = c * S;
            double best_w = -1.0;
            for (int s = 0; s < S; ++s)
            {
                const auto &p = paths[c * S + s];
                const double w = std::norm(p.g_vv) + std::norm(p.g_vh) + std::norm(p.g_hv) + std::norm(p.g_hh);
                if (w > best_w)
                {
                    best_w = w;
                    best = c * S + s;
                }
            }
            ch.dominant.push_back(best);
        }
        return ch;
    }
}
