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

#include "catch_amalgamated.hpp"

#include "abp/channel.hpp"
#include "support.hpp"

#include <cmath>
#include <sstream>

using namespace abp;
using Catch::Approx;

namespace
{
    OfdmConfig unit_pulse(int n, int cp)
    {
        OfdmConfig o = OfdmConfig::profile(n, cp);
        o.pulse = PulseShape::unit_sample;
        return o;
    }

    double raised_cosine(double x, double beta)
    {
        if (std::abs(x) < 1e-15)
            return 1.0;
        if (beta > 0.0 && std::abs(std::abs(x) - 1.0 / (2.0 * beta)) < 1e-12)
            return beta / 2.0 * std::sin(pi / (2.0 * beta));
        return std::sin(pi * x) / (pi * x) * std::cos(pi * beta * x) / (1.0 - 4.0 * beta * beta * x * x);
    }

    PathParams random_path(std::mt19937_64 &rng, double tau_max, bool cross)
    {
        PathParams p;
        p.g_vv = test::complex_gaussian(rng);
        if (cross)
        {
            p.g_vh = test::complex_gaussian(rng);
            p.g_hv = test::complex_gaussian(rng);
            p.g_hh = test::complex_gaussian(rng);
        }
        p.tau = test::uniform(rng, 0.0, tau_max);
        p.angles = {test::uniform(rng, 0.0, pi / 2), test::uniform(rng, -pi, pi), test::uniform(rng, -pi / 2, pi / 2)};
        return p;
    }

    // Entry (m, n) of sum_r rho_r[k] G_r(pol(m), pol(n)) a_r(m) conj(a_t(n)), one term at a time
    CMatrix entrywise_response(const std::vector<PathParams> &paths, const ArrayConfig &a, const OfdmConfig &o,
                               const std::optional<CrossPolConfig> &xp, int k)
    {
        const int mr = a.rx_per_pol(), nt = a.tx_per_pol();
        const int M = a.cross() ? 2 * mr : mr, Nt = a.cross() ? 2 * nt : nt;
        CMatrix H = CMatrix::Zero(M, Nt);
        for (const auto &p : paths)
        {
            cd rho = 0.0;
            for (int d = 0; d < o.cp_length; ++d)
            {
                const double x = (d * o.sample_period - p.tau) / o.sample_period;
                const double ps = o.pulse == PulseShape::unit_sample ? (std::abs(x) < 1e-9 ? 1.0 : 0.0)
                                                                     : raised_cosine(x, o.rolloff);
                rho += ps * std::exp(cd(0.0, -2.0 * pi * k * d / o.n_subcarriers));
            }
            // 2x2 polarization gains: Givens rotation applied to the imbalance-weighted gains
            Eigen::Matrix2cd G;
            G << p.g_vv, p.g_vh, p.g_hv, p.g_hh;
            if (a.cross())
            {
                Eigen::Matrix2cd X;
                X << 1.0, std::sqrt(xp->chi), std::sqrt(xp->chi), 1.0;
                X /= std::sqrt(1.0 + xp->chi);
                Eigen::Matrix2cd R;
                R << std::cos(xp->varsigma), -std::sin(xp->varsigma), std::sin(xp->varsigma), std::cos(xp->varsigma);
                G = X.cwiseProduct(G) * R;
            }
            const double ux = std::sin(p.angles.theta) * std::cos(p.angles.phi);
            const double uy = std::sin(p.angles.theta) * std::sin(p.angles.phi);
            for (int m = 0; m < M; ++m)
                for (int n = 0; n < Nt; ++n)
                {
                    const int mi = m % mr, ni = n % nt;
                    const int ix = ni / a.n_y, iy = ni % a.n_y;
                    const cd ar = std::exp(cd(0.0, 2.0 * pi * a.d_r * mi * std::sin(p.angles.psi))) / std::sqrt(double(mr));
                    const cd at = std::exp(cd(0.0, 2.0 * pi * (a.d_tx * ix * ux + a.d_ty * iy * uy))) / std::sqrt(double(nt));
                    H(m, n) += rho * G(m / mr, n / nt) * ar * std::conj(at);
                }
        }
        return H;
    }
}

TEST_CASE("pulse coefficients of the unit-sample pulse", "[channel]")
{
    const OfdmConfig o = unit_pulse(64, 16);
    for (int k = 0; k < 64; ++k)
    {
        CHECK(std::abs(pulse_coefficient(0.0, k, o) - cd(1.0, 0.0)) < 1e-12);
        const cd ramp = std::exp(cd(0.0, -2.0 * pi * 3.0 * k / 64.0));
        CHECK(std::abs(pulse_coefficient(3.0 * o.sample_period, k, o) - ramp) < 1e-12);
    }
    CHECK_THROWS_AS(pulse_coefficient(0.0, 64, o), Error);
}

TEST_CASE("raised-cosine pulse coefficients match direct summation", "[channel]")
{
    OfdmConfig o = OfdmConfig::profile(128, 32);
    o.rolloff = 0.25;
    const double tau = 1.5 * o.sample_period;
    const CVector rho = pulse_response(tau, o);
    for (int k = 0; k < 128; ++k)
    {
        cd ref = 0.0;
        for (int d = 0; d < 32; ++d)
            ref += raised_cosine(d - 1.5, 0.25) * std::exp(cd(0.0, -2.0 * pi * k * d / 128.0));
        REQUIRE(std::abs(pulse_coefficient(tau, k, o) - ref) < 1e-10);
        REQUIRE(std::abs(rho(k) - ref) < 1e-10);
    }
    // first null of the roll-off term
    CHECK(pulse_sample(2.0 * o.sample_period, o) == Approx(raised_cosine(2.0, 0.25)).margin(1e-12));
}

TEST_CASE("co-polarized response properties", "[channel]")
{
    ArrayConfig a;
    a.n_x = 2;
    a.n_y = 4;
    a.m_tot = 4;
    const OfdmConfig o = unit_pulse(8, 4);

    SECTION("single undelayed path is frequency flat and rank one")
    {
        PathParams p;
        p.angles = {0.4, 0.3, -0.2};
        const auto ch = copol_frequency_response({p}, a, o);
        REQUIRE(ch.n_subcarriers() == 8);
        for (int k = 1; k < 8; ++k)
            CHECK(test::max_abs_diff(ch.H[k], ch.H[0]) < 1e-14);
        Eigen::JacobiSVD<CMatrix> svd(ch.H[0]);
        CHECK(svd.singularValues()(1) < 1e-12 * svd.singularValues()(0));
    }

    SECTION("paths with orthogonal receive responses add in power")
    {
        PathParams p1, p2;
        p1.g_vv = cd(0.8, -0.3);
        p1.tau = 1.0 * o.sample_period;
        p1.angles = {0.5, 0.2, 0.0};
        p2.g_vv = cd(-0.2, 0.6);
        p2.tau = 2.0 * o.sample_period;
        p2.angles = {0.9, -0.4, pi / 6}; // nu = pi / 2, orthogonal for 4 elements
        const auto ch = copol_frequency_response({p1, p2}, a, o);
        for (int k = 0; k < 8; ++k)
        {
            const double expect = std::norm(p1.g_vv * pulse_coefficient(p1.tau, k, o)) +
                                  std::norm(p2.g_vv * pulse_coefficient(p2.tau, k, o));
            CHECK(ch.H[k].squaredNorm() == Approx(expect).epsilon(1e-12));
        }
    }

    SECTION("toy instance equals the entry-wise sum")
    {
        auto rng = test::rng_for(10);
        std::vector<PathParams> paths;
        for (int r = 0; r < 3; ++r)
            paths.push_back(random_path(rng, 3.0 * o.sample_period, false));
        for (auto &p : paths)
            p.tau = std::round(p.tau / o.sample_period) * o.sample_period;
        const auto ch = copol_frequency_response(paths, a, o);
        for (int k = 0; k < 8; ++k)
            CHECK(test::max_abs_diff(ch.H[k], entrywise_response(paths, a, o, std::nullopt, k)) < 1e-12);
    }

    SECTION("errors")
    {
        ArrayConfig x = a;
        x.mode = PolarizationMode::cross;
        PathParams p;
        CHECK_THROWS_AS(copol_frequency_response({p}, x, o), Error);
        p.tau = 10.0 * o.sample_period;
        CHECK_THROWS_AS(copol_frequency_response({p}, a, o), Error);
    }
}

TEST_CASE("cross-polarized response", "[channel]")
{
    ArrayConfig a;
    a.n_x = 2;
    a.n_y = 2;
    a.m_tot = 4;
    a.mode = PolarizationMode::cross;
    OfdmConfig o = OfdmConfig::profile(8, 4);

    SECTION("infinite discrimination without mismatch leaves the off-diagonal block empty")
    {
        PathParams p;
        p.g_vh = cd(0.7, 0.1);
        p.g_hv = cd(-0.3, 0.2);
        p.g_hh = cd(0.5, 0.5);
        const auto ch = crosspol_frequency_response({p}, a, o, {0.0, 0.0});
        for (int k = 0; k < 8; ++k)
        {
            CHECK(ch.block(k, Pol::v, Pol::h).cwiseAbs().maxCoeff() < 1e-15);
            CHECK(ch.block(k, Pol::h, Pol::v).cwiseAbs().maxCoeff() < 1e-15);
        }
    }

    SECTION("imbalance weights")
    {
        PathParams p;
        p.g_vv = p.g_vh = p.g_hv = p.g_hh = 1.0;
        const CrossPolConfig xp{0.25, 0.0};
        const auto g = effective_gains(p, xp);
        CHECK(std::abs(g.vv) == Approx(std::sqrt(1.0 / 1.25)));
        CHECK(std::abs(g.hh) == Approx(std::sqrt(1.0 / 1.25)));
        CHECK(std::abs(g.vh) == Approx(std::sqrt(0.25 / 1.25)));
        CHECK(std::abs(g.hv) == Approx(std::sqrt(0.25 / 1.25)));
        CHECK_THROWS_AS(effective_gains(p, {-0.1, 0.0}), Error);
        CHECK_THROWS_AS(crosspol_frequency_response({p}, a, o, {-0.1, 0.0}), Error);
    }

    SECTION("block assembly equals the entry-wise construction")
    {
        auto rng = test::rng_for(11);
        for (int c = 0; c < 20; ++c)
        {
            std::vector<PathParams> paths;
            for (int r = 0; r < 3; ++r)
                paths.push_back(random_path(rng, 3.0 * o.sample_period, true));
            const CrossPolConfig xp{0.2, deg2rad(20.0)};
            const auto ch = crosspol_frequency_response(paths, a, o, xp);
            for (int k = 0; k < 8; ++k)
                REQUIRE(test::max_abs_diff(ch.H[k], entrywise_response(paths, a, o, xp, k)) < 1e-12);
        }
    }

    SECTION("the four blocks tile the full matrix")
    {
        auto rng = test::rng_for(12);
        for (int c = 0; c < test::property_cases; ++c)
        {
            const CrossPolConfig xp{test::uniform(rng, 0.0, 1.0), test::uniform(rng, -pi, pi)};
            OfdmConfig flat = o;
            flat.n_subcarriers = 2;
            flat.cp_length = 1;
            const auto ch = crosspol_frequency_response({random_path(rng, 0.0, true)}, a, flat, xp);
            for (int k = 0; k < 2; ++k)
            {
                CMatrix T(4, 8);
                T << ch.block(k, Pol::v, Pol::v), ch.block(k, Pol::v, Pol::h), ch.block(k, Pol::h, Pol::v),
                    ch.block(k, Pol::h, Pol::h);
                REQUIRE(test::max_abs_diff(T, ch.H[k]) < 1e-12);
            }
        }
    }
}

TEST_CASE("frequency-flat limit", "[channel]")
{
    auto rng = test::rng_for(13);
    ArrayConfig a;
    a.n_x = 2;
    a.n_y = 2;
    a.m_tot = 2;
    const OfdmConfig o = unit_pulse(16, 4);
    std::vector<PathParams> paths;
    for (int r = 0; r < 4; ++r)
        paths.push_back(random_path(rng, 0.0, false));
    const auto ch = copol_frequency_response(paths, a, o);
    for (int k = 1; k < 16; ++k)
        CHECK(test::max_abs_diff(ch.H[k], ch.H[0]) < 1e-14);
}

TEST_CASE("Givens rotation preserves the vertical-row energy", "[channel][property]")
{
    auto rng = test::rng_for(14);
    for (int c = 0; c < test::property_cases; ++c)
    {
        PathParams p = random_path(rng, 0.0, true);
        const double chi = test::uniform(rng, 0.0, 1.0);
        const auto g0 = effective_gains(p, {chi, 0.0});
        const auto g1 = effective_gains(p, {chi, test::uniform(rng, -pi, pi)});
        const double e0 = std::norm(g0.vv) + std::norm(g0.vh), e1 = std::norm(g1.vv) + std::norm(g1.vh);
        REQUIRE(std::abs(e0 - e1) < 1e-12 * std::max(1.0, e0));
        const double f0 = std::norm(g0.hv) + std::norm(g0.hh), f1 = std::norm(g1.hv) + std::norm(g1.hh);
        REQUIRE(std::abs(f0 - f1) < 1e-12 * std::max(1.0, f0));
    }
}

TEST_CASE("cross-block energy grows with the power imbalance", "[channel][property]")
{
    auto rng = test::rng_for(15);
    ArrayConfig a;
    a.n_x = 1;
    a.n_y = 2;
    a.m_tot = 2;
    a.mode = PolarizationMode::cross;
    const OfdmConfig o = unit_pulse(4, 2);
    for (int c = 0; c < test::property_cases; ++c)
    {
        std::vector<PathParams> paths{random_path(rng, 0.0, true), random_path(rng, 0.0, true)};
        double c1 = test::uniform(rng, 0.0, 1.0), c2 = test::uniform(rng, 0.0, 1.0);
        if (c1 > c2)
            std::swap(c1, c2);
        auto energy = [&](double chi)
        {
            const auto ch = crosspol_frequency_response(paths, a, o, {chi, 0.0});
            double e = 0.0;
            for (int k = 0; k < 4; ++k)
                e += ch.block(k, Pol::v, Pol::h).squaredNorm();
            return e;
        };
        REQUIRE(energy(c2) >= energy(c1) - 1e-12);
    }
}

TEST_CASE("narrowband Rician channel", "[channel]")
{
    ArrayConfig a;

    SECTION("very large K leaves a rank-one line-of-sight channel")
    {
        const auto ch = rician_narrowband(200.0, 5, 7, a);
        REQUIRE(ch.n_subcarriers() == 1);
        REQUIRE(ch.paths.size() == 6);
        Eigen::JacobiSVD<CMatrix> svd(ch.H[0]);
        CHECK(svd.singularValues()(1) < 1e-8 * svd.singularValues()(0));
        CHECK(ch.dominant == std::vector<int>{0});
    }

    SECTION("fixed line of sight is kept as ground truth")
    {
        const AngleSet los{0.5, 0.2, -0.1};
        const auto ch = rician_narrowband(13.2, 5, 3, a, los);
        CHECK(ch.paths[0].angles.theta == los.theta);
        CHECK(ch.paths[0].angles.phi == los.phi);
        CHECK(std::norm(ch.paths[0].g_vv) == Approx(std::pow(10.0, 1.32) / (1.0 + std::pow(10.0, 1.32))));
    }

    SECTION("NLOS power matches the configured share")
    {
        const double K = std::pow(10.0, 1.32);
        double acc = 0.0;
        const int seeds = 10000;
        for (int s = 0; s < seeds; ++s)
        {
            const auto ch = rician_narrowband(13.2, 5, std::uint64_t(s) + 1, a);
            const auto &p = ch.paths[0];
            const auto sf = spatial_frequencies(p.angles, a);
            const CMatrix los = p.g_vv * ula_steering(sf.nu, a.m_tot) * upa_steering(sf.mu_x, sf.mu_y, a.n_x, a.n_y).adjoint();
            acc += (ch.H[0] - los).squaredNorm();
        }
        CHECK(acc / seeds == Approx(1.0 / (1.0 + K)).epsilon(0.02));
    }

    CHECK_THROWS_AS(rician_narrowband(13.2, -1, 1, a), Error);
}

TEST_CASE("clustered generator", "[channel]")
{
    ArrayConfig a;
    a.n_x = 2;
    a.n_y = 2;
    a.m_tot = 2;
    a.mode = PolarizationMode::cross;
    const OfdmConfig o = OfdmConfig::profile(64, 16);

    SECTION("one cluster with one subpath collapses to the single-path model")
    {
        ClusterProfile pr;
        pr.n_clusters = 1;
        pr.subpaths = 1;
        pr.delay_spread = 0.0;
        pr.angular_spread = 0.0;
        const auto ch = clustered_channel_generate(pr, 5, a, o);
        REQUIRE(ch.paths.size() == 1);
        CHECK(ch.paths[0].tau == 0.0);
        const auto ref = crosspol_frequency_response(ch.paths, a, o, pr.xp);
        for (int k = 0; k < 64; ++k)
        {
            CHECK(test::max_abs_diff(ch.H[k], ref.H[k]) < 1e-14);
            CHECK(test::max_abs_diff(ch.H[k], ch.H[0]) < 1e-12);
        }
        CHECK(ch.dominant == std::vector<int>{0});
    }

    SECTION("fixed seed gives an identical realization")
    {
        ClusterProfile pr;
        const auto c1 = clustered_channel_generate(pr, 99, a, o);
        const auto c2 = clustered_channel_generate(pr, 99, a, o);
        REQUIRE(c1.H.size() == c2.H.size());
        for (std::size_t k = 0; k < c1.H.size(); ++k)
            CHECK((c1.H[k].array() == c2.H[k].array()).all());
        CHECK(c1.dominant == c2.dominant);
        const auto c3 = clustered_channel_generate(pr, 100, a, o);
        CHECK_FALSE((c1.H[0].array() == c3.H[0].array()).all());
    }

    SECTION("dominant paths are the strongest subpath of each cluster")
    {
        ClusterProfile pr;
        const auto ch = clustered_channel_generate(pr, 17, a, o);
        REQUIRE(int(ch.dominant.size()) == pr.n_clusters);
        for (int c = 0; c < pr.n_clusters; ++c)
        {
            const int d = ch.dominant[c];
            CHECK(d / pr.subpaths == c);
            auto w = [&](int i)
            {
                const auto &p = ch.paths[i];
                return std::norm(p.g_vv) + std::norm(p.g_vh) + std::norm(p.g_hv) + std::norm(p.g_hh);
            };
            for (int s = 0; s < pr.subpaths; ++s)
                CHECK(w(d) >= w(c * pr.subpaths + s));
        }
    }

    SECTION("RMS delay spread follows the configured scale")
    {
        ClusterProfile pr;
        pr.delay_spread = 40e-9;
        ArrayConfig small;
        small.n_x = 1;
        small.n_y = 2;
        small.m_tot = 1;
        double acc = 0.0;
        const int seeds = 1000;
        for (int s = 0; s < seeds; ++s)
            acc += rms_delay_spread(clustered_channel_generate(pr, std::uint64_t(s) + 1, small, OfdmConfig::profile(16, 15)).paths);
        CHECK(acc / seeds == Approx(pr.delay_spread).epsilon(0.10));
    }
}

TEST_CASE("RMS delay spread of two equal paths", "[channel]")
{
    PathParams p1, p2;
    p1.tau = 0.0;
    p2.tau = 20e-9;
    CHECK(rms_delay_spread({p1, p2}) == Approx(10e-9));
    CHECK(rms_delay_spread({p1}) == 0.0);
}

TEST_CASE("channel CSV round trip", "[channel]")
{
    ArrayConfig a;
    a.n_x = 2;
    a.n_y = 4;
    a.m_tot = 4;
    a.mode = PolarizationMode::cross;
    ClusterProfile pr;
    const auto ch = clustered_channel_generate(pr, 21, a, OfdmConfig::profile(32, 8), 3.0);
    std::stringstream ss;
    write_channel_csv(ss, ch);
    const auto back = read_channel_csv(ss);
    REQUIRE(back.paths.size() == ch.paths.size());
    CHECK(back.dominant == ch.dominant);
    CHECK(back.gain_scale == ch.gain_scale);
    REQUIRE(back.crosspol.has_value());
    CHECK(back.crosspol->chi == ch.crosspol->chi);
    for (std::size_t i = 0; i < ch.paths.size(); ++i)
    {
        CHECK(back.paths[i].g_hv == ch.paths[i].g_hv);
        CHECK(back.paths[i].tau == ch.paths[i].tau);
        CHECK(back.paths[i].angles.phi == ch.paths[i].angles.phi);
    }
    for (int k = 0; k < 32; ++k)
        CHECK(test::max_abs_diff(back.H[k], ch.H[k]) < 1e-12);

    std::stringstream bad("# abp-channel v1\n# mode=co\nheader\n1,2,3\n");
    CHECK_THROWS_AS(read_channel_csv(bad), Error);
}
