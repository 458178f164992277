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

#include "abp/estimator.hpp"
#include "abp/metrics.hpp"
#include "support.hpp"

#include <cmath>

using namespace abp;
using Catch::Approx;

namespace
{
    // Every beam observed once through a single receive probing holding all receive beams
    ProbingPlan one_shot_plan(const Codebooks &cb)
    {
        ProbingPlan plan;
        plan.n_rf = 1;
        plan.m_rf = int(cb.rx.size());
        plan.rx.emplace_back();
        for (int j = 0; j < int(cb.rx.size()); ++j)
            plan.rx[0].push_back(j);
        for (int t = 0; t < int(cb.tx.size()); ++t)
            plan.tx.push_back({t});
        return plan;
    }

    StrengthMap exhaustive_map(const Eigen::MatrixXd &P)
    {
        return {P, {P.sum()}};
    }

    PathParams path_at(const SpatialFrequencies &sf, const ArrayConfig &a, cd g = 1.0)
    {
        PathParams p;
        p.g_vv = g;
        p.angles = angles_from(sf, a);
        return p;
    }
}

TEST_CASE("search complexity", "[multipath]")
{
    CHECK(abp_complexity(2, 20, 2, 20) == 1600);
    CHECK(gob_complexity(10, 4, 2, 2) == 1600);
    const ArrayConfig a;
    const Codebooks cb = build_codebooks(a);
    const auto plan = random_probing_plan(cb, 6, 2, 2, 2, 11, ProbingLayout::random, false);
    const auto ch = rician_narrowband(13.2, 5, 3, a);
    std::mt19937_64 r(1);
    const auto P = measure_power_grid(ch, cb, noiseless, r);
    StrengthMap map{P, std::vector<double>(2, 0.0)};
    map.rx_probing_sum[1] = 1.0;
    const auto rep = estimate_multipath(map, cb, plan, 1);
    CHECK(rep.iterations == 2 * 6 * 2 * 2);
}

TEST_CASE("one path, one chain per side reduces to the single-path estimator", "[multipath]")
{
    ArrayConfig a;
    const Codebooks cb = build_codebooks(a);
    OfdmConfig o = OfdmConfig::profile(64, 8);
    o.pulse = PulseShape::unit_sample;
    const auto abps = enumerate_abps(cb);
    const auto pilots = assign_beam_pilots(cb, abps, 64, default_root_pool(64, 16), 6, PilotLayout::analytic);
    const auto plan = exhaustive_plan(cb);
    auto rng = test::rng_for(70);
    for (int c = 0; c < 50; ++c)
    {
        const SpatialFrequencies sf{test::uniform(rng, cb.el_boresights.front(), cb.el_boresights.back()),
                                    test::uniform(rng, cb.az_boresights.front(), cb.az_boresights.back()),
                                    test::uniform(rng, cb.rx_boresights.front(), cb.rx_boresights.back())};
        const auto ch = copol_frequency_response({path_at(sf, a, test::complex_gaussian(rng))}, a, o);
        std::mt19937_64 r1(1), r2(1);
        const auto single = estimate_single_path(ch, cb, noiseless, r1).paths.at(0);
        const auto multi = estimate_multipath(ch, cb, plan, pilots, noiseless, 1, r2);
        REQUIRE(multi.paths.size() == 1);
        const auto &m = multi.paths[0];
        REQUIRE(m.tx_beam == single.tx_beam);
        REQUIRE(m.rx_beam == single.rx_beam);
        REQUIRE(std::abs(m.mu.mu_x - single.mu.mu_x) < 1e-9);
        REQUIRE(std::abs(m.mu.mu_y - single.mu.mu_y) < 1e-9);
        REQUIRE(std::abs(m.mu.nu - single.mu.nu) < 1e-9);
        REQUIRE(m.az.zeta.value == Approx(single.az.zeta.value).margin(1e-9));
    }
}

TEST_CASE("two separated paths are both recovered", "[multipath]")
{
    ArrayConfig a;
    a.n_x = 16;
    a.n_y = 32;
    a.m_tot = 16;
    const Codebooks cb = build_codebooks(a);
    const auto plan = one_shot_plan(cb);
    const int nr = int(cb.rx.size());
    auto rng = test::rng_for(71);
    int runs = 0;
    for (int c = 0; c < 40; ++c)
    {
        // paths in opposite parts of every sector
        const int nz = cb.n_az();
        const int ne = cb.n_el();
        const SpatialFrequencies s0{test::uniform(rng, cb.el_boresights[0], cb.el_boresights[ne / 2 - 1]),
                                    test::uniform(rng, cb.az_boresights[1], cb.az_boresights[nz / 3 - 1]),
                                    test::uniform(rng, cb.rx_boresights[nr / 8], cb.rx_boresights[nr / 4])};
        const SpatialFrequencies s1{test::uniform(rng, cb.el_boresights[ne / 2], cb.el_boresights[ne - 1]),
                                    test::uniform(rng, cb.az_boresights[2 * nz / 3], cb.az_boresights[nz - 2]),
                                    test::uniform(rng, cb.rx_boresights[5 * nr / 8], cb.rx_boresights[3 * nr / 4])};
        const auto p0 = path_at(s0, a, std::polar(1.0, test::uniform(rng, 0, 2 * pi)));
        const auto p1 = path_at(s1, a, std::polar(0.8, test::uniform(rng, 0, 2 * pi)));
        const auto ch = copol_frequency_response({p0, p1}, a, OfdmConfig::narrowband());
        std::mt19937_64 r0(1);
        const auto rep = estimate_multipath(exhaustive_map(measure_power_grid(ch, cb, noiseless, r0)), cb, plan, 2);
        REQUIRE(rep.paths.size() == 2);

        // pairwise oracle: each path estimated alone
        std::vector<PathEstimate> oracle;
        for (const auto &p : {p0, p1})
        {
            std::mt19937_64 r(1);
            oracle.push_back(
                estimate_single_path(copol_frequency_response({p}, a, OfdmConfig::narrowband()), cb, noiseless, r)
                    .paths[0]);
        }
        const std::vector<SpatialFrequencies> truth{s0, s1};
        for (int i = 0; i < 2; ++i)
        {
            const auto &o = oracle[i];
            // match by transmit beam
            const PathEstimate *e = nullptr;
            for (const auto &x : rep.paths)
                if (x.tx_beam == o.tx_beam)
                    e = &x;
            REQUIRE(e != nullptr);
            REQUIRE(e->rx_beam == o.rx_beam);
            REQUIRE(rad2deg(std::abs(e->angles.theta - o.angles.theta)) < 0.1);
            REQUIRE(rad2deg(std::abs(wrap_angle(e->angles.phi - o.angles.phi))) < 0.1);
            REQUIRE(rad2deg(std::abs(e->angles.psi - o.angles.psi)) < 0.1);
            REQUIRE(std::abs(o.mu.mu_y - truth[i].mu_y) < 1e-9);
        }
        ++runs;
    }
    CHECK(runs == 40);
}

TEST_CASE("cross-polarized ratios do not depend on leakage or rotation", "[multipath]")
{
    ArrayConfig a;
    a.mode = PolarizationMode::cross;
    a.m_tot = 8;
    const Codebooks cb = build_codebooks(a);
    auto rng = test::rng_for(72);
    for (int c = 0; c < 100; ++c)
    {
        // a v-half direction away from the h beams
        const double lo = cb.az_boresights.front(), hi = cb.az_boresights[cb.az_split - 2];
        const SpatialFrequencies sf{test::uniform(rng, cb.el_boresights.front(), cb.el_boresights.back()),
                                    test::uniform(rng, lo, hi),
                                    test::uniform(rng, cb.rx_boresights.front(), cb.rx_boresights[cb.rx_split - 1])};
        PathParams p = path_at(sf, a, test::complex_gaussian(rng));
        p.g_vv = std::polar(1.0, test::uniform(rng, 0.0, 2 * pi));
        p.g_vh = 0.1 * test::complex_gaussian(rng);
        p.g_hv = 0.1 * test::complex_gaussian(rng);
        p.g_hh = 0.1 * test::complex_gaussian(rng);
        std::vector<double> zetas;
        for (const CrossPolConfig xp : {CrossPolConfig{0.0, 0.0}, CrossPolConfig{0.2, deg2rad(20.0)},
                                        CrossPolConfig{0.9, deg2rad(60.0)}})
        {
            std::mt19937_64 r(1);
            const auto ch = crosspol_frequency_response({p}, a, OfdmConfig::narrowband(), xp);
            const auto e = estimate_single_path(ch, cb, noiseless, r).paths[0];
            REQUIRE(e.az.pol == Pol::v);
            const double x = sf.mu_y - e.az.center;
            REQUIRE(e.az.zeta.value == Approx(array_factor_ratio(x, e.az.delta, a.n_y)).margin(1e-6));
            zetas.push_back(e.az.zeta.value);
        }
        REQUIRE(zetas[1] == Approx(zetas[0]).margin(1e-9));
        REQUIRE(zetas[2] == Approx(zetas[0]).margin(1e-9));
    }
}

TEST_CASE("selection failures", "[multipath]")
{
    SECTION("no receive neighbour")
    {
        ArrayConfig a;
        a.m_tot = 1;
        const Codebooks cb = build_codebooks(a);
        REQUIRE(cb.rx.size() == 1);
        const auto ch = copol_frequency_response({path_at({0.1, 0.2, 0.0}, a)}, a, OfdmConfig::narrowband());
        std::mt19937_64 r(1);
        try
        {
            estimate_single_path(ch, cb, noiseless, r);
            FAIL("expected InsufficientNeighbors");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == ErrorCode::InsufficientNeighbors);
        }
    }

    SECTION("silent channel")
    {
        const ArrayConfig a;
        const Codebooks cb = build_codebooks(a);
        const auto plan = one_shot_plan(cb);
        const Eigen::MatrixXd P = Eigen::MatrixXd::Zero(cb.rx.size(), cb.tx.size());
        try
        {
            estimate_multipath(exhaustive_map(P), cb, plan, 1);
            FAIL("expected NoSignal");
        }
        catch (const Error &e)
        {
            CHECK(e.code() == ErrorCode::NoSignal);
        }
        CHECK_THROWS_AS(estimate_multipath(exhaustive_map(P + Eigen::MatrixXd::Ones(P.rows(), P.cols())), cb, plan, 0),
                        Error);
    }
}

TEST_CASE("grid-of-beams multipath reports boresights", "[multipath]")
{
    const ArrayConfig a;
    const Codebooks cb = build_codebooks(a);
    std::mt19937_64 r(1);
    const SpatialFrequencies s0{cb.el_boresights[0], cb.az_boresights[0], cb.rx_boresights[0]};
    const SpatialFrequencies s1{cb.el_boresights[1], cb.az_boresights[4], cb.rx_boresights[3]};
    const auto ch = copol_frequency_response({path_at(s0, a), path_at(s1, a, 0.9)}, a, OfdmConfig::narrowband());
    const auto rep = gob_multipath(ch, cb, noiseless, 2, r);
    REQUIRE(rep.paths.size() == 2);
    CHECK(rep.paths[0].mu.mu_y == Approx(s0.mu_y).margin(1e-12));
    CHECK(rep.paths[1].mu.mu_y == Approx(s1.mu_y).margin(1e-12));
    CHECK(rep.paths[1].mu.nu == Approx(s1.nu).margin(1e-12));
    CHECK(rep.iterations == std::int64_t(cb.tx.size() * cb.rx.size()));
}

TEST_CASE("pilot-based multipath estimation under noise", "[multipath]")
{
    const ArrayConfig a;
    const Codebooks cb = build_codebooks(a);
    const OfdmConfig o = OfdmConfig::profile(256, 32);
    const auto abps = enumerate_abps(cb);
    const auto pilots = assign_beam_pilots(cb, abps, 256, default_root_pool(255, 16), 6);
    std::vector<double> truth, est;
    for (int trial = 0; trial < 60; ++trial)
    {
        const SpatialFrequencies sf{0.0, cb.az_boresights[2] + 0.7 * cb.deltas.delta_y, cb.rx_boresights[1] + 0.1};
        PathParams p = path_at(sf, a);
        p.tau = 3.0 * o.sample_period;
        const auto ch = copol_frequency_response({p}, a, o, array_gain_scale(a));
        const auto plan = random_probing_plan(cb, 6, 2, 2, 2, derive_seed(5, trial));
        std::mt19937_64 r(derive_seed(6, trial));
        const auto rep = estimate_multipath(ch, cb, plan, pilots, snr_from_db(10.0), 1, r);
        truth.push_back(sf.mu_y);
        est.push_back(rep.paths[0].mu.mu_y);
    }
    CHECK(maee(truth, est) < rad2deg(cb.deltas.delta_y) / 2.0);
}
