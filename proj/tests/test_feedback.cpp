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

#include "abp/feedback.hpp"
#include "abp/metrics.hpp"
#include "support.hpp"

#include <cmath>
#include <limits>

using namespace abp;
using Catch::Approx;

namespace
{
    double nearest_codeword(double x, const std::vector<double> &cw)
    {
        double best = cw[0];
        for (double c : cw)
            if (std::abs(c - x) < std::abs(best - x))
                best = c;
        return best;
    }

    double worst_error_differential(double delta, int bits, DifferentialVariant v, int samples)
    {
        double worst = 0.0;
        for (int i = 0; i <= samples; ++i)
        {
            const double mu = -delta + 2.0 * delta * i / samples;
            worst = std::max(worst, std::abs(reconstruct(quantize_differential(mu, 0.0, delta, bits, v)) - mu));
        }
        return worst;
    }
}

TEST_CASE("codewords are cell midpoints", "[feedback]")
{
    const auto cw = uniform_codewords(-1.0, 1.0, 2);
    REQUIRE(cw.size() == 4);
    CHECK(cw[0] == Approx(-0.75));
    CHECK(cw[1] == Approx(-0.25));
    CHECK(cw[2] == Approx(0.25));
    CHECK(cw[3] == Approx(0.75));
    CHECK_THROWS_AS(uniform_codewords(1.0, 1.0, 2), Error);
    CHECK_THROWS_AS(uniform_codewords(-1.0, 1.0, 0), Error);
}

TEST_CASE("worst-case quantization error examples", "[feedback]")
{
    // eight codewords on [-11.25, 11.25]: cells of 2.8125, worst error half a cell
    CHECK(worst_error_differential(11.25, 3, DifferentialVariant::magnitude_sign, 100000) ==
          Approx(1.40625).margin(1e-9));
    double worst = 0.0;
    for (int i = 0; i <= 100000; ++i)
    {
        const double mu = -60.0 + 120.0 * i / 100000;
        worst = std::max(worst, std::abs(reconstruct(quantize_direct(mu, 120.0, 4)) - mu));
    }
    CHECK(worst == Approx(3.75).margin(1e-9));
}

TEST_CASE("dense sweep meets the half-cell bound", "[feedback][property]")
{
    for (int bits = 1; bits <= 8; ++bits)
        for (double delta : {deg2rad(11.25), deg2rad(22.5), pi / 16, 0.3})
        {
            const double bound = 2.0 * delta / double(1 << bits) / 2.0;
            for (auto v : {DifferentialVariant::magnitude_sign, DifferentialVariant::signed_offset})
            {
                const double w = worst_error_differential(delta, bits, v, 1 << 14);
                REQUIRE(w <= bound + 1e-9);
                REQUIRE(w == Approx(bound).margin(1e-9));
            }
        }
}

TEST_CASE("quantization matches an enumeration oracle", "[feedback][property]")
{
    auto rng = test::rng_for(80);
    for (int c = 0; c < test::property_cases; ++c)
    {
        const int bits = 1 + int(rng() % 7);
        const double delta = test::uniform(rng, 0.01, 1.0), center = test::uniform(rng, -2.0, 2.0);
        const double mu = center + test::uniform(rng, -delta, delta);
        const auto cw = uniform_codewords(-delta, delta, bits);

        const auto lit = quantize_differential(mu, center, delta, bits);
        const double a = nearest_codeword(std::abs(mu - center), cw);
        REQUIRE(reconstruct(lit) == Approx(mu <= center ? center - a : center + a).margin(1e-12));
        REQUIRE(lit.total_bits() == bits + 1);

        const auto sgn = quantize_differential(mu, center, delta, bits, DifferentialVariant::signed_offset);
        REQUIRE(reconstruct(sgn) == Approx(center + nearest_codeword(mu - center, cw)).margin(1e-12));

        const double width = test::uniform(rng, 0.5, 4.0), x = test::uniform(rng, -width / 2, width / 2);
        const auto dir = quantize_direct(x, width, bits);
        REQUIRE(reconstruct(dir) == Approx(nearest_codeword(x, uniform_codewords(-width / 2, width / 2, bits))).margin(1e-12));
        REQUIRE(dir.total_bits() == bits);
    }
}

TEST_CASE("sign bit follows the side of the pair center", "[feedback]")
{
    const double delta = 0.2, center = 0.5;
    auto w = quantize_differential(center - 0.05, center, delta, 4);
    CHECK(w.sign_bit == 1);
    CHECK(reconstruct(w) < center);
    w = quantize_differential(center + 0.05, center, delta, 4);
    CHECK(w.sign_bit == -1);
    CHECK(reconstruct(w) > center);

    // a word carrying sign -1 and the codeword nearest delta / 2 lands right of the center
    FeedbackWord f;
    f.bits = 2;
    f.sign_bit = -1;
    f.half_range = delta;
    f.index = 2; // codeword +delta / 4 on [-delta, delta] with four cells
    CHECK(reconstruct(f, center) == Approx(center + delta / 4));
    f.index = 3;
    CHECK(reconstruct(f, center) == Approx(center + 3 * delta / 4));
}

TEST_CASE("out-of-range inputs are rejected", "[feedback]")
{
    try
    {
        quantize_differential(0.5, 0.0, 0.2, 3);
        FAIL("expected OutOfRange");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::OutOfRange);
    }
    CHECK_THROWS_AS(quantize_direct(1.1, 2.0, 3), Error);
    CHECK_NOTHROW(quantize_differential(0.2, 0.0, 0.2, 3));
    CHECK_THROWS_AS(quantize_differential(0.0, 0.0, 0.0, 3), Error);
    CHECK_THROWS_AS(quantize_direct(0.0, 1.0, 0), Error);
}

TEST_CASE("mean quantization error of a uniform input is a quarter cell", "[feedback]")
{
    auto rng = test::rng_for(81);
    const double delta = deg2rad(11.25);
    for (int bits : {2, 3, 4})
    {
        std::vector<double> est, q;
        for (int i = 0; i < 100000; ++i)
        {
            const double mu = test::uniform(rng, -delta, delta);
            est.push_back(mu);
            q.push_back(reconstruct(quantize_differential(mu, 0.0, delta, bits)));
        }
        const double cell = rad2deg(2.0 * delta / double(1 << bits));
        CHECK(maqe(est, q) == Approx(cell / 4).epsilon(0.01));
    }
}

TEST_CASE("differential feedback beats direct feedback at equal total bits", "[feedback]")
{
    auto rng = test::rng_for(82);
    for (int n_y : {8, 16})
    {
        const double delta = pi / (2.0 * n_y), width = deg2rad(120.0);
        for (int total = 2; total <= 6; ++total)
        {
            std::vector<double> est, dq, rq;
            for (int i = 0; i < 20000; ++i)
            {
                const double center = 2.0 * delta * (int(rng() % 5) - 2);
                const double mu = center + test::uniform(rng, -delta, delta);
                est.push_back(mu);
                dq.push_back(reconstruct(quantize_differential(mu, center, delta, total - 1)));
                rq.push_back(reconstruct(quantize_direct(mu, width, total)));
            }
            INFO("n_y " << n_y << " total bits " << total);
            CHECK(maqe(est, dq) < maqe(est, rq));
        }
    }
}
