// SPDX-License-Identifier: Apache-2.0
//
// mmwq: uplink rate analysis for mmWave massive MIMO with low-precision ADCs
// Copyright (C) 2026 The mmwq Authors
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


#include "mmwq/config.hpp"
#include "mmwq/quantizer.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace mmwq;

namespace
{
    double pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
    double cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

    // Plain Lloyd iteration with closed-form Gaussian cell moments
    double lloyd_oracle(int bits)
    {
        const int n = 1 << bits;
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i)
            y[i] = -3.0 + 6.0 * (i + 0.5) / n;
        std::vector<double> t(n + 1);
        for (int it = 0; it < 200000; ++it)
        {
            t[0] = -INFINITY;
            t[n] = INFINITY;
            for (int i = 1; i < n; ++i)
                t[i] = 0.5 * (y[i - 1] + y[i]);
            double change = 0.0;
            for (int i = 0; i < n; ++i)
            {
                const double p = cdf(t[i + 1]) - cdf(t[i]);
                const double m = (pdf(t[i]) - pdf(t[i + 1])) / p;
                change = std::max(change, std::abs(m - y[i]));
                y[i] = m;
            }
            if (change < 1e-15)
                break;
        }
        // E[(x - q)^2] = 1 - sum p_i y_i^2 at the centroid condition
        double d = 1.0;
        for (int i = 0; i < n; ++i)
            d -= (cdf(t[i + 1]) - cdf(t[i])) * y[i] * y[i];
        return d;
    }
} // namespace

TEST_CASE("distortion table matches an independent Lloyd iteration", "[distortion]")
{
    for (int b = 1; b <= 5; ++b)
    {
        INFO("bits " << b);
        CHECK(distortion_factor(b) == Catch::Approx(lloyd_oracle(b)).epsilon(1e-7));
    }
}

TEST_CASE("distortion table matches the quantizer design", "[distortion]")
{
    for (int b = 1; b <= 12; ++b)
    {
        INFO("bits " << b);
        CHECK(distortion_factor(b) == Catch::Approx(design_lloyd_max(b).distortion).epsilon(1e-6));
    }
}

TEST_CASE("one-bit distortion is 1 - 2/pi", "[distortion]")
{
    CHECK(distortion_factor(1) == Catch::Approx(1.0 - 2.0 / M_PI).epsilon(1e-12));
    CHECK(distortion_factor(1) == Catch::Approx(0.3634).margin(5e-5));
}

TEST_CASE("three-bit distortion", "[distortion]")
{
    CHECK(distortion_factor(3) == Catch::Approx(0.03454).epsilon(5e-4));
}

TEST_CASE("twelve bits is nearly distortionless", "[distortion]")
{
    CHECK(distortion_factor(12) < 1e-5);
    CHECK(distortion_factor(12) > 0.0);
}

TEST_CASE("distortion decreases strictly with resolution", "[distortion][property]")
{
    for (int b = 1; b < 12; ++b)
        CHECK(distortion_factor(b + 1) < distortion_factor(b));
}

TEST_CASE("distortion outside 1..12 bits is rejected", "[distortion]")
{
    CHECK_THROWS_AS(distortion_factor(0), std::invalid_argument);
    CHECK_THROWS_AS(distortion_factor(13), std::invalid_argument);
}
