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


#include "mmwq/channel.hpp"
#include "mmwq/closed_form.hpp"
#include "mmwq/training.hpp"

#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace mmwq;
using cd = std::complex<double>;

namespace
{
    SystemConfig config(int L, int K, int N, int M)
    {
        SystemConfig c;
        c.L = L;
        c.K = K;
        c.N = N;
        c.M = M;
        c.adc_bits = 3;
        return validated(c);
    }

    TrainingResult train(const ChannelRealization &ch, const SystemConfig &cfg)
    {
        auto rng = substream(cfg.seed, 0, Stream::training);
        return train_beams(ch, cfg, TrainingNoise{}, rng);
    }
} // namespace

TEST_CASE("steering vector examples", "[channel]")
{
    const auto a = steering_vector(M_PI / 2.0, 4, 0.5);
    for (int n = 0; n < 4; ++n)
        CHECK(std::abs(a[n] - cd(1.0, 0.0)) < 1e-15);

    const auto b = steering_vector(0.0, 2, 0.5);
    CHECK(b[0] == cd(1.0, 0.0));
    CHECK(std::abs(b[1] - cd(-1.0, 0.0)) < 1e-15);

    const auto c = steering_vector(1.234, 1, 0.5);
    REQUIRE(c.size() == 1);
    CHECK(c[0] == cd(1.0, 0.0));

    CHECK_THROWS_AS(steering_vector(0.3, 0), std::invalid_argument);
}

TEST_CASE("steering vector phase progression", "[channel]")
{
    const double angle = 0.7, ratio = 0.37;
    const auto v = steering_vector(angle, 9, ratio);
    for (int n = 0; n < 9; ++n)
    {
        const cd expected = std::exp(cd(0.0, -2.0 * M_PI * n * ratio * std::cos(angle)));
        CHECK(std::abs(v[n] - expected) < 1e-13);
    }
}

TEST_CASE("sampled channels satisfy the structural invariants", "[channel]")
{
    const auto cfg = config(3, 4, 32, 4);
    for (std::uint64_t t = 0; t < 100; ++t)
    {
        const auto ch = sample_channel(cfg, t);
        for (int j = 0; j < cfg.L; ++j)
            for (int l = 0; l < cfg.L; ++l)
                for (int k = 0; k < cfg.K; ++k)
                {
                    const auto i = ch.index(j, l, k);
                    CHECK(ch.phi[i] >= 0.0);
                    CHECK(ch.phi[i] <= M_PI);
                    CHECK(ch.theta[i] >= 0.0);
                    CHECK(ch.theta[i] <= M_PI);
                    CHECK(ch.beta[i] == (j == l ? 1.0 : 0.1));
                    CHECK(ch.h_U[i][0] == cd(1.0, 0.0));
                    CHECK(ch.h_B[i][0] == cd(1.0, 0.0));
                    CHECK((ch.h_U[i].cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
                    CHECK((ch.h_B[i].cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-14);
                    const auto H = ch.H(j, l, k);
                    CHECK(H.squaredNorm() / (cfg.N * cfg.M) == Catch::Approx(ch.beta[i]).epsilon(1e-12));
                    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(H);
                    CHECK(svd.singularValues()[1] < 1e-10 * svd.singularValues()[0]);
                }
    }
}

TEST_CASE("single cell single user has unit gain", "[channel]")
{
    const auto ch = sample_channel(config(1, 1, 8, 2), 0);
    CHECK(ch.beta[0] == 1.0);
}

TEST_CASE("inter-cell gain uses beta_inter", "[channel]")
{
    auto cfg = config(2, 3, 8, 2);
    cfg.beta_inter = 0.25;
    const auto ch = sample_channel(cfg, 5);
    for (int k = 0; k < 3; ++k)
    {
        CHECK(ch.beta[ch.index(0, 1, k)] == 0.25);
        CHECK(ch.beta[ch.index(1, 0, k)] == 0.25);
        CHECK(ch.beta[ch.index(1, 1, k)] == 1.0);
    }
}

TEST_CASE("channel sampling is deterministic per trial", "[channel]")
{
    const auto cfg = config(2, 2, 16, 2);
    const auto a = sample_channel(cfg, 42);
    const auto b = sample_channel(cfg, 42);
    const auto c = sample_channel(cfg, 43);
    CHECK(a.phi == b.phi);
    CHECK(a.theta == b.theta);
    CHECK(a.phi != c.phi);
    auto other = cfg;
    other.seed = 2;
    CHECK(sample_channel(other, 42).phi != a.phi);
}

TEST_CASE("effective channel equals the direct product", "[channel]")
{
    const auto cfg = config(3, 4, 16, 4);
    for (std::uint64_t t = 0; t < 20; ++t)
    {
        const auto ch = sample_channel(cfg, t);
        const auto tr = train(ch, cfg);
        for (int j = 0; j < cfg.L; ++j)
            for (int l = 0; l < cfg.L; ++l)
            {
                const auto E = effective_channel(ch, tr, j, l);
                for (int k = 0; k < cfg.K; ++k)
                {
                    const Eigen::VectorXcd direct = ch.H(j, l, k) * tr.w[tr.user(l, k)];
                    CHECK((E.col(k) - direct).norm() < 1e-12);
                    const double expected = std::sqrt(ch.beta[ch.index(j, l, k)]) * std::abs(tr.gain(j, l, k)) *
                                            std::sqrt(double(cfg.N));
                    CHECK(E.col(k).norm() == Catch::Approx(expected).epsilon(1e-12));
                }
            }
    }
}

TEST_CASE("effective channel with aligned and orthogonal beamformers", "[channel]")
{
    const auto cfg = config(1, 2, 8, 4);
    const auto ch = sample_channel(cfg, 3);
    auto tr = train(ch, cfg);

    // perfect alignment for user 0, exact null for user 1
    tr.w[0] = ch.h_U[0] / 2.0;
    tr.c[0] = beamforming_gain(ch.h_U[0], tr.w[0]);
    Eigen::VectorXcd null = Eigen::VectorXcd::Zero(4);
    null[0] = 0.5;
    null[1] = -0.5 * ch.h_U[1][1] / ch.h_U[1][0];
    tr.w[1] = null;
    tr.c[1] = beamforming_gain(ch.h_U[1], tr.w[1]);

    const auto E = effective_channel(ch, tr, 0, 0);
    CHECK((E.col(0) - 2.0 * ch.h_B[0]).norm() < 1e-12);
    CHECK(E.col(1).norm() < 1e-12);
}

TEST_CASE("effective channel rejects mismatched inputs", "[channel]")
{
    const auto cfg = config(2, 2, 8, 2);
    const auto ch = sample_channel(cfg, 0);
    const auto tr = train(ch, cfg);
    CHECK_THROWS_AS(effective_channel(ch, tr, 2, 0), std::invalid_argument);
    const auto other = sample_channel(config(2, 3, 8, 2), 0);
    CHECK_THROWS_AS(effective_channel(other, tr, 0, 0), std::invalid_argument);
}

TEST_CASE("independent BS responses become orthogonal", "[channel][mc]")
{
    const int draws = 10000;
    double prev = INFINITY;
    for (int N : {16, 128, 1024})
    {
        auto rng = substream(17, std::uint64_t(N), Stream::channel);
        double s = 0.0, s2 = 0.0;
        for (int t = 0; t < draws; ++t)
        {
            const auto a = steering_vector(uniform(rng, 0.0, M_PI), N);
            const auto b = steering_vector(uniform(rng, 0.0, M_PI), N);
            const double v = a.dot(b).real() / N;
            s += v;
            s2 += v * v;
        }
        const double mean = s / draws;
        const double se = std::sqrt((s2 / draws - mean * mean) / draws);
        INFO("N " << N);
        CHECK(std::abs(mean - exact_inner_mean(N) / N) < 3.0 * se);
        CHECK(std::abs(mean) < prev);
        prev = std::abs(mean);
    }
    CHECK(prev < 0.01);
}

TEST_CASE("realization CSV has one row per link", "[channel]")
{
    const auto cfg = config(2, 3, 8, 2);
    const auto ch = sample_channel(cfg, 0);
    const auto tr = train(ch, cfg);
    std::ostringstream os;
    write_realization_csv(os, ch, tr);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "j,l,k,phi,theta,beta,phi_hat,abs_c");
    int rows = 0;
    while (std::getline(is, line))
        ++rows;
    CHECK(rows == 2 * 2 * 3);
}
