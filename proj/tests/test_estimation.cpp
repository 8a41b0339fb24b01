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
#include "mmwq/estimation.hpp"
#include "mmwq/training.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <stdexcept>

using namespace mmwq;
using cd = std::complex<double>;

namespace
{
    SystemConfig config(int L, int K, int N, double rho)
    {
        SystemConfig c;
        c.L = L;
        c.K = K;
        c.N = N;
        c.M = 2;
        c.rho_ad = rho;
        c.p_p = 10.0;
        return validated(c);
    }

    struct Scenario
    {
        SystemConfig cfg;
        ChannelRealization ch;
        TrainingResult tr;
        std::vector<std::vector<Eigen::MatrixXcd>> H;
    };

    Scenario scenario(const SystemConfig &cfg, std::uint64_t trial = 0)
    {
        Scenario s{cfg, sample_channel(cfg, trial), {}, {}};
        auto rng = substream(cfg.seed, trial, Stream::training);
        s.tr = train_beams(s.ch, cfg, TrainingNoise{}, rng);
        s.H = effective_channels(s.ch, s.tr);
        return s;
    }

    const PilotOptions noiseless{QuantPath::bussgang, false};
} // namespace

TEST_CASE("pilot matrix examples", "[estimation]")
{
    const auto p1 = build_pilot_matrix(1, 1);
    REQUIRE(p1.rows() == 1);
    CHECK(std::abs(p1(0, 0) - cd(1.0, 0.0)) < 1e-15);

    const auto p2 = build_pilot_matrix(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(p2(0, 0) - s) < 1e-15);
    CHECK(std::abs(p2(0, 1) - s) < 1e-15);
    CHECK(std::abs(p2(1, 0) - s) < 1e-15);
    CHECK(std::abs(p2(1, 1) + s) < 1e-15);

    for (auto [tau, K] : {std::pair{8, 4}, std::pair{16, 16}, std::pair{37, 5}, std::pair{1024, 64}})
    {
        const auto P = build_pilot_matrix(tau, K);
        CHECK((P.adjoint() * P - Eigen::MatrixXcd::Identity(K, K)).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK_THROWS_AS(build_pilot_matrix(3, 4), std::invalid_argument);
}

TEST_CASE("distortion-free noiseless pilots are the clean superposition", "[estimation]")
{
    const auto s = scenario(config(3, 2, 16, 0.0));
    const auto Psi = build_pilot_matrix(2, 2);
    auto rng = substream(1, 0, Stream::pilots);
    for (int j = 0; j < 3; ++j)
    {
        const auto obs = receive_pilots(s.H[j], Psi, s.cfg, noiseless, rng);
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(16, 2);
        for (int l = 0; l < 3; ++l)
            expected += std::sqrt(10.0) * s.H[j][l] * Psi.transpose();
        CHECK((obs.Y_qp - expected).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(obs.sigma_pq2 == 0.0);
    }
}

TEST_CASE("pilot power per symbol is P_p / tau", "[estimation]")
{
    auto cfg = config(1, 3, 32, 0.0);
    cfg.tau = 8;
    const auto s = scenario(cfg, 4);
    const auto Psi = build_pilot_matrix(8, 3);
    auto rng = substream(1, 0, Stream::pilots);
    const auto obs = receive_pilots(s.H[0], Psi, cfg, noiseless, rng);
    double power = 0.0;
    for (const auto &H : s.H[0])
        power += H.squaredNorm() / 32.0;
    CHECK(obs.Y_p.squaredNorm() / (32.0 * 8.0) == Catch::Approx(cfg.p_p / 8.0 * power).epsilon(1e-12));
}

TEST_CASE("Bussgang pilot noise has the modeled power", "[estimation][mc]")
{
    const auto cfg = config(2, 2, 16, distortion_factor(2));
    const auto s = scenario(cfg, 1);
    const auto Psi = build_pilot_matrix(2, 2);
    auto rng = substream(3, 0, Stream::pilots);
    const PilotOptions opt{QuantPath::bussgang, true};
    double acc = 0.0, model = 0.0;
    const int draws = 1000;
    for (int d = 0; d < draws; ++d)
    {
        const auto obs = receive_pilots(s.H[0], Psi, cfg, opt, rng);
        acc += (obs.Y_qp - (1.0 - cfg.rho()) * obs.Y_p).squaredNorm() / (16.0 * 2.0);
        model = obs.sigma_pq2;
    }
    CHECK(acc / draws == Catch::Approx(model).epsilon(0.03));
    GainTable c2, b;
    gain_tables(s.ch, s.tr, c2, b);
    CHECK(model == Catch::Approx(quant_noise_power_pilot(cfg, c2, b, 0)).epsilon(1e-12));
}

TEST_CASE("pilot quantization noise inverts to the received power", "[estimation]")
{
    auto cfg = config(1, 1, 8, 0.2);
    cfg.tau = 3;
    const auto s = scenario(cfg, 2);
    const auto Psi = build_pilot_matrix(3, 1);
    auto rng = substream(1, 0, Stream::pilots);
    const auto obs = receive_pilots(s.H[0], Psi, cfg, noiseless, rng);
    const double per_antenna = obs.Y_p.squaredNorm() / (8.0 * 3.0);
    const double c2 = std::norm(s.tr.c[0]);
    CHECK(per_antenna == Catch::Approx(cfg.p_p * c2 / 3.0).epsilon(1e-12));
    CHECK(obs.sigma_pq2 / (0.2 * 0.8) - cfg.sigma_n2 == Catch::Approx(per_antenna).epsilon(1e-12));
}

TEST_CASE("real quantizer pilot path", "[estimation]")
{
    auto cfg = config(1, 2, 8, 0.0);
    cfg.rho_ad.reset();
    cfg.adc_bits = 1;
    const auto s = scenario(cfg, 2);
    const auto Psi = build_pilot_matrix(2, 2);
    auto rng = substream(1, 0, Stream::pilots);
    const auto obs = receive_pilots(s.H[0], Psi, cfg, PilotOptions{QuantPath::real, true}, rng);
    const double level = std::abs(obs.Y_qp(0, 0).real());
    for (Eigen::Index i = 0; i < obs.Y_qp.size(); ++i)
    {
        CHECK(std::abs(std::abs(obs.Y_qp(i).real()) - level) < 1e-12);
        CHECK(std::abs(std::abs(obs.Y_qp(i).imag()) - level) < 1e-12);
    }
    CHECK(obs.n_qp.cwiseAbs().maxCoeff() == 0.0);

    auto no_bits = config(1, 2, 8, 0.1);
    CHECK_THROWS_AS(receive_pilots(s.H[0], Psi, no_bits, PilotOptions{QuantPath::real, true}, rng),
                    std::invalid_argument);
}

TEST_CASE("MMSE gain matrix examples", "[estimation]")
{
    auto cfg = config(1, 3, 8, 0.0);
    const GainTable c2{2.0, 2.0, 2.0}, b{1.0, 1.0, 1.0};
    auto G = mmse_gain_matrix(cfg, c2, b, 0.0, 0);
    CHECK(G.isApprox(Eigen::VectorXd::Ones(3)));

    G = mmse_gain_matrix(cfg, c2, b, 0.5, 0);
    for (int k = 0; k < 3; ++k)
        CHECK(G[k] == Catch::Approx(2.0 / 2.5));

    G = mmse_gain_matrix(cfg, c2, b, 1e12, 0);
    CHECK(G.maxCoeff() < 1e-11);

    const GainTable zero{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(mmse_gain_matrix(cfg, zero, b, 0.0, 0), std::domain_error);
    CHECK_THROWS_AS(mmse_gain_matrix(cfg, c2, b, -1.0, 0), std::invalid_argument);
}

TEST_CASE("MMSE gains include contamination from other cells", "[estimation]")
{
    const auto cfg = config(2, 1, 8, 0.0);
    // index (j*L + l)*K + k
    const GainTable c2{1.5, 0.5, 0.7, 1.2}, b{1.0, 0.1, 0.1, 1.0};
    const auto G0 = mmse_gain_matrix(cfg, c2, b, 0.3, 0);
    const auto G1 = mmse_gain_matrix(cfg, c2, b, 0.3, 1);
    CHECK(G0[0] == Catch::Approx(1.5 / (1.5 + 0.05 + 0.3)));
    CHECK(G1[0] == Catch::Approx(1.2 / (0.07 + 1.2 + 0.3)));
}

TEST_CASE("estimation gains lie in (0, 1]", "[estimation][property]")
{
    const auto cfg = config(3, 4, 16, 0.1);
    for (std::uint64_t t = 0; t < 30; ++t)
    {
        const auto s = scenario(cfg, t);
        const auto est = estimation_statistics(s.ch, s.tr, cfg);
        for (int j = 0; j < 3; ++j)
        {
            CHECK(est.mu[j] > 0.0);
            CHECK(est.G[j].minCoeff() > 0.0);
            CHECK(est.G[j].maxCoeff() <= 1.0);
        }
    }
}

TEST_CASE("equivalent estimation noise", "[estimation]")
{
    auto cfg = config(1, 1, 8, 0.0);
    CHECK(noise_equivalent_mu(cfg, 0.0) == Catch::Approx(0.1));

    cfg.rho_ad = 0.1175;
    CHECK(noise_equivalent_mu(cfg, 0.5) == Catch::Approx(0.16420).margin(5e-6));

    auto louder = cfg;
    louder.p_p *= 10.0;
    CHECK(noise_equivalent_mu(louder, 0.0) == Catch::Approx(noise_equivalent_mu(cfg, 0.0) / 10.0));
}

TEST_CASE("error-free pilots give the scaled channel", "[estimation]")
{
    const auto cfg = config(1, 3, 16, 0.0);
    const auto s = scenario(cfg, 6);
    auto rng = substream(1, 0, Stream::pilots);
    auto est = estimation_statistics(s.ch, s.tr, cfg);
    const auto obs = receive_pilots(s.H[0], est.Psi, cfg, noiseless, rng);
    const auto ce = estimate_channel(obs.Y_qp, est.Psi, est.G[0], cfg, s.H[0][0]);
    CHECK((ce.H_hat - s.H[0][0] * est.G[0].asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(ce.E.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("noiseless multi-cell error is pure contamination", "[estimation]")
{
    const auto cfg = config(2, 3, 16, 0.0);
    const auto s = scenario(cfg, 7);
    auto rng = substream(1, 0, Stream::pilots);
    const auto r = run_estimation(s.ch, s.tr, cfg, noiseless, rng);
    for (int j = 0; j < 2; ++j)
    {
        const int l = 1 - j;
        for (int k = 0; k < 3; ++k)
        {
            const auto i = s.ch.index(j, l, k);
            const Eigen::VectorXcd expected = std::sqrt(s.ch.beta[i]) * s.tr.c[i] * s.ch.h_B[i];
            CHECK((r.E[j].col(k) - expected).norm() < 1e-12);
            CHECK(r.E[j].col(k).squaredNorm() > 0.0);
        }
    }
}

TEST_CASE("estimate and error satisfy the reconstruction identity", "[estimation][property]")
{
    const auto cfg = config(3, 2, 16, distortion_factor(2));
    const auto s = scenario(cfg, 8);
    auto rng = substream(1, 0, Stream::pilots);
    const auto r = run_estimation(s.ch, s.tr, cfg, PilotOptions{}, rng);
    const double g = 1.0 - cfg.rho();
    for (int j = 0; j < 3; ++j)
    {
        CHECK((r.H_hat[j] - (s.H[j][j] + r.E[j]) * r.G[j].asDiagonal()).cwiseAbs().maxCoeff() < 1e-12);
        const Eigen::MatrixXcd lhs = g * std::sqrt(cfg.p_p) * (s.H[j][j] + r.E[j]) *
                                     (r.Psi.transpose() * r.Psi.conjugate());
        CHECK((lhs - r.pilots[j].Y_qp * r.Psi.conjugate()).cwiseAbs().maxCoeff() < 1e-10);

        // error decomposes into contamination plus scaled noises
        Eigen::MatrixXcd three = Eigen::MatrixXcd::Zero(16, 2);
        for (int l = 0; l < 3; ++l)
            if (l != j)
                three += s.H[j][l];
        three += (g * r.pilots[j].n_p + r.pilots[j].n_qp) * r.Psi.conjugate() / (g * std::sqrt(cfg.p_p));
        CHECK((r.E[j] - three).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("estimate_channel rejects a singular gain matrix", "[estimation]")
{
    const auto cfg = config(1, 2, 4, 0.0);
    const auto Psi = build_pilot_matrix(2, 2);
    const Eigen::MatrixXcd Y = Eigen::MatrixXcd::Ones(4, 2);
    const Eigen::VectorXd G = Eigen::Vector2d(1.0, 0.0);
    CHECK_THROWS_AS(estimate_channel(Y, Psi, G, cfg, Eigen::MatrixXcd::Zero(4, 2)), std::domain_error);
    CHECK_THROWS_AS(estimate_channel(Y, Psi, Eigen::Vector3d::Ones(), cfg, Eigen::MatrixXcd::Zero(4, 2)),
                    std::invalid_argument);
}

TEST_CASE("realized error power matches the noise model", "[estimation][mc]")
{
    const auto cfg = config(2, 2, 32, distortion_factor(2));
    const auto s = scenario(cfg, 9);
    const auto stats = estimation_statistics(s.ch, s.tr, cfg);
    auto rng = substream(5, 0, Stream::pilots);
    const int draws = 1000;
    std::vector<double> acc(2, 0.0);
    for (int d = 0; d < draws; ++d)
    {
        const auto r = run_estimation(s.ch, s.tr, cfg, PilotOptions{}, rng);
        for (int k = 0; k < 2; ++k)
            acc[k] += r.E[0].col(k).squaredNorm() / 32.0;
    }
    for (int k = 0; k < 2; ++k)
    {
        const auto i = s.ch.index(0, 1, k);
        const double expected = stats.mu[0] + s.ch.beta[i] * std::norm(s.tr.c[i]);
        CHECK(acc[k] / draws == Catch::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("estimation noise falls with pilot power and floors under quantization", "[estimation][property]")
{
    auto cfg = config(1, 4, 16, distortion_factor(3));
    const auto s = scenario(cfg, 10);
    double prev = INFINITY;
    std::vector<double> mus;
    for (double pp : {0.1, 1.0, 10.0, 1e3, 1e6, 1e9})
    {
        cfg.p_p = pp;
        const double mu = estimation_statistics(s.ch, s.tr, cfg).mu[0];
        CHECK(mu < prev);
        prev = mu;
        mus.push_back(mu);
    }
    CHECK(mus.back() > 0.0);
    CHECK(mus[4] / mus[5] < 1.001);

    cfg.rho_ad = 0.0;
    cfg.p_p = 1e9;
    CHECK(estimation_statistics(s.ch, s.tr, cfg).mu[0] < 1e-8);
}
