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

#include "mmwq/estimation.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace mmwq
{
    Eigen::MatrixXcd build_pilot_matrix(int tau, int K)
    {
        if (K < 1 || tau < K)
            throw std::invalid_argument("build_pilot_matrix: requires 1 <= K <= tau");
        Eigen::MatrixXcd Psi(tau, K);
        const double s = 1.0 / std::sqrt(double(tau));
        for (int m = 0; m < tau; ++m)
            for (int n = 0; n < K; ++n)
            {
                // reduce m*n modulo tau so the phase stays exact for large tau
                const long long mn = (long long)m * n % tau;
                Psi(m, n) = std::polar(s, -2.0 * std::numbers::pi * double(mn) / double(tau));
            }
        return Psi;
    }

    std::vector<std::vector<Eigen::MatrixXcd>> effective_channels(const ChannelRealization &ch, const TrainingResult &tr)
    {
        std::vector<std::vector<Eigen::MatrixXcd>> H(std::size_t(ch.L));
        for (int j = 0; j < ch.L; ++j)
        {
            H[std::size_t(j)].resize(std::size_t(ch.L));
            for (int l = 0; l < ch.L; ++l)
                H[std::size_t(j)][std::size_t(l)] = effective_channel(ch, tr, j, l);
        }
        return H;
    }

    PilotObservation receive_pilots(const std::vector<Eigen::MatrixXcd> &H_bar_j, const Eigen::MatrixXcd &Psi,
                                    const SystemConfig &cfg, const PilotOptions &opt, Rng &rng)
    {
        if (H_bar_j.empty())
            throw std::invalid_argument("receive_pilots: no effective channels");
        const Eigen::Index N = H_bar_j.front().rows(), tau = Psi.rows();
        const double rho = cfg.rho();

        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(N, Psi.cols());
        double power = 0.0; // sum_lk beta |c|^2
        for (const auto &H : H_bar_j)
        {
            if (H.rows() != N || H.cols() != Psi.cols())
                throw std::invalid_argument("receive_pilots: dimension mismatch");
            sum += H;
            power += H.squaredNorm() / double(N);
        }

        PilotObservation obs;
        obs.Y_p = std::sqrt(cfg.p_p) * sum * Psi.transpose();
        obs.n_p = Eigen::MatrixXcd::Zero(N, tau);
        if (opt.awgn)
            for (Eigen::Index t = 0; t < tau; ++t)
                for (Eigen::Index n = 0; n < N; ++n)
                    obs.n_p(n, t) = complex_normal(rng, cfg.sigma_n2);
        obs.Y_p += obs.n_p;

        const double rx_var = cfg.sigma_n2 + cfg.p_p / double(tau) * power;
        obs.sigma_pq2 = rho * (1.0 - rho) * rx_var;
        obs.n_qp = Eigen::MatrixXcd::Zero(N, tau);
        if (opt.path == QuantPath::bussgang)
        {
            if (obs.sigma_pq2 > 0.0)
                for (Eigen::Index t = 0; t < tau; ++t)
                    for (Eigen::Index n = 0; n < N; ++n)
                        obs.n_qp(n, t) = complex_normal(rng, obs.sigma_pq2);
            obs.Y_qp = (1.0 - rho) * obs.Y_p + obs.n_qp;
        }
        else
        {
            if (!cfg.adc_bits)
                throw std::invalid_argument("receive_pilots: the real quantizer needs adc_bits");
            const auto &cb = lloyd_max_codebook(*cfg.adc_bits);
            const double sd = std::sqrt(rx_var / 2.0);
            obs.Y_qp.resize(N, tau);
            for (Eigen::Index t = 0; t < tau; ++t)
                for (Eigen::Index n = 0; n < N; ++n)
                {
                    const auto v = obs.Y_p(n, t);
                    obs.Y_qp(n, t) = {quantize_real(v.real(), cb, sd), quantize_real(v.imag(), cb, sd)};
                }
        }
        return obs;
    }

    std::vector<PilotObservation> receive_pilots(const std::vector<std::vector<Eigen::MatrixXcd>> &H_bar,
                                                 const Eigen::MatrixXcd &Psi, const SystemConfig &cfg,
                                                 const PilotOptions &opt, Rng &rng)
    {
        std::vector<PilotObservation> out;
        out.reserve(H_bar.size());
        for (const auto &Hj : H_bar)
            out.push_back(receive_pilots(Hj, Psi, cfg, opt, rng));
        return out;
    }

    Eigen::VectorXd mmse_gain_matrix(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas,
                                     double mu_j, int j)
    {
        if (!(mu_j >= 0.0))
            throw std::invalid_argument("mmse_gain_matrix: mu must be non-negative");
        if (j < 0 || j >= cfg.L)
            throw std::invalid_argument("mmse_gain_matrix: cell index out of range");
        const std::size_t L = std::size_t(cfg.L), K = std::size_t(cfg.K);
        if (abs_c2.size() < L * L * K || betas.size() < L * L * K)
            throw std::invalid_argument("mmse_gain_matrix: tables do not cover all (l,k)");
        Eigen::VectorXd G(cfg.K);
        for (std::size_t k = 0; k < K; ++k)
        {
            double den = mu_j;
            for (std::size_t l = 0; l < L; ++l)
            {
                const std::size_t i = (std::size_t(j) * L + l) * K + k;
                den += betas[i] * abs_c2[i];
            }
            if (!(den > 0.0))
                throw std::domain_error("mmse_gain_matrix: singular matrix (all gains zero and mu = 0)");
            const std::size_t own = (std::size_t(j) * L + std::size_t(j)) * K + k;
            G[Eigen::Index(k)] = betas[own] * abs_c2[own] / den;
        }
        return G;
    }

    double noise_equivalent_mu(const SystemConfig &cfg, double sigma_pq2)
    {
        if (!(cfg.p_p > 0.0))
            throw std::invalid_argument("noise_equivalent_mu: P_p must be positive");
        const double g = 1.0 - cfg.rho();
        return cfg.sigma_n2 / cfg.p_p + sigma_pq2 / (g * g * cfg.p_p);
    }

    ChannelEstimate estimate_channel(const Eigen::MatrixXcd &Y_qp, const Eigen::MatrixXcd &Psi, const Eigen::VectorXd &G,
                                     const SystemConfig &cfg, const Eigen::MatrixXcd &H_bar_jj)
    {
        if (Y_qp.cols() != Psi.rows() || Psi.cols() != G.size() || H_bar_jj.rows() != Y_qp.rows() ||
            H_bar_jj.cols() != G.size())
            throw std::invalid_argument("estimate_channel: dimension mismatch");
        for (Eigen::Index k = 0; k < G.size(); ++k)
            if (!(G[k] != 0.0))
                throw std::domain_error("estimate_channel: singular gain matrix");
        const double scale = 1.0 / ((1.0 - cfg.rho()) * std::sqrt(cfg.p_p));
        const Eigen::MatrixXcd despread = scale * (Y_qp * Psi.conjugate());
        ChannelEstimate est;
        est.H_hat = despread * G.asDiagonal();
        est.E = despread - H_bar_jj;
        return est;
    }

    void gain_tables(const ChannelRealization &ch, const TrainingResult &tr, GainTable &abs_c2, GainTable &betas)
    {
        abs_c2.resize(tr.c.size());
        for (std::size_t i = 0; i < tr.c.size(); ++i)
            abs_c2[i] = std::norm(tr.c[i]);
        betas = ch.beta;
    }

    EstimationResult estimation_statistics(const ChannelRealization &ch, const TrainingResult &tr,
                                           const SystemConfig &cfg)
    {
        EstimationResult r;
        r.Psi = build_pilot_matrix(cfg.pilot_length(), cfg.K);
        gain_tables(ch, tr, r.abs_c2, r.betas);
        r.G.resize(std::size_t(cfg.L));
        r.mu.resize(std::size_t(cfg.L));
        for (int j = 0; j < cfg.L; ++j)
        {
            const double spq = quant_noise_power_pilot(cfg, r.abs_c2, r.betas, j);
            r.mu[std::size_t(j)] = noise_equivalent_mu(cfg, spq);
            r.G[std::size_t(j)] = mmse_gain_matrix(cfg, r.abs_c2, r.betas, r.mu[std::size_t(j)], j);
        }
        return r;
    }

    EstimationResult run_estimation(const ChannelRealization &ch, const TrainingResult &tr, const SystemConfig &cfg,
                                    const PilotOptions &opt, Rng &rng)
    {
        EstimationResult r = estimation_statistics(ch, tr, cfg);
        const auto H_bar = effective_channels(ch, tr);
        r.pilots = receive_pilots(H_bar, r.Psi, cfg, opt, rng);
        r.H_hat.resize(std::size_t(cfg.L));
        r.E.resize(std::size_t(cfg.L));
        for (int j = 0; j < cfg.L; ++j)
        {
            const auto sj = std::size_t(j);
            auto est = estimate_channel(r.pilots[sj].Y_qp, r.Psi, r.G[sj], cfg, H_bar[sj][sj]);
            r.H_hat[sj] = std::move(est.H_hat);
            r.E[sj] = std::move(est.E);
        }
        return r;
    }

} // namespace mmwq
