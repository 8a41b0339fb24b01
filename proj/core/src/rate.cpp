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

#include "mmwq/rate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mmwq
{
    namespace
    {
        // Columns beta_jli^(1/2) c_jli h_B,jli for all (l,i), ordered l*K + i
        Eigen::MatrixXcd stacked_channels(const ChannelRealization &ch, const TrainingResult &tr, int j)
        {
            Eigen::MatrixXcd V(ch.N, ch.L * ch.K);
            for (int l = 0; l < ch.L; ++l)
                for (int i = 0; i < ch.K; ++i)
                {
                    const auto idx = ch.index(j, l, i);
                    V.col(l * ch.K + i) = std::sqrt(ch.beta[idx]) * tr.c[idx] * ch.h_B[idx];
                }
            return V;
        }

        // Mean channel estimates a_k = sum_l v_lk, as columns
        Eigen::MatrixXcd mean_estimates(const Eigen::MatrixXcd &V, int L, int K)
        {
            Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(V.rows(), K);
            for (int l = 0; l < L; ++l)
                A += V.middleCols(l * K, K);
            return A;
        }

        std::vector<PowerTerms> all_power_terms(const ChannelRealization &ch, const TrainingResult &tr,
                                                const EstimationResult &est, const SystemConfig &cfg, int j)
        {
            const double rho = cfg.rho(), g2 = (1.0 - rho) * (1.0 - rho);
            const double N = ch.N;
            const double mu = est.mu.at(std::size_t(j));
            const double sq2 = quant_noise_power_data(cfg, est.abs_c2, est.betas, j);

            const Eigen::MatrixXcd V = stacked_channels(ch, tr, j);
            const Eigen::MatrixXcd A = mean_estimates(V, ch.L, ch.K);
            const Eigen::MatrixXcd proj = V.adjoint() * A; // (l,i) x k entries v_li^H a_k
            const double P = V.squaredNorm() / N;          // sum beta |c|^2

            std::vector<PowerTerms> out(std::size_t(ch.K));
            for (int k = 0; k < ch.K; ++k)
            {
                auto &t = out[std::size_t(k)];
                const double na = A.col(k).squaredNorm();
                t.I_n = g2 * cfg.sigma_n2 * (N * mu + na);
                t.I_q = sq2 * (N * mu + na);
                t.S_r = g2 * cfg.p_t * (mu * N * P + proj.col(k).squaredNorm());
                const auto own = ch.index(j, j, k);
                const double s = ch.beta[own] * std::norm(tr.c[own]) * N;
                t.S = g2 * cfg.p_t * s * s;
                t.S_coh = g2 * cfg.p_t * std::norm(proj(j * ch.K + k, k));
            }
            return out;
        }

        TrialResult semi_trial(const ChannelRealization &ch, const TrainingResult &tr, const SystemConfig &cfg,
                               const RateOptions &opt)
        {
            const auto est = estimation_statistics(ch, tr, cfg);
            const auto terms = all_power_terms(ch, tr, est, cfg, opt.cell);
            TrialResult r;
            for (const auto &t : terms)
            {
                double S, I;
                if (opt.split == SignalSplit::paper)
                {
                    S = t.S;
                    I = t.total() - t.S;
                    if (!(I > 0.0))
                        throw std::domain_error("interference power is not positive for this realization");
                }
                else
                {
                    S = t.S_coh;
                    I = t.total() - t.S_coh;
                }
                r.S.push_back(S);
                r.I.push_back(I);
                r.gamma.push_back(siqnr(S, I));
            }
            return r;
        }

        TrialResult symbol_trial(const ChannelRealization &ch, const TrainingResult &tr, const SystemConfig &cfg,
                                 std::uint64_t trial, const RateOptions &opt)
        {
            if (!cfg.adc_bits)
                throw std::invalid_argument("symbol-level mode needs adc_bits (a real quantizer)");
            const int j = opt.cell, K = ch.K, L = ch.L;
            const Eigen::Index N = ch.N;
            const double rho = cfg.rho(), g = 1.0 - rho;
            const auto &cb = lloyd_max_codebook(*cfg.adc_bits);
            const int P = std::max(2, opt.pilot_draws), D = std::max(1, opt.data_draws);

            const Eigen::MatrixXcd V = stacked_channels(ch, tr, j);
            const double power = V.squaredNorm() / double(N);
            const double sd_data = std::sqrt((cfg.sigma_n2 + cfg.p_t * power) / 2.0);
            const double sqrt_pt = std::sqrt(cfg.p_t);

            const Eigen::MatrixXcd Psi = build_pilot_matrix(cfg.pilot_length(), K);
            std::vector<Eigen::MatrixXcd> Hj(static_cast<std::size_t>(L));
            for (int l = 0; l < L; ++l)
                Hj[std::size_t(l)] = V.middleCols(l * K, K);

            PilotOptions popt;
            popt.path = QuantPath::real;
            auto prng = substream(cfg.seed, trial, Stream::pilots);
            auto drng = substream(cfg.seed, trial, Stream::symbols);

            std::vector<std::complex<double>> alpha_sum(std::size_t(K), 0.0);
            std::vector<double> alpha_sq(std::size_t(K), 0.0), y2_sum(std::size_t(K), 0.0);
            std::vector<std::complex<double>> alpha_p(static_cast<std::size_t>(K));
            Eigen::VectorXcd x(L * K), r(N), q(N);

            for (int p = 0; p < P; ++p)
            {
                const auto obs = receive_pilots(Hj, Psi, cfg, popt, prng);
                const Eigen::MatrixXcd Hh = obs.Y_qp * Psi.conjugate() / (g * std::sqrt(cfg.p_p));
                const Eigen::MatrixXcd proj = V.adjoint() * Hh; // v_li^H h_k

                std::vector<double> corr_y2(std::size_t(K), 0.0);
                std::vector<std::complex<double>> corr_a(std::size_t(K), 0.0);
                for (int d = 0; d < D; ++d)
                {
                    for (Eigen::Index u = 0; u < x.size(); ++u)
                        x[u] = complex_normal(drng, 1.0);
                    r.noalias() = sqrt_pt * (V * x);
                    for (Eigen::Index n = 0; n < N; ++n)
                        r[n] += complex_normal(drng, cfg.sigma_n2);
                    for (Eigen::Index n = 0; n < N; ++n)
                        q[n] = {quantize_real(r[n].real(), cb, sd_data), quantize_real(r[n].imag(), cb, sd_data)};
                    const Eigen::VectorXcd y = Hh.adjoint() * q;
                    const Eigen::VectorXcd z = g * (Hh.adjoint() * r);
                    for (int k = 0; k < K; ++k)
                    {
                        const auto sk = std::size_t(k);
                        corr_y2[sk] += std::norm(y[k]) - std::norm(z[k]);
                        corr_a[sk] += (y[k] - z[k]) * std::conj(x[j * K + k]);
                    }
                }
                for (int k = 0; k < K; ++k)
                {
                    const auto sk = std::size_t(k);
                    // exact moments of the linear reference z = (1-rho) h^H r
                    const double ez2 = g * g * (cfg.p_t * proj.col(k).squaredNorm() +
                                                cfg.sigma_n2 * Hh.col(k).squaredNorm());
                    const std::complex<double> eza = g * sqrt_pt * std::conj(proj(j * K + k, k));
                    alpha_p[sk] = eza + corr_a[sk] / double(D);
                    alpha_sum[sk] += alpha_p[sk];
                    alpha_sq[sk] += std::norm(alpha_p[sk]);
                    y2_sum[sk] += ez2 + corr_y2[sk] / double(D);
                }
            }

            TrialResult res;
            for (int k = 0; k < K; ++k)
            {
                const auto sk = std::size_t(k);
                const std::complex<double> am = alpha_sum[sk] / double(P);
                const double var = (alpha_sq[sk] / double(P) - std::norm(am)) * double(P) / double(P - 1);
                const double S = std::max(0.0, std::norm(am) - var / double(P));
                const double Ey2 = y2_sum[sk] / double(P);
                const double I = Ey2 - S;
                res.S.push_back(S);
                res.I.push_back(I);
                res.gamma.push_back(siqnr(S, I));
            }
            return res;
        }
    } // namespace

    RateMode parse_rate_mode(const std::string &name)
    {
        if (name == "semi" || name == "semi_analytic")
            return RateMode::semi_analytic;
        if (name == "symbol" || name == "symbol_level")
            return RateMode::symbol_level;
        throw std::invalid_argument("unknown rate mode '" + name + "'");
    }

    std::string to_string(RateMode mode)
    {
        return mode == RateMode::semi_analytic ? "semi_analytic" : "symbol_level";
    }

    Eigen::VectorXcd mrc_detect(const Eigen::MatrixXcd &H_hat, const Eigen::VectorXcd &received)
    {
        if (H_hat.rows() != received.size())
            throw std::invalid_argument("mrc_detect: dimension mismatch");
        return H_hat.adjoint() * received;
    }

    PowerTerms power_terms(const ChannelRealization &ch, const TrainingResult &tr, const EstimationResult &est,
                           const SystemConfig &cfg, int j, int k)
    {
        if (j < 0 || j >= ch.L || k < 0 || k >= ch.K)
            throw std::invalid_argument("power_terms: index out of range");
        return all_power_terms(ch, tr, est, cfg, j)[std::size_t(k)];
    }

    double signal_power(const ChannelRealization &ch, const TrainingResult &tr, const EstimationResult &est,
                        const SystemConfig &cfg, int j, int k)
    {
        return power_terms(ch, tr, est, cfg, j, k).S;
    }

    double interference_power(const ChannelRealization &ch, const TrainingResult &tr, const EstimationResult &est,
                              const SystemConfig &cfg, int j, int k)
    {
        const auto t = power_terms(ch, tr, est, cfg, j, k);
        const double I = t.total() - t.S;
        if (!(I > 0.0))
            throw std::domain_error("interference power is not positive for this realization");
        return I;
    }

    double siqnr(double S, double I)
    {
        if (!(I > 0.0))
            throw std::domain_error("siqnr: interference power must be positive");
        return S / I;
    }

    int worker_count(int requested)
    {
        if (requested > 0)
            return requested;
        if (const char *env = std::getenv("SIMKIT_THREADS"))
        {
            const int n = std::atoi(env);
            if (n > 0)
                return n;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? int(hw) : 1;
    }

    TrialResult run_trial(const SystemConfig &cfg, std::uint64_t trial, const RateOptions &opt)
    {
        if (opt.cell < 0 || opt.cell >= cfg.L)
            throw std::invalid_argument("ergodic_rate: tagged cell out of range");
        auto ch_rng = substream(cfg.seed, trial, Stream::channel);
        const auto ch = sample_channel(cfg, ch_rng);
        auto tr_rng = substream(cfg.seed, trial, Stream::training);
        const auto tr = train_beams(ch, cfg, opt.training, tr_rng);
        if (opt.mode == RateMode::semi_analytic)
            return semi_trial(ch, tr, cfg, opt);
        return symbol_trial(ch, tr, cfg, trial, opt);
    }

    RateReport ergodic_rate(const SystemConfig &cfg_in, int trials, const RateOptions &opt)
    {
        if (trials < 10)
            throw std::invalid_argument("ergodic_rate: at least 10 trials required");
        const SystemConfig cfg = validated(cfg_in);

        std::vector<TrialResult> results(static_cast<std::size_t>(trials));
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex fail_mtx;
        auto work = [&] {
            for (;;)
            {
                const int t = next.fetch_add(1);
                if (t >= trials)
                    return;
                try
                {
                    results[std::size_t(t)] = run_trial(cfg, std::uint64_t(t), opt);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(fail_mtx);
                    if (!failure)
                        failure = std::current_exception();
                    next = trials;
                    return;
                }
            }
        };
        const int nw = std::min(worker_count(opt.threads), trials);
        if (nw <= 1)
            work();
        else
        {
            std::vector<std::thread> pool;
            for (int w = 0; w < nw; ++w)
                pool.emplace_back(work);
            for (auto &th : pool)
                th.join();
        }
        if (failure)
            std::rethrow_exception(failure);

        RateReport rep;
        rep.trials = trials;
        rep.mode = opt.mode;
        const double lb = std::log(cfg.rate_log_base);
        double sum = 0.0, sum2 = 0.0;
        for (const auto &r : results)
        {
            double tr_sum = 0.0;
            for (std::size_t k = 0; k < r.gamma.size(); ++k)
            {
                rep.gamma_samples.push_back(r.gamma[k]);
                rep.S.push_back(r.S[k]);
                rep.I.push_back(r.I[k]);
                tr_sum += std::log1p(r.gamma[k]) / lb;
            }
            const double tr_rate = tr_sum / double(r.gamma.size());
            rep.trial_rates.push_back(tr_rate);
            sum += tr_rate;
            sum2 += tr_rate * tr_rate;
        }
        const double n = double(trials);
        rep.rate_mc = sum / n;
        const double var = std::max(0.0, (sum2 - sum * sum / n) / (n - 1.0));
        rep.ci95 = 1.96 * std::sqrt(var / n);
        return rep;
    }

} // namespace mmwq
