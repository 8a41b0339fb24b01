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

#ifndef MMWQ_RATE_HPP
#define MMWQ_RATE_HPP

#include "mmwq/channel.hpp"
#include "mmwq/estimation.hpp"
#include "mmwq/training.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mmwq
{
    enum class RateMode
    {
        semi_analytic, // expectations over symbols and noise in closed form
        symbol_level   // sampled pilots, symbols, noise and the real quantizer
    };

    // How the received power is split into useful signal and the rest
    enum class SignalSplit
    {
        coherent, // signal is the part coherent with the mean channel estimate
        paper     // signal is (1-rho)^2 P_t beta^2 |c|^4 N^2
    };

    RateMode parse_rate_mode(const std::string &name); // "semi" or "symbol"
    std::string to_string(RateMode mode);

    // y = H_hat^H r
    Eigen::VectorXcd mrc_detect(const Eigen::MatrixXcd &H_hat, const Eigen::VectorXcd &received);

    // Conditional second moments of the MRC output for user k at BS j
    struct PowerTerms
    {
        double I_n = 0.0;   // amplified thermal noise
        double I_q = 0.0;   // quantization noise
        double S_r = 0.0;   // all data terms, including the desired one
        double S = 0.0;     // (1-rho)^2 P_t beta^2 |c|^4 N^2
        double S_coh = 0.0; // (1-rho)^2 P_t |a^H v_jk|^2 with a the mean estimate
        double total() const { return I_n + I_q + S_r; }
    };

    PowerTerms power_terms(const ChannelRealization &ch, const TrainingResult &tr, const EstimationResult &est,
                           const SystemConfig &cfg, int j, int k);

    double signal_power(const ChannelRealization &ch, const TrainingResult &tr, const EstimationResult &est,
                        const SystemConfig &cfg, int j, int k);

    // I_n + I_q + S_r - S. Throws std::domain_error when not positive.
    double interference_power(const ChannelRealization &ch, const TrainingResult &tr, const EstimationResult &est,
                              const SystemConfig &cfg, int j, int k);

    // S / I. Throws std::domain_error for I <= 0.
    double siqnr(double S, double I);

    struct RateOptions
    {
        RateMode mode = RateMode::semi_analytic;
        SignalSplit split = SignalSplit::coherent;
        TrainingNoise training;
        int pilot_draws = 16; // symbol level: pilot realizations per trial
        int data_draws = 64;  // symbol level: data realizations per pilot realization
        int threads = 0;      // 0 reads SIMKIT_THREADS, then the hardware count
        int cell = 0;         // tagged BS
    };

    struct RateReport
    {
        std::vector<double> gamma_samples; // trial-major, K per trial
        std::vector<double> S, I;          // per sample, for the chosen split
        std::vector<double> trial_rates;   // mean over users per trial
        double rate_mc = 0.0;
        double ci95 = 0.0;
        int trials = 0;
        RateMode mode = RateMode::semi_analytic;
    };

    // Monte-Carlo ergodic rate for the users of cell opt.cell. Deterministic given cfg.seed.
    RateReport ergodic_rate(const SystemConfig &cfg, int trials, const RateOptions &opt = {});

    // SINR values of one trial (all K users of the tagged cell)
    struct TrialResult
    {
        std::vector<double> gamma, S, I;
    };
    TrialResult run_trial(const SystemConfig &cfg, std::uint64_t trial, const RateOptions &opt);

    // Worker count from SIMKIT_THREADS or the hardware
    int worker_count(int requested = 0);

} // namespace mmwq

#endif
