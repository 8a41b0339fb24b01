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

#ifndef MMWQ_ESTIMATION_HPP
#define MMWQ_ESTIMATION_HPP

#include "mmwq/channel.hpp"
#include "mmwq/quantizer.hpp"
#include "mmwq/training.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mmwq
{
    enum class QuantPath
    {
        bussgang, // (1 - rho) Y_p plus Gaussian quantization noise
        real      // Lloyd-Max quantizer on every entry
    };

    struct PilotOptions
    {
        QuantPath path = QuantPath::bussgang;
        bool awgn = true; // false drops the thermal noise sample, not sigma_n^2 in the statistics
    };

    // Pilot reception at one BS
    struct PilotObservation
    {
        Eigen::MatrixXcd Y_p;   // N x tau before the ADCs
        Eigen::MatrixXcd Y_qp;  // N x tau after the ADCs
        Eigen::MatrixXcd n_p;   // thermal noise
        Eigen::MatrixXcd n_qp;  // Bussgang quantization noise (zero on the real path)
        double sigma_pq2 = 0.0; // model pilot quantization noise power
    };

    struct EstimationResult
    {
        Eigen::MatrixXcd Psi;                         // tau x K
        std::vector<PilotObservation> pilots;         // per cell j
        std::vector<Eigen::VectorXd> G;               // diagonal of the MMSE gain matrix, per cell
        std::vector<double> mu;                       // equivalent estimation noise power, per cell
        std::vector<Eigen::MatrixXcd> H_hat;          // N x K, per cell
        std::vector<Eigen::MatrixXcd> E;              // N x K error vectors e_jk as columns
        GainTable abs_c2;                             // |c_jlk|^2
        GainTable betas;                              // beta_jlk
    };

    // First K columns of the unitary tau-point DFT
    Eigen::MatrixXcd build_pilot_matrix(int tau, int K);

    // Effective channels H_bar[j][l] for all BS / cell pairs
    std::vector<std::vector<Eigen::MatrixXcd>> effective_channels(const ChannelRealization &ch, const TrainingResult &tr);

    // Pilot observation at BS j. Per-antenna statistics follow from the effective channels.
    PilotObservation receive_pilots(const std::vector<Eigen::MatrixXcd> &H_bar_j, const Eigen::MatrixXcd &Psi,
                                    const SystemConfig &cfg, const PilotOptions &opt, Rng &rng);

    // All cells
    std::vector<PilotObservation> receive_pilots(const std::vector<std::vector<Eigen::MatrixXcd>> &H_bar,
                                                 const Eigen::MatrixXcd &Psi, const SystemConfig &cfg,
                                                 const PilotOptions &opt, Rng &rng);

    // Diagonal of B_jj C_jj^H C_jj [sum_l B_jl C_jl^H C_jl + mu I]^(-1). Throws std::domain_error if singular.
    Eigen::VectorXd mmse_gain_matrix(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas,
                                     double mu_j, int j);

    // sigma_n^2 / P_p + sigma_pq^2 / ((1 - rho)^2 P_p)
    double noise_equivalent_mu(const SystemConfig &cfg, double sigma_pq2);

    struct ChannelEstimate
    {
        Eigen::MatrixXcd H_hat; // N x K
        Eigen::MatrixXcd E;     // H_hat G^(-1) - H_bar_jj
    };

    // H_hat = Y_qp Psi^* G / ((1 - rho) sqrt(P_p)). Throws std::domain_error if G has a zero entry.
    ChannelEstimate estimate_channel(const Eigen::MatrixXcd &Y_qp, const Eigen::MatrixXcd &Psi, const Eigen::VectorXd &G,
                                     const SystemConfig &cfg, const Eigen::MatrixXcd &H_bar_jj);

    // |c|^2 and beta tables from a training outcome
    void gain_tables(const ChannelRealization &ch, const TrainingResult &tr, GainTable &abs_c2, GainTable &betas);

    // Statistics only (G, mu, sigma_pq^2), no sampled pilots
    EstimationResult estimation_statistics(const ChannelRealization &ch, const TrainingResult &tr,
                                           const SystemConfig &cfg);

    // Full pilot phase for every cell
    EstimationResult run_estimation(const ChannelRealization &ch, const TrainingResult &tr, const SystemConfig &cfg,
                                    const PilotOptions &opt, Rng &rng);

} // namespace mmwq

#endif
