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

#ifndef MMWQ_CHANNEL_HPP
#define MMWQ_CHANNEL_HPP

#include "mmwq/config.hpp"
#include "mmwq/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <ostream>
#include <vector>

namespace mmwq
{
    struct TrainingResult;

    // Uniform linear array response, element n = exp(-j 2 pi n ratio cos(angle))
    Eigen::VectorXcd steering_vector(double angle, int count, double spacing_ratio = 0.5);

    // Rank-one line-of-sight channels from user k in cell l to BS j
    struct ChannelRealization
    {
        int L = 0, K = 0, N = 0, M = 0;
        std::vector<double> phi;             // user-side AoA
        std::vector<double> theta;           // BS-side angle
        std::vector<double> beta;            // large-scale gain
        std::vector<Eigen::VectorXcd> h_U;   // length M
        std::vector<Eigen::VectorXcd> h_B;   // length N

        std::size_t index(int j, int l, int k) const
        {
            return (std::size_t(j) * std::size_t(L) + std::size_t(l)) * std::size_t(K) + std::size_t(k);
        }

        // N x M channel beta^(1/2) h_B h_U^H
        Eigen::MatrixXcd H(int j, int l, int k) const;
    };

    ChannelRealization sample_channel(const SystemConfig &cfg, Rng &rng);

    // Uses the (cfg.seed, trial) channel substream
    ChannelRealization sample_channel(const SystemConfig &cfg, std::uint64_t trial);

    // N x K matrix whose column k is beta_jlk^(1/2) c_jlk h_B,jlk
    Eigen::MatrixXcd effective_channel(const ChannelRealization &ch, const TrainingResult &tr, int j, int l);

    // One row per (j,l,k): angles, beta, |c|
    void write_realization_csv(std::ostream &out, const ChannelRealization &ch, const TrainingResult &tr);

} // namespace mmwq

#endif
