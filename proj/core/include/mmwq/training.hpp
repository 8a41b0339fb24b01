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

#ifndef MMWQ_TRAINING_HPP
#define MMWQ_TRAINING_HPP

#include "mmwq/channel.hpp"

#include <complex>
#include <vector>

namespace mmwq
{
    struct TrainingNoise
    {
        bool awgn = false;
        double sigma2 = 0.0; // noise power relative to the unit-power tone
    };

    struct TrainingResult
    {
        int L = 0, K = 0, M = 0;
        std::vector<double> codebook;           // candidate phases
        std::vector<double> phi_hat;            // index l*K + k
        std::vector<Eigen::VectorXcd> w;        // index l*K + k
        std::vector<std::complex<double>> c;    // index (j*L + l)*K + k, c_jlk = h_U,jlk^H w_lk

        std::size_t user(int l, int k) const { return std::size_t(l) * std::size_t(K) + std::size_t(k); }
        std::size_t index(int j, int l, int k) const
        {
            return (std::size_t(j) * std::size_t(L) + std::size_t(l)) * std::size_t(K) + std::size_t(k);
        }
        const std::complex<double> &gain(int j, int l, int k) const { return c[index(j, l, k)]; }
    };

    // Phases zeta, 3 zeta, ..., (2^(B+1)-1) zeta with zeta = pi / 2^(B+1)
    std::vector<double> build_codebook(int B);

    // Codebook phase maximizing the received tone power; ties go to the smallest index
    double estimate_aoa(const ChannelRealization &ch, const SystemConfig &cfg, int l, int k,
                        const TrainingNoise &noise, Rng &rng);

    // Overload with a precomputed codebook
    double estimate_aoa(const ChannelRealization &ch, const SystemConfig &cfg, const std::vector<double> &codebook,
                        int l, int k, const TrainingNoise &noise, Rng &rng);

    // w = steering_vector(phi_hat, M, ratio) / sqrt(M)
    Eigen::VectorXcd beamformer_from_angle(double phi_hat, int M, double spacing_ratio = 0.5);

    // c = h_U^H w
    std::complex<double> beamforming_gain(const Eigen::VectorXcd &h_U, const Eigen::VectorXcd &w);

    // Estimates AoAs for every user (cell by cell), builds w and all gains c_jlk
    TrainingResult train_beams(const ChannelRealization &ch, const SystemConfig &cfg, const TrainingNoise &noise,
                               Rng &rng);

} // namespace mmwq

#endif
