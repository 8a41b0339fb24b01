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

#include "mmwq/training.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmwq
{
    std::vector<double> build_codebook(int B)
    {
        if (B < 0 || B > 24)
            throw std::invalid_argument("build_codebook: B must be in 0..24");
        const std::size_t n = std::size_t(1) << B;
        const double zeta = std::numbers::pi / std::ldexp(1.0, B + 1);
        std::vector<double> psi(n);
        for (std::size_t i = 0; i < n; ++i)
            psi[i] = double(2 * i + 1) * zeta;
        return psi;
    }

    Eigen::VectorXcd beamformer_from_angle(double phi_hat, int M, double spacing_ratio)
    {
        if (M < 1)
            throw std::invalid_argument("beamformer_from_angle: M must be >= 1");
        return steering_vector(phi_hat, M, spacing_ratio) / std::sqrt(double(M));
    }

    std::complex<double> beamforming_gain(const Eigen::VectorXcd &h_U, const Eigen::VectorXcd &w)
    {
        if (h_U.size() != w.size())
            throw std::invalid_argument("beamforming_gain: length mismatch");
        return h_U.dot(w); // Eigen dot conjugates the left operand
    }

    double estimate_aoa(const ChannelRealization &ch, const SystemConfig &cfg, const std::vector<double> &codebook,
                        int l, int k, const TrainingNoise &noise, Rng &rng)
    {
        if (codebook.empty())
            throw std::invalid_argument("estimate_aoa: empty codebook");
        const auto i = ch.index(l, l, k);
        const double amp = std::sqrt(ch.beta[i]);
        std::size_t best = 0;
        double best_mag = -1.0;
        for (std::size_t c = 0; c < codebook.size(); ++c)
        {
            const Eigen::VectorXcd wt = beamformer_from_angle(codebook[c], cfg.M, cfg.spacing());
            // w^T h_U^* equals h_U^H w for a scalar
            std::complex<double> r = amp * ch.h_U[i].dot(wt);
            if (noise.awgn && noise.sigma2 > 0.0)
                r += complex_normal(rng, noise.sigma2);
            const double mag = std::abs(r);
            if (mag > best_mag * (1.0 + 1e-12) + 1e-300)
            {
                best = c;
                best_mag = mag;
            }
        }
        return codebook[best];
    }

    double estimate_aoa(const ChannelRealization &ch, const SystemConfig &cfg, int l, int k,
                        const TrainingNoise &noise, Rng &rng)
    {
        return estimate_aoa(ch, cfg, build_codebook(cfg.bits_B()), l, k, noise, rng);
    }

    TrainingResult train_beams(const ChannelRealization &ch, const SystemConfig &cfg, const TrainingNoise &noise,
                               Rng &rng)
    {
        TrainingResult tr;
        tr.L = ch.L;
        tr.K = ch.K;
        tr.M = ch.M;
        tr.codebook = build_codebook(cfg.bits_B());
        tr.phi_hat.resize(std::size_t(ch.L) * std::size_t(ch.K));
        tr.w.resize(tr.phi_hat.size());
        // Cells train in orthogonal slots, so no inter-cell interference here
        for (int l = 0; l < ch.L; ++l)
            for (int k = 0; k < ch.K; ++k)
            {
                const auto u = tr.user(l, k);
                tr.phi_hat[u] = estimate_aoa(ch, cfg, tr.codebook, l, k, noise, rng);
                tr.w[u] = beamformer_from_angle(tr.phi_hat[u], ch.M, cfg.spacing());
            }
        tr.c.resize(ch.beta.size());
        for (int j = 0; j < ch.L; ++j)
            for (int l = 0; l < ch.L; ++l)
                for (int k = 0; k < ch.K; ++k)
                    tr.c[tr.index(j, l, k)] = beamforming_gain(ch.h_U[ch.index(j, l, k)], tr.w[tr.user(l, k)]);
        return tr;
    }

} // namespace mmwq
