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
#include "mmwq/training.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace mmwq
{
    Eigen::VectorXcd steering_vector(double angle, int count, double spacing_ratio)
    {
        if (count < 1)
            throw std::invalid_argument("steering_vector: count must be >= 1");
        Eigen::VectorXcd v(count);
        const double step = -2.0 * std::numbers::pi * spacing_ratio * std::cos(angle);
        v[0] = 1.0;
        for (int n = 1; n < count; ++n)
            v[n] = std::polar(1.0, step * double(n));
        return v;
    }

    Eigen::MatrixXcd ChannelRealization::H(int j, int l, int k) const
    {
        const auto i = index(j, l, k);
        return std::sqrt(beta[i]) * h_B[i] * h_U[i].adjoint();
    }

    ChannelRealization sample_channel(const SystemConfig &cfg, Rng &rng)
    {
        ChannelRealization ch;
        ch.L = cfg.L;
        ch.K = cfg.K;
        ch.N = cfg.N;
        ch.M = cfg.M;
        const std::size_t n = std::size_t(cfg.L) * std::size_t(cfg.L) * std::size_t(cfg.K);
        ch.phi.resize(n);
        ch.theta.resize(n);
        ch.beta.resize(n);
        ch.h_U.resize(n);
        ch.h_B.resize(n);
        const double d = cfg.spacing();
        for (int j = 0; j < cfg.L; ++j)
            for (int l = 0; l < cfg.L; ++l)
                for (int k = 0; k < cfg.K; ++k)
                {
                    const auto i = ch.index(j, l, k);
                    ch.phi[i] = uniform(rng, 0.0, std::numbers::pi);
                    ch.theta[i] = uniform(rng, 0.0, std::numbers::pi);
                    ch.beta[i] = (j == l) ? 1.0 : cfg.beta();
                    ch.h_U[i] = steering_vector(ch.phi[i], cfg.M, d);
                    ch.h_B[i] = steering_vector(ch.theta[i], cfg.N, d);
                }
        return ch;
    }

    ChannelRealization sample_channel(const SystemConfig &cfg, std::uint64_t trial)
    {
        auto rng = substream(cfg.seed, trial, Stream::channel);
        return sample_channel(cfg, rng);
    }

    Eigen::MatrixXcd effective_channel(const ChannelRealization &ch, const TrainingResult &tr, int j, int l)
    {
        if (j < 0 || j >= ch.L || l < 0 || l >= ch.L)
            throw std::invalid_argument("effective_channel: cell index out of range");
        if (tr.L != ch.L || tr.K != ch.K || tr.c.size() != ch.beta.size())
            throw std::invalid_argument("effective_channel: training does not match the realization");
        Eigen::MatrixXcd out(ch.N, ch.K);
        for (int k = 0; k < ch.K; ++k)
        {
            const auto i = ch.index(j, l, k);
            out.col(k) = std::sqrt(ch.beta[i]) * tr.c[i] * ch.h_B[i];
        }
        return out;
    }

    void write_realization_csv(std::ostream &out, const ChannelRealization &ch, const TrainingResult &tr)
    {
        out << "j,l,k,phi,theta,beta,phi_hat,abs_c\n";
        out.precision(12);
        for (int j = 0; j < ch.L; ++j)
            for (int l = 0; l < ch.L; ++l)
                for (int k = 0; k < ch.K; ++k)
                {
                    const auto i = ch.index(j, l, k);
                    out << j << ',' << l << ',' << k << ',' << ch.phi[i] << ',' << ch.theta[i] << ',' << ch.beta[i]
                        << ',' << tr.phi_hat[tr.user(l, k)] << ',' << std::abs(tr.c[i]) << '\n';
                }
    }

} // namespace mmwq
