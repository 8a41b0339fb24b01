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

#include "mmwq/quantizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace mmwq
{
    namespace
    {
        constexpr double inf = std::numeric_limits<double>::infinity();

        double pdf(double x)
        {
            if (!std::isfinite(x))
                return 0.0;
            return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        }

        // upper tail Q(x) = P(X > x)
        double tail(double x)
        {
            return 0.5 * std::erfc(x / std::numbers::sqrt2);
        }

        // P(a < X < b), accurate in both tails
        double mass(double a, double b)
        {
            if (a >= 0.0)
                return tail(a) - tail(b);
            if (b <= 0.0)
                return tail(-b) - tail(-a);
            return 1.0 - tail(b) - tail(-a);
        }

        double inverse_cdf(double p)
        {
            double lo = -40.0, hi = 40.0;
            for (int i = 0; i < 200 && hi - lo > 1e-15; ++i)
            {
                const double mid = 0.5 * (lo + hi);
                if (1.0 - tail(mid) < p)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        }

        std::vector<double> cell_bounds(const std::vector<double> &y)
        {
            std::vector<double> t(y.size() + 1);
            t.front() = -inf;
            t.back() = inf;
            for (std::size_t i = 1; i < y.size(); ++i)
                t[i] = 0.5 * (y[i - 1] + y[i]);
            return t;
        }

        // sum over cells of E[(X - y_i)^2; X in cell i]
        double distortion_of(const std::vector<double> &y)
        {
            const auto t = cell_bounds(y);
            double D = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
            {
                const double a = t[i], b = t[i + 1];
                const double P = mass(a, b);
                const double first = pdf(a) - pdf(b); // E[X; cell]
                const double ta = std::isfinite(a) ? a * pdf(a) : 0.0;
                const double tb = std::isfinite(b) ? b * pdf(b) : 0.0;
                const double second = P + ta - tb; // E[X^2; cell]
                D += second - 2.0 * y[i] * first + y[i] * y[i] * P;
            }
            return D;
        }
    } // namespace

    LloydMaxCodebook design_lloyd_max(int bits)
    {
        if (bits < 1 || bits > 12)
            throw std::invalid_argument("design_lloyd_max: bits must be in 1..12");
        const std::size_t L = std::size_t(1) << bits;

        // compander start
        std::vector<double> y(L);
        for (std::size_t i = 0; i < L; ++i)
            y[i] = std::sqrt(3.0) * inverse_cdf((double(i) + 0.5) / double(L));

        std::vector<double> F(L), diag(L), lower(L), upper(L), dy(L);
        int it = 0;
        for (; it < 200; ++it)
        {
            const auto t = cell_bounds(y);
            double resid = 0.0;
            for (std::size_t i = 0; i < L; ++i)
            {
                const double a = t[i], b = t[i + 1];
                const double P = mass(a, b);
                const double c = (pdf(a) - pdf(b)) / P;
                F[i] = y[i] - c;
                resid = std::max(resid, std::abs(F[i]));
                const double da = std::isfinite(a) ? pdf(a) * (c - a) / P : 0.0;
                const double db = std::isfinite(b) ? pdf(b) * (b - c) / P : 0.0;
                diag[i] = 1.0 - 0.5 * (da + db);
                lower[i] = -0.5 * da; // d/dy_{i-1}
                upper[i] = -0.5 * db; // d/dy_{i+1}
            }
            if (resid < 1e-14)
                break;

            // Thomas algorithm for J dy = -F
            std::vector<double> cp(L), dp(L);
            cp[0] = upper[0] / diag[0];
            dp[0] = -F[0] / diag[0];
            for (std::size_t i = 1; i < L; ++i)
            {
                const double m = diag[i] - lower[i] * cp[i - 1];
                cp[i] = upper[i] / m;
                dp[i] = (-F[i] - lower[i] * dp[i - 1]) / m;
            }
            dy[L - 1] = dp[L - 1];
            for (std::size_t i = L - 1; i-- > 0;)
                dy[i] = dp[i] - cp[i] * dy[i + 1];

            double step = 1.0, change = 0.0;
            std::vector<double> trial(L);
            for (int h = 0; h < 30; ++h, step *= 0.5)
            {
                bool ordered = true;
                for (std::size_t i = 0; i < L; ++i)
                {
                    trial[i] = y[i] + step * dy[i];
                    if (i > 0 && !(trial[i] > trial[i - 1]))
                        ordered = false;
                }
                if (ordered)
                    break;
            }
            for (std::size_t i = 0; i < L; ++i)
                change = std::max(change, std::abs(trial[i] - y[i]));
            y.swap(trial);
            if (change < 1e-15)
                break;
        }

        // enforce exact symmetry
        for (std::size_t i = 0; i < L / 2; ++i)
        {
            const double m = 0.5 * (y[L - 1 - i] - y[i]);
            y[i] = -m;
            y[L - 1 - i] = m;
        }

        LloydMaxCodebook cb;
        cb.bits = bits;
        cb.levels = y;
        cb.thresholds.resize(L - 1);
        for (std::size_t i = 0; i + 1 < L; ++i)
            cb.thresholds[i] = 0.5 * (y[i] + y[i + 1]);
        cb.distortion = distortion_of(y);
        cb.iterations = it;
        return cb;
    }

    const LloydMaxCodebook &lloyd_max_codebook(int bits)
    {
        if (bits < 1 || bits > 12)
            throw std::invalid_argument("lloyd_max_codebook: bits must be in 1..12");
        static std::array<LloydMaxCodebook, 12> books;
        static std::array<std::once_flag, 12> flags;
        const auto i = std::size_t(bits - 1);
        std::call_once(flags[i], [&] { books[i] = design_lloyd_max(bits); });
        return books[i];
    }

    double quantize_real(double x, const LloydMaxCodebook &cb, double sd)
    {
        const double u = x / sd;
        // ties at a threshold go to the upper cell, so 0 maps to the innermost positive level
        const auto it = std::upper_bound(cb.thresholds.begin(), cb.thresholds.end(), u);
        return sd * cb.levels[std::size_t(it - cb.thresholds.begin())];
    }

    Eigen::VectorXcd lloyd_max_quantize(const Eigen::VectorXcd &samples, int bits, double input_variance)
    {
        if (!(input_variance > 0.0))
            throw std::invalid_argument("lloyd_max_quantize: input_variance must be positive");
        const auto &cb = lloyd_max_codebook(bits);
        const double sd = std::sqrt(input_variance / 2.0);
        Eigen::VectorXcd out(samples.size());
        for (Eigen::Index n = 0; n < samples.size(); ++n)
            out[n] = {quantize_real(samples[n].real(), cb, sd), quantize_real(samples[n].imag(), cb, sd)};
        return out;
    }

    BussgangStats bussgang_decompose(const Eigen::VectorXcd &y, const Eigen::VectorXcd &q)
    {
        if (y.size() != q.size())
            throw std::invalid_argument("bussgang_decompose: length mismatch");
        if (y.size() < 10000)
            throw std::invalid_argument("bussgang_decompose: at least 10000 samples required");
        const double n = double(y.size());
        const double py = y.squaredNorm() / n;
        if (!(py > 0.0))
            throw std::invalid_argument("bussgang_decompose: zero input power");
        const std::complex<double> qy = y.dot(q) / n; // E[q y*]
        BussgangStats s;
        s.gain = qy.real() / py;
        const Eigen::VectorXcd d = q - s.gain * y;
        s.noise_var = d.squaredNorm() / n;
        s.crosscorr = std::abs(y.dot(d) / n) / py;
        return s;
    }

    namespace
    {
        double weighted_sum(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas, int j)
        {
            const std::size_t per_bs = std::size_t(cfg.L) * std::size_t(cfg.K);
            if (j < 0 || j >= cfg.L)
                throw std::invalid_argument("quantization noise: cell index out of range");
            const std::size_t need = per_bs * std::size_t(cfg.L);
            if (abs_c2.size() < need || betas.size() < need)
                throw std::invalid_argument("quantization noise: tables do not cover all (l,k)");
            double s = 0.0;
            const std::size_t off = std::size_t(j) * per_bs;
            for (std::size_t i = 0; i < per_bs; ++i)
                s += betas[off + i] * abs_c2[off + i];
            return s;
        }
    } // namespace

    double quant_noise_power_data(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas, int j)
    {
        const double rho = cfg.rho();
        return rho * (1.0 - rho) * (cfg.sigma_n2 + cfg.p_t * weighted_sum(cfg, abs_c2, betas, j));
    }

    double quant_noise_power_pilot(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas, int j)
    {
        const double rho = cfg.rho();
        const double pp = cfg.p_p / double(cfg.pilot_length());
        return rho * (1.0 - rho) * (cfg.sigma_n2 + pp * weighted_sum(cfg, abs_c2, betas, j));
    }

    BussgangModel bussgang_model(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas, int j)
    {
        BussgangModel m;
        m.rho_ad = cfg.rho();
        m.gain = 1.0 - m.rho_ad;
        m.sigma_q2 = quant_noise_power_data(cfg, abs_c2, betas, j);
        m.sigma_pq2 = quant_noise_power_pilot(cfg, abs_c2, betas, j);
        return m;
    }

} // namespace mmwq
