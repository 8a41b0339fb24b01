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

#include "mmwq/closed_form.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mmwq
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        long double j0_series(long double x)
        {
            // sum_k (-x^2/4)^k / (k!)^2
            const long double q = -0.25L * x * x;
            long double term = 1.0L, sum = 1.0L;
            for (int k = 1; k < 200; ++k)
            {
                term *= q / ((long double)k * (long double)k);
                sum += term;
                if (std::fabs(term) < 1e-22L * std::fabs(sum) && std::fabs(term) < 1e-22L)
                    break;
            }
            return sum;
        }

        long double j0_hankel(long double x)
        {
            // Asymptotic P and Q series, |a_k| = prod_{i<k} (2i+1)^2 / (k! 8^k). Q is stored with flipped sign.
            long double P = 0.0L, Q = 0.0L;
            long double ak = 1.0L, prev = std::numeric_limits<long double>::infinity();
            long double xp = 1.0L;
            for (int k = 0; k < 120; ++k)
            {
                if (k > 0)
                {
                    const long double s = 2.0L * k - 1.0L;
                    ak *= s * s / (8.0L * k);
                    xp *= x;
                }
                const long double t = ak / xp;
                if (t > prev)
                    break;
                prev = t;
                const int sgn = ((k / 2) % 2 == 0) ? 1 : -1;
                if (k % 2 == 0)
                    P += sgn * t;
                else
                    Q += sgn * t;
                if (t < 1e-21L)
                    break;
            }
            const long double chi = x - 0.25L * std::numbers::pi_v<long double>;
            return std::sqrt(2.0L / (std::numbers::pi_v<long double> * x)) * (P * std::cos(chi) + Q * std::sin(chi));
        }

        // Memo of J0(k pi), grown on demand and shared as immutable snapshots
        std::shared_ptr<const std::vector<double>> j0_pi_multiples(std::size_t count)
        {
            static std::mutex mtx;
            static std::shared_ptr<const std::vector<double>> memo = std::make_shared<const std::vector<double>>();
            std::lock_guard<std::mutex> lock(mtx);
            if (memo->size() < count)
            {
                auto grown = std::make_shared<std::vector<double>>(*memo);
                grown->reserve(count);
                for (std::size_t k = grown->size(); k < count; ++k)
                    grown->push_back(bessel_j0(double(k) * pi));
                memo = std::move(grown);
            }
            return memo;
        }

        double log_rate(double x, double base)
        {
            return std::log1p(x) / std::log(base);
        }

        void require_positive(std::int64_t N)
        {
            if (N < 1)
                throw std::invalid_argument("N must be >= 1");
        }

        // Autocorrelation R(m) = sum_{n=0}^{N-1-m} J_n J_{n+m} for m = 0..N-1
        std::vector<double> autocorrelation(const std::vector<double> &J, std::size_t N)
        {
            std::vector<double> R(N, 0.0);
            if (N <= 4096)
            {
                for (std::size_t m = 0; m < N; ++m)
                {
                    double s = 0.0;
                    for (std::size_t n = 0; n + m < N; ++n)
                        s += J[n] * J[n + m];
                    R[m] = s;
                }
                return R;
            }
            std::size_t nfft = 1;
            while (nfft < 2 * N)
                nfft <<= 1;
            std::vector<double> x(nfft, 0.0);
            for (std::size_t n = 0; n < N; ++n)
                x[n] = J[n];
            Eigen::FFT<double> fft;
            std::vector<std::complex<double>> X;
            fft.fwd(X, x);
            for (auto &v : X)
                v = std::complex<double>(std::norm(v), 0.0);
            std::vector<double> r;
            fft.inv(r, X);
            for (std::size_t m = 0; m < N; ++m)
                R[m] = r[m];
            return R;
        }
    } // namespace

    double bessel_j0(double x)
    {
        if (!std::isfinite(x))
            throw std::invalid_argument("bessel_j0: argument must be finite");
        const long double ax = std::fabs((long double)x);
        if (ax < 20.0L)
            return double(j0_series(ax));
        return double(j0_hankel(ax));
    }

    double sinc(double x)
    {
        if (x == 0.0)
            return 1.0;
        if (std::fabs(x) < 1e-4)
        {
            const double x2 = x * x;
            return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
        }
        return std::sin(x) / x;
    }

    double gain_lower_bound(int M, double zeta)
    {
        if (M < 1)
            throw std::invalid_argument("gain_lower_bound: M must be >= 1");
        return std::sqrt(double(M)) * sinc(double(M) * pi * zeta / 2.0);
    }

    double eta1(std::int64_t N)
    {
        require_positive(N);
        return 1.0 + (std::log(double(N)) + euler_gamma) / (pi * pi);
    }

    double eta2(std::int64_t N)
    {
        require_positive(N);
        const double n = double(N);
        return n - 2.0 / (pi * pi) * (n - 1.0) + 2.0 * n / (pi * pi) * (std::log(n) + euler_gamma);
    }

    double j0_triple_double_sum(std::int64_t N)
    {
        require_positive(N);
        if (N > eta3_exact_limit)
            throw std::invalid_argument("j0_triple_double_sum: N above exact evaluation limit");
        static std::mutex mtx;
        static std::map<std::int64_t, double> cache;
        {
            std::lock_guard<std::mutex> lock(mtx);
            auto it = cache.find(N);
            if (it != cache.end())
                return it->second;
        }
        auto J = j0_pi_multiples(std::size_t(N));
        auto R = autocorrelation(*J, std::size_t(N));
        double s = 0.0;
        for (std::int64_t m = 1; m < N; ++m)
            s += (*J)[std::size_t(m)] * R[std::size_t(m)];
        std::lock_guard<std::mutex> lock(mtx);
        cache[N] = s;
        return s;
    }

    double eta3_upper(std::int64_t N)
    {
        require_positive(N);
        return eta1(N) + 2.0 * (double(N) - 1.0) * (std::log(double(N)) + euler_gamma) / (pi * pi);
    }

    double eta3(std::int64_t N)
    {
        require_positive(N);
        if (N > eta3_exact_limit)
            return eta3_upper(N);
        return eta1(N) + 2.0 * j0_triple_double_sum(N);
    }

    double exact_inner_mean(std::int64_t N)
    {
        require_positive(N);
        auto J = j0_pi_multiples(std::size_t(N));
        double s = 0.0;
        for (std::int64_t n = 0; n < N; ++n)
            s += (*J)[std::size_t(n)] * (*J)[std::size_t(n)];
        return s;
    }

    double exact_inner_power(std::int64_t N)
    {
        require_positive(N);
        auto J = j0_pi_multiples(std::size_t(N));
        double s = double(N);
        for (std::int64_t n = 1; n < N; ++n)
            s += 2.0 * double(N - n) * (*J)[std::size_t(n)] * (*J)[std::size_t(n)];
        return s;
    }

    double exact_triple(std::int64_t N)
    {
        return exact_inner_mean(N) + 2.0 * j0_triple_double_sum(N);
    }

    BoundInputs bound_inputs(const SystemConfig &cfg)
    {
        BoundInputs in;
        const double rho = cfg.rho();
        const double K = cfg.K, L = cfg.L, M = cfg.M, beta = cfg.beta();
        in.c = gain_lower_bound(cfg.M, cfg.zeta());
        in.lambda = in.c * in.c + (K - 1.0) * M + beta * (L - 1.0) * K * M;
        in.mu = cfg.sigma_n2 / ((1.0 - rho) * cfg.p_p) + rho * in.lambda / ((1.0 - rho) * cfg.pilot_length());
        in.eta1 = eta1(cfg.N);
        in.eta2 = eta2(cfg.N);
        in.eta3 = eta3(cfg.N);
        return in;
    }

    BoundReport lower_bound_rate(const SystemConfig &cfg)
    {
        BoundReport r;
        r.in = bound_inputs(cfg);
        const auto &in = r.in;
        const double rho = cfg.rho(), g = (1.0 - rho) * (1.0 - rho);
        const double K = cfg.K, L = cfg.L, M = cfg.M, N = cfg.N, beta = cfg.beta();
        const double c = in.c, c2 = c * c, c4 = c2 * c2;
        const double Pt = cfg.p_t, s2 = cfg.sigma_n2;
        const double sb = std::sqrt(beta), sM = std::sqrt(M);
        const double e1 = in.eta1, e2 = in.eta2, e3 = in.eta3;

        r.P_u = g * Pt * (K - 1.0) * M / c2 * e2;
        r.P_c = g * Pt * (L - 1.0) * K * beta * M / c2 * e2;

        // shared factor of the noise and quantization terms
        const double common = N * c2 + N * in.mu + (L - 1.0) * N * beta * M +
                              (L - 1.0) * (L - 2.0) * beta * M * e1 + 2.0 * (L - 1.0) * sb * c * sM * e1;
        r.P_n = g * s2 / c4 * common;
        r.P_q = rho * (1.0 - rho) * (s2 + in.lambda * Pt) / c4 * common;

        const double b2M2 = beta * beta * M * M;
        const double LKK = L * K - K;
        double est = N * in.lambda * in.mu;
        est += (L - 1.0) * N * N * b2M2;
        est += 2.0 * (L - 1.0) * (L - 2.0) * N * b2M2 * e1;
        est += 2.0 * (L - 1.0) * N * (sb * c2 * c * sM + beta * sb * c * M * sM) * e1;
        est += (L - 1.0) * K * beta * M * M * e2;
        est += (L - 1.0) * (LKK - 1.0) * b2M2 * e2;
        est += (L - 1.0) * (L - 2.0) * K * beta * M * M * e3;
        est += (L - 1.0) * (L - 2.0) * (LKK - 2.0) * b2M2 * e3;
        est += 2.0 * (L - 1.0) * (K - 1.0) * sb * c * M * sM * e3;
        est += 2.0 * (L - 1.0) * (LKK - 1.0) * beta * sb * c * M * sM * e3;
        r.P_e = g * Pt / c4 * est;

        const double den = r.P_u + r.P_c + r.P_n + r.P_q + r.P_e;
        r.R_LB = log_rate(g * Pt * N * N / den, cfg.rate_log_base);
        r.R_inf = asymptotic_limit(cfg);
        r.R_LB_s = cfg.L == 1 ? single_cell_bound(cfg) : std::numeric_limits<double>::quiet_NaN();

        const auto a1 = low_snr_approx(cfg);
        const auto a2 = high_pilot_approx(cfg);
        r.xi1 = a1.xi;
        r.R_LB_1 = a1.rate;
        r.xi2 = a2.xi;
        r.R_LB_2 = a2.rate;
        return r;
    }

    double asymptotic_limit(int L, double beta, int M, double c, double log_base)
    {
        if (L < 1)
            throw std::invalid_argument("asymptotic_limit: L must be >= 1");
        if (L == 1)
            return std::numeric_limits<double>::infinity();
        const double c4 = c * c * c * c;
        return log_rate(c4 / ((L - 1.0) * beta * beta * double(M) * double(M)), log_base);
    }

    double asymptotic_limit(const SystemConfig &cfg)
    {
        return asymptotic_limit(cfg.L, cfg.beta(), cfg.M, gain_lower_bound(cfg.M, cfg.zeta()), cfg.rate_log_base);
    }

    double single_cell_bound(const SystemConfig &cfg)
    {
        if (cfg.L != 1)
            throw std::invalid_argument("single_cell_bound: requires L = 1");
        const double rho = cfg.rho();
        const double N = cfg.N, M = cfg.M, K = cfg.K, tau = cfg.pilot_length();
        const double gt = cfg.gamma_t(), gp = cfg.gamma_p();
        const double c = gain_lower_bound(cfg.M, cfg.zeta());
        const double ci2 = 1.0 / (c * c), ci4 = ci2 * ci2;
        const double lambda = c * c + (K - 1.0) * M;
        const double e2 = eta2(cfg.N);

        const double den = ci4 * N / (gt * gp) +
                           ci2 * N * ((1.0 - rho + rho * ci2 * lambda / tau) / gt + ci2 * lambda / gp) +
                           (1.0 - rho + ci2 * lambda / tau) * rho * N * ci2 * lambda +
                           (1.0 - rho) * (1.0 - rho) * M * (K - 1.0) * ci2 * e2;
        return log_rate((1.0 - rho) * (1.0 - rho) * N * N / den, cfg.rate_log_base);
    }

    ScalingApprox low_snr_approx(const SystemConfig &cfg)
    {
        const double rho = cfg.rho();
        ScalingApprox a;
        a.xi = (1.0 - rho) * (1.0 - rho) * double(cfg.N) * double(cfg.M) * double(cfg.M) * cfg.gamma_p();
        a.rate = log_rate(a.xi * cfg.gamma_t(), cfg.rate_log_base);
        return a;
    }

    ScalingApprox high_pilot_approx(const SystemConfig &cfg)
    {
        const double rho = cfg.rho();
        const double kt = double(cfg.K) / double(cfg.pilot_length());
        ScalingApprox a;
        a.xi = (1.0 - rho) * (1.0 - rho) * double(cfg.N) * double(cfg.M) / (1.0 - rho + rho * kt);
        a.rate = log_rate(a.xi * cfg.gamma_t(), cfg.rate_log_base);
        return a;
    }

} // namespace mmwq
