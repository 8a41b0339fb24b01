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

#include "mmwq/experiment.hpp"
#include "mmwq/channel.hpp"
#include "mmwq/quantizer.hpp"
#include "mmwq/training.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace mmwq
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        void add(ValidationReport &rep, const std::string &suite, const std::string &name, bool ok, double measured,
                 double tol, const std::string &detail = "")
        {
            rep.checks.push_back({suite, name, ok, measured, tol, detail});
        }

        void quantizer_suite(ValidationReport &rep, std::uint64_t seed)
        {
            const std::string s = "quantizer";
            bool dec = true;
            for (int b = 1; b < 12; ++b)
                dec = dec && distortion_factor(b + 1) < distortion_factor(b);
            add(rep, s, "rho_table_decreasing", dec, 0.0, 0.0);

            double worst = 0.0;
            for (int b = 1; b <= 12; ++b)
            {
                const double d = design_lloyd_max(b).distortion;
                worst = std::max(worst, std::abs(d / distortion_factor(b) - 1.0));
            }
            add(rep, s, "rho_table_regeneration", worst < 1e-6, worst, 1e-6);

            auto rng = substream(seed, 0, 77);
            const Eigen::Index n = 500000; // 1e6 real samples
            Eigen::VectorXcd y(n);
            for (Eigen::Index i = 0; i < n; ++i)
                y[i] = complex_normal(rng, 1.0);
            for (int b = 1; b <= 5; ++b)
            {
                const Eigen::VectorXcd q = lloyd_max_quantize(y, b, 1.0);
                const double rho = distortion_factor(b);
                const double emp = (q - y).squaredNorm() / y.squaredNorm();
                const double e1 = std::abs(emp / rho - 1.0);
                add(rep, s, "empirical_distortion_b" + std::to_string(b), e1 < 0.01, e1, 0.01);
                const auto st = bussgang_decompose(y, q);
                add(rep, s, "bussgang_crosscorr_b" + std::to_string(b), st.crosscorr < 0.01, st.crosscorr, 0.01);
                const double e2 = std::abs(st.gain / (1.0 - rho) - 1.0);
                add(rep, s, "bussgang_gain_b" + std::to_string(b), e2 < 0.01, e2, 0.01);
                const double ratio = st.noise_var / (y.squaredNorm() / double(n));
                const double e3 = std::abs(ratio / (rho * (1.0 - rho)) - 1.0);
                add(rep, s, "bussgang_noise_b" + std::to_string(b), e3 < 0.02, e3, 0.02);
            }
        }

        void lemmas_suite(ValidationReport &rep, std::uint64_t seed)
        {
            const std::string s = "lemmas";
            const double j100 = bessel_j0(100.0) - std::sqrt(2.0 / (pi * 100.0)) * std::cos(100.0 - pi / 4.0);
            add(rep, s, "j0_asymptotic_x100", std::abs(j100) < 1e-4, std::abs(j100), 1e-4);

            for (int N : {16, 64, 256})
            {
                auto rng = substream(seed, std::uint64_t(N), 91);
                const int draws = 20000;
                double m1 = 0, m1sq = 0, m2 = 0, m2sq = 0, m3 = 0, m3sq = 0;
                for (int d = 0; d < draws; ++d)
                {
                    const auto h1 = steering_vector(uniform(rng, 0.0, pi), N);
                    const auto h2 = steering_vector(uniform(rng, 0.0, pi), N);
                    const auto h3 = steering_vector(uniform(rng, 0.0, pi), N);
                    const double a = h1.dot(h2).real();
                    const double p = std::norm(h1.dot(h2));
                    const double t = (h1.dot(h2) * h2.dot(h3)).real();
                    m1 += a, m1sq += a * a, m2 += p, m2sq += p * p, m3 += t, m3sq += t * t;
                }
                auto zscore = [&](double sum, double sq, double exact) {
                    const double mean = sum / draws;
                    const double se = std::sqrt((sq / draws - mean * mean) / (draws - 1.0));
                    return std::abs(mean - exact) / se;
                };
                const std::string tag = "_N" + std::to_string(N);
                const double z1 = zscore(m1, m1sq, exact_inner_mean(N));
                const double z2 = zscore(m2, m2sq, exact_inner_power(N));
                const double z3 = zscore(m3, m3sq, exact_triple(N));
                add(rep, s, "mc_inner_mean" + tag, z1 < 3.0, z1, 3.0);
                add(rep, s, "mc_inner_power" + tag, z2 < 3.0, z2, 3.0);
                add(rep, s, "mc_triple" + tag, z3 < 3.0, z3, 3.0);
            }
            const double r1 = std::abs(exact_inner_mean(256) / eta1(256) - 1.0);
            const double r2 = std::abs(exact_inner_power(256) / eta2(256) - 1.0);
            const double r3 = std::abs(exact_triple(256) / eta3(256) - 1.0);
            add(rep, s, "eta1_vs_exact_N256", r1 < 0.02, r1, 0.02);
            add(rep, s, "eta2_vs_exact_N256", r2 < 0.02, r2, 0.02);
            add(rep, s, "eta3_vs_exact_N256", r3 < 0.10, r3, 0.10);

            for (int M : {2, 4, 8})
            {
                SystemConfig cfg;
                cfg.L = 1;
                cfg.K = 1;
                cfg.N = 1;
                cfg.M = M;
                cfg.adc_bits = 1;
                cfg = validated(cfg);
                const double lo = gain_lower_bound(M, cfg.zeta()), hi = std::sqrt(double(M));
                const auto book = build_codebook(cfg.bits_B());
                int violations = 0;
                double worst = 1e300;
                Rng dummy(1);
                for (int g = 0; g < 10000; ++g)
                {
                    ChannelRealization ch;
                    ch.L = ch.K = ch.N = 1;
                    ch.M = M;
                    ch.phi = {pi * (g + 0.5) / 10000.0};
                    ch.theta = {0.0};
                    ch.beta = {1.0};
                    ch.h_U = {steering_vector(ch.phi[0], M)};
                    ch.h_B = {steering_vector(0.0, 1)};
                    const double ph = estimate_aoa(ch, cfg, book, 0, 0, {}, dummy);
                    const double c = std::abs(beamforming_gain(ch.h_U[0], beamformer_from_angle(ph, M)));
                    worst = std::min(worst, c - lo);
                    if (c < lo - 1e-12 || c > hi + 1e-12)
                        ++violations;
                }
                add(rep, s, "lemma1_grid_M" + std::to_string(M), violations == 0, violations, 0.0);
            }
        }

        void bounds_suite(ValidationReport &rep, std::uint64_t seed)
        {
            const std::string s = "bounds";
            SystemConfig base;
            base.L = 1;
            base.K = 4;
            base.N = 64;
            base.M = 2;
            base.adc_bits = 3;
            base.p_t = 0.5;
            base.p_p = 2.0;
            base = validated(base);
            const double d = std::abs(lower_bound_rate(base).R_LB - single_cell_bound(base));
            add(rep, s, "single_cell_consistency", d < 1e-12, d, 1e-12);

            auto rng = substream(seed, 0, 55);
            int viol = 0;
            for (int t = 0; t < 1000; ++t)
            {
                SystemConfig c;
                c.L = 1;
                c.K = 1 + int(uniform(rng, 0.0, 16.0));
                c.tau = c.K + int(uniform(rng, 0.0, 16.0));
                c.N = 8 + int(uniform(rng, 0.0, 256.0));
                c.M = 1 + int(uniform(rng, 0.0, 8.0));
                c.adc_bits = 1 + int(uniform(rng, 0.0, 12.0));
                c.p_p = std::pow(10.0, uniform(rng, -3.0, 0.0)) / c.M;
                c.p_t = std::pow(10.0, uniform(rng, -3.0, 0.0));
                c = validated(c);
                const auto b = lower_bound_rate(c);
                if (b.xi2 < b.xi1)
                    ++viol;
            }
            add(rep, s, "xi2_ge_xi1", viol == 0, viol, 0.0);

            double worst = 0.0;
            for (auto [n1, n5] : {std::pair{80, 32}, {160, 64}, {240, 96}})
            {
                SystemConfig a = base, b = base;
                a.N = n1;
                a.adc_bits = 1;
                b.N = n5;
                b.adc_bits = 5;
                const double r = low_snr_approx(a).xi / low_snr_approx(b).xi;
                worst = std::max(worst, std::abs(r - 1.01));
            }
            add(rep, s, "antenna_for_bits_tradeoff", worst <= 0.04, worst, 0.04, "ratio within [0.97,1.05]");

            SystemConfig big;
            big.L = 3;
            big.K = 4;
            big.M = 2;
            big.B = 6;
            big.adc_bits = 1;
            big.N = 10000000;
            big.p_t = 1.0;
            big.p_p = 4.0;
            big = validated(big);
            const auto br = lower_bound_rate(big);
            const double gap = std::abs(br.R_inf - br.R_LB);
            add(rep, s, "asymptotic_gap_N1e7", gap < 0.2, gap, 0.2);

            // monotonicity on a small lattice
            int bad = 0;
            SystemConfig m = base;
            m.L = 3;
            for (int K = 1; K < 8; ++K)
            {
                SystemConfig a = m, b = m;
                a.K = K;
                b.K = K + 1;
                a.tau = b.tau = 8;
                if (lower_bound_rate(validated(b)).R_LB > lower_bound_rate(validated(a)).R_LB + 1e-12)
                    ++bad;
            }
            for (int bits = 1; bits < 12; ++bits)
            {
                SystemConfig a = m, b = m;
                a.adc_bits = bits;
                b.adc_bits = bits + 1;
                if (lower_bound_rate(validated(b)).R_LB < lower_bound_rate(validated(a)).R_LB - 1e-12)
                    ++bad;
            }
            for (int N = 16; N < 2048; N *= 2)
            {
                SystemConfig a = m, b = m;
                a.N = N;
                b.N = 2 * N;
                if (lower_bound_rate(validated(b)).R_LB < lower_bound_rate(validated(a)).R_LB - 1e-12)
                    ++bad;
            }
            add(rep, s, "bound_monotone_lattice", bad == 0, bad, 0.0);
        }

        void rate_suite(ValidationReport &rep, std::uint64_t seed)
        {
            const std::string s = "rate";
            SystemConfig c;
            c.L = 3;
            c.N = 64;
            c.M = 2;
            c.adc_bits = 1;
            c.seed = seed;
            for (int K : {2, 8})
            {
                c.K = K;
                c.tau.reset();
                c.p_t = 1.0;
                c.p_p = K * c.p_t;
                const auto v = validated(c);
                const auto r = ergodic_rate(v, 300);
                const double lb = lower_bound_rate(v).R_LB;
                add(rep, s, "bound_validity_K" + std::to_string(K), r.rate_mc + r.ci95 >= lb, r.rate_mc - lb, 0.0);
            }
            c.K = 4;
            c.tau.reset();
            c.p_p = 4.0;
            c.adc_bits = 3;
            const auto v = validated(c);
            const auto a = ergodic_rate(v, 100);
            RateOptions o;
            o.mode = RateMode::symbol_level;
            o.pilot_draws = 8;
            o.data_draws = 32;
            const auto b = ergodic_rate(v, 100, o);
            const double rel = std::abs(b.rate_mc / a.rate_mc - 1.0);
            add(rep, s, "semi_vs_symbol_b3", rel < 0.03, rel, 0.03);

            const auto r1 = ergodic_rate(v, 100), r4 = ergodic_rate(v, 400);
            const double ratio = r1.ci95 / r4.ci95;
            add(rep, s, "ci_scaling", std::abs(ratio - 2.0) < 0.6, ratio, 0.6, "ci(100)/ci(400) near 2");
        }
    } // namespace

    ValidationReport validate(const std::string &suite, std::uint64_t seed)
    {
        ValidationReport rep;
        const bool all = suite == "all";
        bool known = all;
        if (all || suite == "quantizer")
            quantizer_suite(rep, seed), known = true;
        if (all || suite == "lemmas")
            lemmas_suite(rep, seed), known = true;
        if (all || suite == "bounds")
            bounds_suite(rep, seed), known = true;
        if (all || suite == "rate")
            rate_suite(rep, seed), known = true;
        if (!known)
            throw std::invalid_argument("unknown validation suite '" + suite + "'");
        return rep;
    }

} // namespace mmwq
