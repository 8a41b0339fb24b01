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

#ifndef MMWQ_CLOSED_FORM_HPP
#define MMWQ_CLOSED_FORM_HPP

#include "mmwq/config.hpp"

#include <cstdint>

namespace mmwq
{
    inline constexpr double euler_gamma = 0.577215664901533;

    // Bessel function of the first kind, order zero. Absolute error below 1e-10.
    double bessel_j0(double x);

    // sin(x)/x with sinc(0) = 1
    double sinc(double x);

    // Lower bound on the intra-cell beamforming gain magnitude, sqrt(M) * sinc(M * pi * zeta / 2)
    double gain_lower_bound(int M, double zeta);

    // Closed-form large-N constants for steering-vector inner products
    double eta1(std::int64_t N);
    double eta2(std::int64_t N);
    double eta3(std::int64_t N);

    // Upper bound on eta3, used for very large N
    double eta3_upper(std::int64_t N);

    // N above which eta3 switches from the exact double sum to eta3_upper
    inline constexpr std::int64_t eta3_exact_limit = 100000;

    // Exact expectations for independent uniform angles at half-wavelength spacing
    double exact_inner_mean(std::int64_t N);  // E{h^H h'} = sum_n J0(n pi)^2
    double exact_inner_power(std::int64_t N); // E{|h^H h'|^2}
    double exact_triple(std::int64_t N);      // E{h1^H h2 h2^H h3}

    // sum_{m=1}^{N-1} sum_{n=0}^{N-m-1} J0(m pi) J0(n pi) J0((n+m) pi)
    double j0_triple_double_sum(std::int64_t N);

    struct BoundInputs
    {
        double c = 0.0;      // gain lower bound
        double lambda = 0.0; // c^2 + (K-1)M + beta(L-1)KM
        double mu = 0.0;     // sigma^2/((1-rho)P_p) + rho lambda/((1-rho)tau)
        double eta1 = 0.0, eta2 = 0.0, eta3 = 0.0;
        double euler_a = euler_gamma;
    };

    struct BoundReport
    {
        BoundInputs in;
        double P_u = 0.0, P_c = 0.0, P_n = 0.0, P_q = 0.0, P_e = 0.0;
        double R_LB = 0.0;
        double R_inf = 0.0;  // +inf for a single cell
        double R_LB_s = 0.0; // NaN unless L = 1
        double xi1 = 0.0, R_LB_1 = 0.0;
        double xi2 = 0.0, R_LB_2 = 0.0;
    };

    BoundInputs bound_inputs(const SystemConfig &cfg);

    // Multi-cell lower bound on the ergodic uplink rate with all five denominator terms
    BoundReport lower_bound_rate(const SystemConfig &cfg);

    // Limit of the lower bound for N -> infinity; +inf when L = 1
    double asymptotic_limit(const SystemConfig &cfg);
    double asymptotic_limit(int L, double beta, int M, double c, double log_base = 2.0);

    // Single-cell bound written in terms of the data and pilot SNRs. Requires L = 1.
    double single_cell_bound(const SystemConfig &cfg);

    struct ScalingApprox
    {
        double xi = 0.0;
        double rate = 0.0;
    };

    // Low data and pilot SNR
    ScalingApprox low_snr_approx(const SystemConfig &cfg);

    // Low data SNR with strong pilots
    ScalingApprox high_pilot_approx(const SystemConfig &cfg);

} // namespace mmwq

#endif
