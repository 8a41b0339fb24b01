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

#ifndef MMWQ_QUANTIZER_HPP
#define MMWQ_QUANTIZER_HPP

#include "mmwq/config.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mmwq
{
    // MSE-optimal scalar quantizer for a unit-variance Gaussian
    struct LloydMaxCodebook
    {
        int bits = 0;
        std::vector<double> levels;     // 2^bits increasing reconstruction points
        std::vector<double> thresholds; // 2^bits - 1 cell boundaries
        double distortion = 0.0;        // normalized MSE
        int iterations = 0;
    };

    // Designed once per bit depth and cached. bits in 1..12.
    const LloydMaxCodebook &lloyd_max_codebook(int bits);

    // Runs the design from scratch (Newton iteration on the centroid conditions)
    LloydMaxCodebook design_lloyd_max(int bits);

    // Quantizes one real value for a Gaussian of standard deviation sd
    double quantize_real(double x, const LloydMaxCodebook &cb, double sd);

    // I and Q quantized independently, each component assumed to have variance input_variance / 2
    Eigen::VectorXcd lloyd_max_quantize(const Eigen::VectorXcd &samples, int bits, double input_variance);

    struct BussgangStats
    {
        double gain = 0.0;      // Re{E[q y*]} / E[|y|^2]
        double noise_var = 0.0; // E[|q - gain y|^2]
        double crosscorr = 0.0; // |E[(q - gain y) y*]| / E[|y|^2]
    };

    // Empirical decomposition q = gain y + d. Needs at least 1e4 samples.
    BussgangStats bussgang_decompose(const Eigen::VectorXcd &pre_quant, const Eigen::VectorXcd &post_quant);

    // Per-(j,l,k) tables indexed (j*L + l)*K + k
    using GainTable = std::vector<double>;

    struct BussgangModel
    {
        double rho_ad = 0.0;
        double gain = 1.0;      // 1 - rho_ad
        double sigma_q2 = 0.0;  // data phase
        double sigma_pq2 = 0.0; // pilot phase
    };

    // rho (1 - rho) (sigma_n^2 + P_t sum_lk beta |c|^2) at BS j
    double quant_noise_power_data(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas, int j);

    // Same with P_p / tau in place of P_t
    double quant_noise_power_pilot(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas, int j);

    BussgangModel bussgang_model(const SystemConfig &cfg, const GainTable &abs_c2, const GainTable &betas, int j);

} // namespace mmwq

#endif
