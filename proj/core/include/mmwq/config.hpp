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

#ifndef MMWQ_CONFIG_HPP
#define MMWQ_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mmwq
{
    // Scenario parameters. Optional fields are filled with defaults by validate_config.
    struct SystemConfig
    {
        int L = 1;                                   // cells
        int K = 1;                                   // users per cell
        int N = 64;                                  // BS antennas
        int M = 2;                                   // user antennas
        std::optional<int> B;                        // phase-shifter bits, default 6
        std::optional<int> tau;                      // pilot length, default K
        std::optional<int> adc_bits;                 // ADC resolution 1..12
        std::optional<double> rho_ad;                // explicit distortion factor, replaces adc_bits
        double p_t = 1.0;                            // data power (linear)
        double p_p = 1.0;                            // pilot power (linear)
        double sigma_n2 = 1.0;                       // noise power (linear)
        std::optional<double> beta_inter;            // inter-cell large-scale gain, default 0.1
        std::optional<double> antenna_spacing_ratio; // d / lambda, default 1/2
        double rate_log_base = 2.0;
        std::uint64_t seed = 1;

        std::vector<std::string> warnings; // filled by validate_config, not serialized

        // Accessors for validated configs
        int bits_B() const { return B.value_or(6); }
        int pilot_length() const { return tau.value_or(K); }
        double beta() const { return beta_inter.value_or(0.1); }
        double spacing() const { return antenna_spacing_ratio.value_or(0.5); }
        double zeta() const;          // pi / 2^(B+1)
        double rho() const;           // rho_ad or distortion_factor(adc_bits)
        double gamma_t() const { return p_t / sigma_n2; }
        double gamma_p() const { return p_p / sigma_n2; }
        bool lemma1_applies() const { return zeta() <= 2.0 / double(M); }

        bool operator==(const SystemConfig &other) const;
    };

    struct ValidationResult
    {
        SystemConfig config;
        std::vector<std::string> errors;
        std::vector<std::string> warnings;
        bool ok() const { return errors.empty(); }
    };

    // Fills defaults and collects every violation. Idempotent.
    ValidationResult validate_config(const SystemConfig &cfg);

    // Same as validate_config, but throws std::invalid_argument listing all errors.
    SystemConfig validated(const SystemConfig &cfg);

    // Lloyd-Max MSE distortion of a unit-variance Gaussian quantizer with 2^bits levels.
    double distortion_factor(int bits);

    // JSON round trip. Unknown keys and wrong types throw std::invalid_argument.
    SystemConfig config_from_json(const std::string &text);
    SystemConfig load_config(const std::string &path);
    std::string config_to_json(const SystemConfig &cfg);

    // Sets one field from its textual value, e.g. ("K", "8"). Throws on unknown keys.
    void set_config_field(SystemConfig &cfg, const std::string &key, const std::string &value);

    // Field names accepted in JSON documents.
    const std::vector<std::string> &config_field_names();

} // namespace mmwq

#endif
