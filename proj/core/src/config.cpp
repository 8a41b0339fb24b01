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

#include "mmwq/config.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mmwq
{
    namespace
    {
        // Lloyd-Max distortion for a unit-variance Gaussian, 1..12 bits.
        // Regenerated by tests/test_distortion_table.cpp.
        constexpr std::array<double, 12> rho_table = {
            3.633802276324187e-01,
            1.174818478293e-01,
            3.454776078850e-02,
            9.501008008191e-03,
            2.504668355675e-03,
            6.442396653169e-04,
            1.634782299801e-04,
            4.118508286654e-05,
            1.033683111425e-05,
            2.589375837339e-06,
            6.479989041939e-07,
            1.620824432506e-07,
        };

        using json = nlohmann::json;

        int as_int(const json &v, const std::string &key)
        {
            if (!v.is_number_integer())
                throw std::invalid_argument("config field '" + key + "' must be an integer");
            return v.get<int>();
        }

        double as_double(const json &v, const std::string &key)
        {
            if (!v.is_number())
                throw std::invalid_argument("config field '" + key + "' must be a number");
            return v.get<double>();
        }

        void apply_field(SystemConfig &c, const std::string &key, const json &v)
        {
            const bool unset = v.is_null();
            if (key == "L")
                c.L = as_int(v, key);
            else if (key == "K")
                c.K = as_int(v, key);
            else if (key == "N")
                c.N = as_int(v, key);
            else if (key == "M")
                c.M = as_int(v, key);
            else if (key == "B")
                c.B = unset ? std::optional<int>() : as_int(v, key);
            else if (key == "tau")
                c.tau = unset ? std::optional<int>() : as_int(v, key);
            else if (key == "adc_bits")
                c.adc_bits = unset ? std::optional<int>() : as_int(v, key);
            else if (key == "rho_ad")
                c.rho_ad = unset ? std::optional<double>() : as_double(v, key);
            else if (key == "p_t")
                c.p_t = as_double(v, key);
            else if (key == "p_p")
                c.p_p = as_double(v, key);
            else if (key == "sigma_n2")
                c.sigma_n2 = as_double(v, key);
            else if (key == "beta_inter")
                c.beta_inter = unset ? std::optional<double>() : as_double(v, key);
            else if (key == "antenna_spacing_ratio")
                c.antenna_spacing_ratio = unset ? std::optional<double>() : as_double(v, key);
            else if (key == "rate_log_base")
                c.rate_log_base = as_double(v, key);
            else if (key == "seed")
            {
                if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
                    throw std::invalid_argument("config field 'seed' must be a non-negative integer");
                c.seed = v.get<std::uint64_t>();
            }
            else
                throw std::invalid_argument("unknown config field '" + key + "'");
        }
    } // namespace

    double SystemConfig::zeta() const
    {
        return std::numbers::pi / std::ldexp(1.0, bits_B() + 1);
    }

    double SystemConfig::rho() const
    {
        if (rho_ad)
            return *rho_ad;
        if (adc_bits)
            return distortion_factor(*adc_bits);
        throw std::invalid_argument("config has neither adc_bits nor rho_ad");
    }

    bool SystemConfig::operator==(const SystemConfig &o) const
    {
        return L == o.L && K == o.K && N == o.N && M == o.M && B == o.B && tau == o.tau &&
               adc_bits == o.adc_bits && rho_ad == o.rho_ad && p_t == o.p_t && p_p == o.p_p &&
               sigma_n2 == o.sigma_n2 && beta_inter == o.beta_inter &&
               antenna_spacing_ratio == o.antenna_spacing_ratio && rate_log_base == o.rate_log_base &&
               seed == o.seed && warnings == o.warnings;
    }

    double distortion_factor(int bits)
    {
        if (bits < 1 || bits > 12)
            throw std::invalid_argument("distortion_factor: bits must be in 1..12");
        return rho_table[std::size_t(bits - 1)];
    }

    ValidationResult validate_config(const SystemConfig &cfg)
    {
        ValidationResult r;
        SystemConfig c = cfg;
        auto &err = r.errors;

        if (c.L < 1) err.push_back("L must be >= 1");
        if (c.K < 1) err.push_back("K must be >= 1");
        if (c.N < 1) err.push_back("N must be >= 1");
        if (c.M < 1) err.push_back("M must be >= 1");

        if (!c.B) c.B = 6;
        if (*c.B < 0) err.push_back("B must be >= 0");
        if (*c.B > 24) err.push_back("B must be <= 24");

        if (!c.tau) c.tau = c.K;
        if (*c.tau < c.K) err.push_back("tau < K: pilots cannot be orthogonal");

        if (c.adc_bits && c.rho_ad)
            err.push_back("adc_bits and rho_ad are mutually exclusive");
        else if (!c.adc_bits && !c.rho_ad)
            err.push_back("one of adc_bits or rho_ad is required");
        if (c.adc_bits && (*c.adc_bits < 1 || *c.adc_bits > 12))
            err.push_back("adc_bits must be in 1..12");
        if (c.rho_ad && !(*c.rho_ad >= 0.0 && *c.rho_ad < 1.0))
            err.push_back("rho_ad must be in [0,1)");

        if (!(c.p_t > 0.0) || !std::isfinite(c.p_t)) err.push_back("p_t must be positive");
        if (!(c.p_p > 0.0) || !std::isfinite(c.p_p)) err.push_back("p_p must be positive");
        if (!(c.sigma_n2 > 0.0) || !std::isfinite(c.sigma_n2)) err.push_back("sigma_n2 must be positive");

        if (!c.beta_inter) c.beta_inter = 0.1;
        if (!(*c.beta_inter > 0.0 && *c.beta_inter < 1.0)) err.push_back("beta_inter must be in (0,1)");

        if (!c.antenna_spacing_ratio) c.antenna_spacing_ratio = 0.5;
        if (!(*c.antenna_spacing_ratio > 0.0) || !std::isfinite(*c.antenna_spacing_ratio))
            err.push_back("antenna_spacing_ratio must be positive");

        if (!(c.rate_log_base > 1.0) || !std::isfinite(c.rate_log_base))
            err.push_back("rate_log_base must be > 1");

        c.warnings.clear();
        if (c.M >= 1 && *c.B >= 0 && *c.B <= 24 && !c.lemma1_applies())
            c.warnings.push_back("zeta > 2/M: lower beamforming gain bound not asserted");

        r.warnings = c.warnings;
        r.config = std::move(c);
        return r;
    }

    SystemConfig validated(const SystemConfig &cfg)
    {
        auto r = validate_config(cfg);
        if (!r.ok())
        {
            std::string msg = "invalid config:";
            for (const auto &e : r.errors)
                msg += " " + e + ";";
            throw std::invalid_argument(msg);
        }
        return r.config;
    }

    const std::vector<std::string> &config_field_names()
    {
        static const std::vector<std::string> names = {
            "L", "K", "N", "M", "B", "tau", "adc_bits", "rho_ad", "p_t", "p_p",
            "sigma_n2", "beta_inter", "antenna_spacing_ratio", "rate_log_base", "seed"};
        return names;
    }

    SystemConfig config_from_json(const std::string &text)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
        }
        if (!doc.is_object())
            throw std::invalid_argument("config must be a JSON object");
        SystemConfig c;
        for (auto it = doc.begin(); it != doc.end(); ++it)
            apply_field(c, it.key(), it.value());
        return c;
    }

    SystemConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open config file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return config_from_json(ss.str());
    }

    std::string config_to_json(const SystemConfig &c)
    {
        json j;
        j["L"] = c.L;
        j["K"] = c.K;
        j["N"] = c.N;
        j["M"] = c.M;
        if (c.B) j["B"] = *c.B;
        if (c.tau) j["tau"] = *c.tau;
        if (c.adc_bits) j["adc_bits"] = *c.adc_bits;
        if (c.rho_ad) j["rho_ad"] = *c.rho_ad;
        j["p_t"] = c.p_t;
        j["p_p"] = c.p_p;
        j["sigma_n2"] = c.sigma_n2;
        if (c.beta_inter) j["beta_inter"] = *c.beta_inter;
        if (c.antenna_spacing_ratio) j["antenna_spacing_ratio"] = *c.antenna_spacing_ratio;
        j["rate_log_base"] = c.rate_log_base;
        j["seed"] = c.seed;
        return j.dump(2);
    }

    void set_config_field(SystemConfig &cfg, const std::string &key, const std::string &value)
    {
        json v;
        try
        {
            v = json::parse(value);
        }
        catch (const json::parse_error &)
        {
            throw std::invalid_argument("cannot parse value '" + value + "' for field '" + key + "'");
        }
        apply_field(cfg, key, v);
    }

} // namespace mmwq
