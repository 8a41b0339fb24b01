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

#include <CLI11.hpp>

#include "mmwq/closed_form.hpp"
#include "mmwq/config.hpp"
#include "mmwq/experiment.hpp"
#include "mmwq/rate.hpp"
#include "mmwq/training.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace
{
    struct Common
    {
        std::string config;
        std::vector<std::string> sets;
        std::uint64_t seed = 0;
        bool seed_given = false;
        int trials = 0;
        std::string out;
        std::string mode = "semi";
    };

    // --set key=value, value is numeric
    void apply_sets(mmwq::SystemConfig &cfg, const std::vector<std::string> &sets)
    {
        for (const auto &s : sets)
        {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects key=value, got '" + s + "'");
            const std::string key = s.substr(0, eq), val = s.substr(eq + 1);
            if (key == "snr_db" || key == "pilot_snr_db")
                mmwq::set_parameter(cfg, key, std::stod(val));
            else
            {
                mmwq::set_config_field(cfg, key, val);
                if (key == "adc_bits")
                    cfg.rho_ad.reset();
                else if (key == "rho_ad")
                    cfg.adc_bits.reset();
            }
        }
    }

    mmwq::SystemConfig load(const Common &c)
    {
        mmwq::SystemConfig cfg;
        if (!c.config.empty())
            cfg = mmwq::load_config(c.config);
        apply_sets(cfg, c.sets);
        if (c.seed_given)
            cfg.seed = c.seed;
        auto v = mmwq::validate_config(cfg);
        for (const auto &w : v.warnings)
            std::cerr << "warning: " << w << '\n';
        if (!v.ok())
        {
            for (const auto &e : v.errors)
                std::cerr << "error: " << e << '\n';
            throw std::invalid_argument("invalid configuration");
        }
        return v.config;
    }

    std::string num(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.10g", v);
        return buf;
    }

    void print_bound(const mmwq::SystemConfig &cfg, bool csv)
    {
        const auto b = mmwq::lower_bound_rate(cfg);
        if (csv)
        {
            std::cout << "L,K,N,M,rho,c,lambda,mu,eta1,eta2,eta3,P_u,P_c,P_n,P_q,P_e,R_LB,R_inf,R_LB_s,xi1,R_LB_1,xi2,R_LB_2\n";
            const double vals[] = {double(cfg.L), double(cfg.K), double(cfg.N), double(cfg.M), cfg.rho(), b.in.c,
                                   b.in.lambda, b.in.mu, b.in.eta1, b.in.eta2, b.in.eta3, b.P_u, b.P_c, b.P_n,
                                   b.P_q, b.P_e, b.R_LB, b.R_inf, b.R_LB_s, b.xi1, b.R_LB_1, b.xi2, b.R_LB_2};
            for (std::size_t i = 0; i < std::size(vals); ++i)
                std::cout << (i ? "," : "") << num(vals[i]);
            std::cout << '\n';
            return;
        }
        auto line = [](const char *name, double v) { std::printf("%-8s %18.10g\n", name, v); };
        line("rho", cfg.rho());
        line("c", b.in.c);
        line("lambda", b.in.lambda);
        line("mu", b.in.mu);
        line("eta1", b.in.eta1);
        line("eta2", b.in.eta2);
        line("eta3", b.in.eta3);
        line("P_u", b.P_u);
        line("P_c", b.P_c);
        line("P_n", b.P_n);
        line("P_q", b.P_q);
        line("P_e", b.P_e);
        line("R_LB", b.R_LB);
        line("R_inf", b.R_inf);
        if (cfg.L == 1)
            line("R_LB_s", b.R_LB_s);
        line("xi1", b.xi1);
        line("R_LB_1", b.R_LB_1);
        line("xi2", b.xi2);
        line("R_LB_2", b.R_LB_2);
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mmwq: uplink rates of multi-cell mmWave massive MIMO with low-precision ADCs"};
    app.require_subcommand(1);

    Common c;
    auto add_common = [&](CLI::App *sub, bool with_rate) {
        sub->add_option("--config", c.config, "JSON config file");
        sub->add_option("--set", c.sets, "override, key=value (repeatable)")->take_all();
        sub->add_option("--seed", c.seed, "RNG seed")->each([&](const std::string &) { c.seed_given = true; });
        if (with_rate)
        {
            sub->add_option("--trials", c.trials, "Monte-Carlo trials");
            sub->add_option("--out", c.out, "CSV output path");
            sub->add_option("--mode", c.mode, "semi or symbol")->check(CLI::IsMember({"semi", "symbol"}));
        }
    };

    auto *bound = app.add_subcommand("bound", "closed-form lower bound and its terms");
    add_common(bound, false);
    bool bound_csv = false;
    bound->add_flag("--csv", bound_csv, "print one CSV row");

    auto *simulate = app.add_subcommand("simulate", "Monte-Carlo ergodic rate for one config");
    add_common(simulate, true);

    auto *sweep = app.add_subcommand("sweep", "run a sweep or figure preset");
    add_common(sweep, true);
    std::string plot_path;
    sweep->add_option("--plot", plot_path, "also write a gnuplot script");

    auto *validate = app.add_subcommand("validate", "property checks");
    std::string suite = "all";
    std::uint64_t vseed = 1;
    validate->add_option("--suite", suite, "quantizer, lemmas, bounds, rate or all")
        ->check(CLI::IsMember({"quantizer", "lemmas", "bounds", "rate", "all"}));
    validate->add_option("--seed", vseed, "RNG seed");

    auto *codebook = app.add_subcommand("codebook", "phase codebook and gain bound");
    int cb_M = 2, cb_B = 6;
    codebook->add_option("--M", cb_M, "user antennas")->check(CLI::PositiveNumber);
    codebook->add_option("--B", cb_B, "phase-shifter bits")->check(CLI::Range(0, 24));

    auto *plot = app.add_subcommand("plot", "gnuplot script for a sweep CSV");
    std::string plot_csv, plot_preset;
    plot->add_option("csv", plot_csv, "sweep CSV")->required();
    plot->add_option("--preset", plot_preset, "fig2..fig9")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*bound)
            print_bound(load(c), bound_csv);
        else if (*simulate)
        {
            const auto cfg = load(c);
            mmwq::RateOptions opt;
            opt.mode = mmwq::parse_rate_mode(c.mode);
            const int trials = c.trials > 0 ? c.trials : 2000;
            const auto rep = mmwq::ergodic_rate(cfg, trials, opt);
            const auto b = mmwq::lower_bound_rate(cfg);
            mmwq::SweepRow row;
            row.scenario_id = "simulate";
            row.cfg = cfg;
            row.trials = trials;
            row.rate_mc = rep.rate_mc;
            row.ci95 = rep.ci95;
            row.rate_lb = b.R_LB;
            if (cfg.L == 1)
                row.rate_lb_s = b.R_LB_s, row.xi1 = b.xi1, row.xi2 = b.xi2;
            else
                row.r_inf = b.R_inf;
            if (c.out.empty())
                mmwq::write_csv(std::cout, {row});
            else
            {
                std::ofstream f(c.out);
                mmwq::write_csv(f, {row});
            }
        }
        else if (*sweep)
        {
            if (c.config.empty())
                throw std::invalid_argument("sweep needs --config <preset.json>");
            auto spec = mmwq::load_sweep(c.config);
            apply_sets(spec.base, c.sets);
            if (c.seed_given)
                spec.base.seed = c.seed;
            if (c.trials > 0)
                spec.trials = c.trials;
            if (sweep->count("--mode"))
                spec.rate.mode = mmwq::parse_rate_mode(c.mode);
            const auto rows = mmwq::run_sweep(spec);
            if (c.out.empty())
                mmwq::write_csv(std::cout, rows);
            else
            {
                {
                    std::ofstream f(c.out);
                    mmwq::write_csv(f, rows);
                }
                if (!plot_path.empty())
                {
                    std::ofstream p(plot_path);
                    p << mmwq::emit_plot_script(c.out, spec.scenario_id);
                }
            }
        }
        else if (*validate)
        {
            const auto rep = mmwq::validate(suite, vseed);
            mmwq::print_report(std::cout, rep);
            return rep.all_passed() ? 0 : 1;
        }
        else if (*codebook)
        {
            const double zeta = std::numbers::pi / std::ldexp(1.0, cb_B + 1);
            const auto psi = mmwq::build_codebook(cb_B);
            std::printf("# M=%d B=%d zeta=%.12g entries=%zu\n", cb_M, cb_B, zeta, psi.size());
            if (zeta <= 2.0 / cb_M)
                std::printf("# gain bounds: %.12g <= |c| <= %.12g\n", mmwq::gain_lower_bound(cb_M, zeta),
                            std::sqrt(double(cb_M)));
            else
                std::printf("# gain bounds: |c| <= %.12g (lower bound not asserted, zeta > 2/M)\n",
                            std::sqrt(double(cb_M)));
            for (std::size_t i = 0; i < psi.size(); ++i)
                std::printf("%zu,%.15g\n", i, psi[i]);
        }
        else if (*plot)
            std::cout << mmwq::emit_plot_script(plot_csv, plot_preset);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
