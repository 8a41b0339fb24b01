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

#ifndef MMWQ_EXPERIMENT_HPP
#define MMWQ_EXPERIMENT_HPP

#include "mmwq/closed_form.hpp"
#include "mmwq/config.hpp"
#include "mmwq/rate.hpp"

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mmwq
{
    // Malformed CSV or sweep files
    class FormatError : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    enum class PilotRule
    {
        fixed,         // p_p as configured
        tau_times_data // pilot SNR = tau * data SNR
    };

    struct SeriesSpec
    {
        std::string id;
        std::vector<std::pair<std::string, double>> set;
        std::optional<PilotRule> pilot; // overrides the sweep-wide rule
    };

    struct SweepSpec
    {
        std::string scenario_id = "sweep";
        SystemConfig base;
        std::string axis; // K, N, M, adc_bits, snr_db, pilot_snr_db, L, B, tau, beta_inter
        std::vector<double> values;
        int trials = 2000;
        std::vector<std::string> outputs; // empty means all
        std::vector<SeriesSpec> series;   // empty means one series
        PilotRule pilot = PilotRule::fixed;
        RateOptions rate;
        std::vector<std::string> notes;
    };

    // Axis and override names understood by set_parameter
    const std::vector<std::string> &sweep_axes();

    // Sets a config field or one of the pseudo-fields snr_db / pilot_snr_db (relative to sigma_n2)
    void set_parameter(SystemConfig &cfg, const std::string &name, double value);

    SweepSpec sweep_from_json(const std::string &text);
    SweepSpec load_sweep(const std::string &path);

    struct SweepRow
    {
        std::string scenario_id;
        SystemConfig cfg; // validated
        int trials = 0;
        std::optional<double> rate_mc, ci95, rate_lb, rate_lb_s, xi1, xi2, r_inf;
    };

    // Column names in output order
    const std::vector<std::string> &csv_columns();

    // Builds the validated config for one point, applying series overrides, axis value and pilot rule
    SystemConfig sweep_point(const SweepSpec &spec, const SeriesSpec *series, double value);

    std::vector<SweepRow> run_sweep(const SweepSpec &spec);

    void write_csv(std::ostream &out, const std::vector<SweepRow> &rows);

    // gnuplot script with the data inlined; rate_mc solid, rate_lb dashed, one colour per series
    std::string emit_plot_script(const std::string &csv_path, const std::string &preset);

    // Axis column used for a named preset (fig2..fig9)
    std::string preset_axis(const std::string &preset);

    struct Check
    {
        std::string suite;
        std::string name;
        bool passed = false;
        double measured = 0.0;
        double tolerance = 0.0;
        std::string detail;
    };

    struct ValidationReport
    {
        std::vector<Check> checks;
        bool all_passed() const;
    };

    // Runs the module property checks of one suite: quantizer, lemmas, bounds, rate or all
    ValidationReport validate(const std::string &suite, std::uint64_t seed = 1);

    void print_report(std::ostream &out, const ValidationReport &rep);

} // namespace mmwq

#endif
