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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace mmwq
{
    using json = nlohmann::json;

    namespace
    {
        std::string fmt(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.10g", v);
            return buf;
        }

        int as_integer(const std::string &name, double v)
        {
            if (v != std::floor(v) || std::abs(v) > 2e9)
                throw std::invalid_argument("parameter '" + name + "' needs an integer value");
            return int(v);
        }

        double db(double ratio) { return 10.0 * std::log10(ratio); }

        std::vector<std::string> split_csv_line(const std::string &line)
        {
            std::vector<std::string> out;
            std::string cur;
            for (char ch : line)
            {
                if (ch == ',')
                {
                    out.push_back(cur);
                    cur.clear();
                }
                else if (ch != '\r')
                    cur += ch;
            }
            out.push_back(cur);
            return out;
        }
    } // namespace

    const std::vector<std::string> &sweep_axes()
    {
        static const std::vector<std::string> axes = {"K", "N", "M", "adc_bits", "snr_db", "pilot_snr_db",
                                                      "L", "B", "tau", "beta_inter"};
        return axes;
    }

    void set_parameter(SystemConfig &cfg, const std::string &name, double v)
    {
        if (name == "snr_db")
            cfg.p_t = cfg.sigma_n2 * std::pow(10.0, v / 10.0);
        else if (name == "pilot_snr_db")
            cfg.p_p = cfg.sigma_n2 * std::pow(10.0, v / 10.0);
        else if (name == "L")
            cfg.L = as_integer(name, v);
        else if (name == "K")
            cfg.K = as_integer(name, v);
        else if (name == "N")
            cfg.N = as_integer(name, v);
        else if (name == "M")
            cfg.M = as_integer(name, v);
        else if (name == "B")
            cfg.B = as_integer(name, v);
        else if (name == "tau")
            cfg.tau = as_integer(name, v);
        else if (name == "adc_bits")
        {
            cfg.adc_bits = as_integer(name, v);
            cfg.rho_ad.reset();
        }
        else if (name == "rho_ad")
        {
            cfg.rho_ad = v;
            cfg.adc_bits.reset();
        }
        else if (name == "p_t")
            cfg.p_t = v;
        else if (name == "p_p")
            cfg.p_p = v;
        else if (name == "sigma_n2")
            cfg.sigma_n2 = v;
        else if (name == "beta_inter")
            cfg.beta_inter = v;
        else if (name == "antenna_spacing_ratio")
            cfg.antenna_spacing_ratio = v;
        else if (name == "rate_log_base")
            cfg.rate_log_base = v;
        else if (name == "seed")
        {
            if (v < 0 || v != std::floor(v))
                throw std::invalid_argument("seed must be a non-negative integer");
            cfg.seed = std::uint64_t(v);
        }
        else
            throw std::invalid_argument("unknown parameter '" + name + "'");
    }

    namespace
    {
        PilotRule parse_pilot_rule(const std::string &r)
        {
            if (r == "fixed")
                return PilotRule::fixed;
            if (r == "tau_times_data")
                return PilotRule::tau_times_data;
            throw std::invalid_argument("unknown pilot_rule '" + r + "'");
        }

        void read_sweep_fields(const json &doc, SweepSpec &s)
        {
            for (auto it = doc.begin(); it != doc.end(); ++it)
            {
                const auto &key = it.key();
                const auto &v = it.value();
                if (key == "scenario_id")
                    s.scenario_id = v.get<std::string>();
                else if (key == "base")
                    s.base = config_from_json(v.dump());
                else if (key == "axis")
                    s.axis = v.get<std::string>();
                else if (key == "values")
                    s.values = v.get<std::vector<double>>();
                else if (key == "trials")
                    s.trials = v.get<int>();
                else if (key == "outputs")
                    s.outputs = v.get<std::vector<std::string>>();
                else if (key == "mode")
                    s.rate.mode = parse_rate_mode(v.get<std::string>());
                else if (key == "pilot_rule")
                    s.pilot = parse_pilot_rule(v.get<std::string>());
                else if (key == "series")
                {
                    for (const auto &e : v)
                    {
                        SeriesSpec ss;
                        for (auto f = e.begin(); f != e.end(); ++f)
                        {
                            if (f.key() == "id")
                                ss.id = f.value().get<std::string>();
                            else if (f.key() == "set")
                            {
                                SystemConfig scratch;
                                for (auto g = f.value().begin(); g != f.value().end(); ++g)
                                {
                                    set_parameter(scratch, g.key(), g.value().get<double>());
                                    ss.set.emplace_back(g.key(), g.value().get<double>());
                                }
                            }
                            else if (f.key() == "pilot_rule")
                                ss.pilot = parse_pilot_rule(f.value().get<std::string>());
                            else
                                throw std::invalid_argument("unknown series field '" + f.key() + "'");
                        }
                        if (ss.id.empty())
                            throw std::invalid_argument("series entries need an id");
                        s.series.push_back(std::move(ss));
                    }
                }
                else if (key == "notes")
                {
                    if (v.is_string())
                        s.notes.push_back(v.get<std::string>());
                    else
                        s.notes = v.get<std::vector<std::string>>();
                }
                else
                    throw std::invalid_argument("unknown sweep field '" + key + "'");
            }
        }
    } // namespace

    SweepSpec sweep_from_json(const std::string &text)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw FormatError(std::string("sweep file is not valid JSON: ") + e.what());
        }
        if (!doc.is_object())
            throw FormatError("sweep file must be a JSON object");

        SweepSpec s;
        try
        {
            read_sweep_fields(doc, s);
        }
        catch (const json::exception &e)
        {
            throw FormatError(std::string("sweep file has a field of the wrong type: ") + e.what());
        }
        if (std::find(sweep_axes().begin(), sweep_axes().end(), s.axis) == sweep_axes().end())
            throw std::invalid_argument("unknown sweep axis '" + s.axis + "'");
        if (s.values.empty())
            throw std::invalid_argument("sweep values must not be empty");
        return s;
    }

    SweepSpec load_sweep(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open sweep file " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        return sweep_from_json(ss.str());
    }

    const std::vector<std::string> &csv_columns()
    {
        static const std::vector<std::string> cols = {
            "scenario_id", "L",     "K",  "N",     "M",    "bits", "B",    "tau",     "beta",  "snr_db",
            "pilot_snr_db", "trials", "seed", "rate_mc", "ci95", "rate_lb", "rate_lb_s", "xi1", "xi2", "r_inf"};
        return cols;
    }

    SystemConfig sweep_point(const SweepSpec &spec, const SeriesSpec *series, double value)
    {
        if (std::find(sweep_axes().begin(), sweep_axes().end(), spec.axis) == sweep_axes().end())
            throw std::invalid_argument("unknown sweep axis '" + spec.axis + "'");
        SystemConfig cfg = spec.base;
        if (series)
            for (const auto &[k, v] : series->set)
                set_parameter(cfg, k, v);
        set_parameter(cfg, spec.axis, value);
        cfg = validated(cfg);
        const PilotRule rule = series && series->pilot ? *series->pilot : spec.pilot;
        if (rule == PilotRule::tau_times_data)
        {
            if (spec.axis == "pilot_snr_db")
                throw std::invalid_argument("pilot_snr_db axis conflicts with the tau_times_data pilot rule");
            cfg.p_p = double(cfg.pilot_length()) * cfg.p_t;
            cfg = validated(cfg);
        }
        return cfg;
    }

    std::vector<SweepRow> run_sweep(const SweepSpec &spec)
    {
        if (spec.values.empty())
            throw std::invalid_argument("sweep values must not be empty");
        if (std::find(sweep_axes().begin(), sweep_axes().end(), spec.axis) == sweep_axes().end())
            throw std::invalid_argument("unknown sweep axis '" + spec.axis + "'");
        auto wanted = [&](const char *name) {
            return spec.outputs.empty() ||
                   std::find(spec.outputs.begin(), spec.outputs.end(), std::string(name)) != spec.outputs.end();
        };
        const bool want_rate = (wanted("rate_mc") || wanted("ci95")) && spec.trials > 0;

        std::vector<const SeriesSpec *> series;
        if (spec.series.empty())
            series.push_back(nullptr);
        else
            for (const auto &s : spec.series)
                series.push_back(&s);

        std::vector<SweepRow> rows;
        for (const auto *s : series)
            for (double v : spec.values)
            {
                SweepRow row;
                row.scenario_id = s ? spec.scenario_id + "_" + s->id : spec.scenario_id;
                row.cfg = sweep_point(spec, s, v);
                row.trials = want_rate ? spec.trials : 0;
                if (want_rate)
                {
                    const auto rep = ergodic_rate(row.cfg, spec.trials, spec.rate);
                    if (wanted("rate_mc"))
                        row.rate_mc = rep.rate_mc;
                    if (wanted("ci95"))
                        row.ci95 = rep.ci95;
                }
                const auto b = lower_bound_rate(row.cfg);
                if (wanted("rate_lb"))
                    row.rate_lb = b.R_LB;
                if (row.cfg.L == 1)
                {
                    if (wanted("rate_lb_s"))
                        row.rate_lb_s = b.R_LB_s;
                    if (wanted("xi1"))
                        row.xi1 = b.xi1;
                    if (wanted("xi2"))
                        row.xi2 = b.xi2;
                }
                else if (wanted("r_inf"))
                    row.r_inf = b.R_inf;
                rows.push_back(std::move(row));
            }
        return rows;
    }

    void write_csv(std::ostream &out, const std::vector<SweepRow> &rows)
    {
        const double base = rows.empty() ? 2.0 : rows.front().cfg.rate_log_base;
        if (base == 2.0)
            out << "# rate columns in bits/s/Hz (log base 2)\n";
        else
            out << "# rate columns use log base " << fmt(base) << "\n";
        const auto &cols = csv_columns();
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << (i ? "," : "") << cols[i];
        out << '\n';
        auto opt = [](const std::optional<double> &v) { return v ? fmt(*v) : std::string(); };
        for (const auto &r : rows)
        {
            const auto &c = r.cfg;
            out << r.scenario_id << ',' << c.L << ',' << c.K << ',' << c.N << ',' << c.M << ','
                << (c.adc_bits ? std::to_string(*c.adc_bits) : std::string()) << ',' << c.bits_B() << ','
                << c.pilot_length() << ',' << fmt(c.beta()) << ',' << fmt(db(c.gamma_t())) << ','
                << fmt(db(c.gamma_p())) << ',' << r.trials << ',' << c.seed << ',' << opt(r.rate_mc) << ','
                << opt(r.ci95) << ',' << opt(r.rate_lb) << ',' << opt(r.rate_lb_s) << ',' << opt(r.xi1) << ','
                << opt(r.xi2) << ',' << opt(r.r_inf) << '\n';
        }
    }

    std::string preset_axis(const std::string &preset)
    {
        static const std::map<std::string, std::string> axes = {
            {"fig2", "K"},      {"fig3", "snr_db"}, {"fig4", "snr_db"}, {"fig5", "M"},
            {"fig6", "snr_db"}, {"fig7", "snr_db"}, {"fig8", "snr_db"}, {"fig9", "K"}};
        auto it = axes.find(preset);
        if (it == axes.end())
            throw std::invalid_argument("unknown preset '" + preset + "'");
        return it->second;
    }

    std::string emit_plot_script(const std::string &csv_path, const std::string &preset)
    {
        const std::string axis = preset_axis(preset);
        std::ifstream in(csv_path);
        if (!in)
            throw FormatError("cannot open " + csv_path);

        std::string line;
        std::vector<std::string> header;
        while (std::getline(in, line))
        {
            if (line.empty() || line[0] == '#')
                continue;
            header = split_csv_line(line);
            break;
        }
        if (header.empty())
            throw FormatError(csv_path + ": missing header");
        auto column = [&](const std::string &name) {
            auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end())
                throw FormatError(csv_path + ": missing column '" + name + "'");
            return std::size_t(it - header.begin());
        };
        const auto c_id = column("scenario_id"), c_x = column(axis);
        const auto c_mc = column("rate_mc"), c_lb = column("rate_lb");

        std::vector<std::string> order;
        std::map<std::string, std::vector<std::string>> data;
        std::size_t lineno = 1;
        while (std::getline(in, line))
        {
            ++lineno;
            if (line.empty() || line[0] == '#')
                continue;
            const auto f = split_csv_line(line);
            if (f.size() != header.size())
                throw FormatError(csv_path + ": row " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
                                  " fields, expected " + std::to_string(header.size()));
            if (f[c_x].empty())
                throw FormatError(csv_path + ": row " + std::to_string(lineno) + " has no " + axis + " value");
            if (!data.count(f[c_id]))
                order.push_back(f[c_id]);
            data[f[c_id]].push_back(f[c_x] + "," + f[c_mc] + "," + f[c_lb]);
        }
        if (order.empty())
            throw FormatError(csv_path + ": no data rows");

        std::ostringstream s;
        s << "# gnuplot script for " << preset << ", data from " << csv_path << "\n";
        s << "# set terminal pngcairo size 800,600; set output '" << preset << ".png'\n";
        s << "set datafile separator ','\n";
        s << "set datafile missing ''\n";
        s << "set xlabel '" << (axis == "snr_db" ? "data SNR (dB)" : axis == "pilot_snr_db" ? "pilot SNR (dB)" : axis)
          << "'\n";
        s << "set ylabel 'Achievable rate (bits/s/Hz)'\n";
        s << "set grid\nset key outside right\n";
        if (axis == "K" || axis == "N" || axis == "M")
            s << "set xtics nomirror\n";
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            s << "$S" << i << " << EOD\n";
            for (const auto &row : data[order[i]])
                s << row << "\n";
            s << "EOD\n";
        }
        s << "plot ";
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            if (i)
                s << ", \\\n     ";
            s << "$S" << i << " using 1:2 with linespoints lc " << i + 1 << " pt 7 title '" << order[i]
              << " rate_mc', \\\n     $S" << i << " using 1:3 with lines dt 2 lc " << i + 1 << " title '" << order[i]
              << " rate_lb'";
        }
        s << "\n";
        return s.str();
    }

    bool ValidationReport::all_passed() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.passed; });
    }

    void print_report(std::ostream &out, const ValidationReport &rep)
    {
        for (const auto &c : rep.checks)
            out << (c.passed ? "PASS" : "FAIL") << " suite=" << c.suite << " check=" << c.name
                << " measured=" << fmt(c.measured) << " tolerance=" << fmt(c.tolerance)
                << (c.detail.empty() ? "" : " detail=\"" + c.detail + "\"") << '\n';
        out << (rep.all_passed() ? "ALL PASS" : "FAILURES") << " (" << rep.checks.size() << " checks)\n";
    }

} // namespace mmwq
