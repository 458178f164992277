// SPDX-License-Identifier: Apache-2.0
//
// abp-sim: auxiliary beam pair angle estimation for mmWave MIMO links
// Copyright (C) 2026 The abp-sim contributors
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

#include "abp/sim/config.hpp"
#include "abp/sim/table.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <type_traits>

namespace abp::sim
{
    const std::vector<std::string> &experiment_ids()
    {
        static const std::vector<std::string> ids{"maee_vs_snr",    "maqe_bits",           "pilot_correlation",
                                                  "pilot_vs_tdm",   "norm_se_vs_snr",      "robustness_mismatch",
                                                  "robustness_xpd"};
        return ids;
    }

    double ExperimentConfig::gain_scale() const
    {
        return normalization == GainNormalization::array_gain ? array_gain_scale(arrays) : 1.0;
    }

    void ExperimentConfig::validate() const
    {
        auto fail = [](const std::string &field, const std::string &msg)
        { throw Error(ErrorCode::ConfigError, field + ": " + msg); };

        const auto &ids = experiment_ids();
        if (std::find(ids.begin(), ids.end(), experiment) == ids.end())
            fail("experiment", "unknown experiment '" + experiment + "'");
        if (trials < 1)
            fail("trials", "must be at least 1");
        if (threads < 1)
            fail("threads", "must be at least 1");
        if (snr_db.empty())
            fail("snr_db", "SNR grid is empty");
        try
        {
            arrays.validate();
        }
        catch (const Error &e)
        {
            fail("array", e.what());
        }
        try
        {
            ofdm.validate();
        }
        catch (const Error &e)
        {
            fail("ofdm", e.what());
        }
        if (!(sectors.azimuth > 0.0) || !(sectors.elevation > 0.0) || !(sectors.receive > 0.0))
            fail("coverage", "sector widths must be positive");
        if (n_nlos < 0)
            fail("channel.n_nlos", "must be non-negative");
        if (cluster.n_clusters < 1 || cluster.subpaths < 1)
            fail("channel.clusters", "need at least one cluster and one subpath");
        if (cluster.xp.chi < 0.0)
            fail("channel.chi", "must be non-negative");
        if (roots.empty())
            fail("pilot.roots", "root pool is empty");
        if (quant_bits < 1)
            fail("quantizer.bits", "must be at least 1");
        for (int b : quant_bits_sweep)
            if (b < 2)
                fail("quantizer.bits_sweep", "total bits must be at least 2 (one sign bit plus one offset bit)");
        if (quant_bits_sweep.empty())
            fail("quantizer.bits_sweep", "sweep is empty");
        for (int n : n_y_sweep)
            if (n < 1)
                fail("quantizer.n_y_sweep", "array sizes must be positive");
        if (n_y_sweep.empty())
            fail("quantizer.n_y_sweep", "sweep is empty");
        if (experiment == "pilot_vs_tdm" && roots.size() < 3)
            fail("pilot.roots", "the four-beam example needs three roots");
        if (n_s.empty() || n_s.size() != n_tx.size() || n_s.size() != m_rx.size())
            fail("probing", "n_s, n_tx and m_rx need the same number of entries");
        for (std::size_t i = 0; i < n_s.size(); ++i)
            if (n_s[i] < 1 || n_tx[i] < 1 || m_rx[i] < 1)
                fail("probing", "counts must be positive");
        if (overhead.epsilon_t < 1.0 || overhead.t_tot < 1)
            fail("overhead", "epsilon_t and t_tot must be at least 1");
        const bool needs_cross = experiment == "pilot_correlation" || experiment == "pilot_vs_tdm" ||
                                 experiment == "norm_se_vs_snr" || experiment == "robustness_mismatch" ||
                                 experiment == "robustness_xpd";
        if (needs_cross && !arrays.cross())
            fail("array.mode", "experiment '" + experiment + "' needs a cross-polarized array");
        if ((experiment == "robustness_mismatch" || experiment == "robustness_xpd") && sweep.empty())
            fail("sweep.values", "sweep is empty");
    }

    ExperimentConfig defaults_for(const std::string &experiment)
    {
        ExperimentConfig c;
        c.experiment = experiment;
        c.snr_db = parse_grid("-10:5:20");
        if (experiment == "maee_vs_snr" || experiment == "maqe_bits")
        {
            c.arrays = ArrayConfig{4, 8, 4, 0.5, 0.5, 0.5, PolarizationMode::co};
            c.ofdm = OfdmConfig::narrowband();
            if (experiment == "maqe_bits")
                c.snr_db = {10.0};
            return c;
        }

        c.arrays = ArrayConfig{4, 8, 8, 0.5, 0.5, 0.5, PolarizationMode::cross};
        if (experiment == "pilot_correlation" || experiment == "pilot_vs_tdm")
        {
            c.ofdm = OfdmConfig::profile(512, 64);
            c.snr_db = {20.0};
            c.trials = experiment == "pilot_correlation" ? 1 : 200;
            return c;
        }

        // desk-scale wideband profile
        c.ofdm = OfdmConfig::profile(256, 32);
        c.trials = 200;
        if (experiment == "robustness_mismatch" || experiment == "robustness_xpd")
        {
            c.snr_db = {0.0, 10.0, 20.0};
            c.n_s = {3};
            c.n_tx = {30};
            c.m_rx = {25};
            c.sweep = experiment == "robustness_mismatch" ? std::vector<double>{0, 10, 20, 30}
                                                          : std::vector<double>{0, 0.1, 0.2, 0.4};
        }
        return c;
    }

    std::vector<double> parse_grid(const std::string &raw)
    {
        std::string text;
        // accept the unicode minus sign
        for (std::size_t i = 0; i < raw.size(); ++i)
        {
            if (raw.compare(i, 3, "\xE2\x88\x92") == 0)
            {
                text += '-';
                i += 2;
            }
            else if (!std::isspace(static_cast<unsigned char>(raw[i])))
                text += raw[i];
        }
        auto num = [&](const std::string &s)
        {
            std::size_t used = 0;
            double v = 0.0;
            try
            {
                v = std::stod(s, &used);
            }
            catch (const std::exception &)
            {
                used = 0;
            }
            if (used != s.size() || s.empty())
                throw Error(ErrorCode::ParseError, "bad number '" + s + "' in grid '" + raw + "'");
            return v;
        };

        std::vector<double> out;
        if (text.empty())
            throw Error(ErrorCode::ParseError, "empty grid");
        if (text.find(':') != std::string::npos)
        {
            std::vector<std::string> parts;
            std::stringstream ss(text);
            std::string tok;
            while (std::getline(ss, tok, ':'))
                parts.push_back(tok);
            if (parts.size() != 3)
                throw Error(ErrorCode::ParseError, "range grid must be start:step:stop, got '" + raw + "'");
            const double a = num(parts[0]), step = num(parts[1]), b = num(parts[2]);
            if (step == 0.0 || (b - a) / step < 0.0)
                throw Error(ErrorCode::ParseError, "range grid '" + raw + "' does not progress");
            const int n = int(std::floor((b - a) / step + 1e-9)) + 1;
            for (int i = 0; i < n; ++i)
                out.push_back(a + i * step);
            return out;
        }
        std::stringstream ss(text);
        std::string tok;
        while (std::getline(ss, tok, ','))
            out.push_back(num(tok));
        return out;
    }

    namespace
    {
        std::string trim(const std::string &s)
        {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos)
                return "";
            const auto b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        }

        struct Entry
        {
            std::string key, value;
            int line;
        };

        [[noreturn]] void bad(const Entry &e, const std::string &msg)
        {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(e.line) + ", field '" + e.key + "': " + msg);
        }

        double as_double(const Entry &e)
        {
            const auto v = parse_grid(e.value);
            if (v.size() != 1)
                bad(e, "expected one number, got '" + e.value + "'");
            return v[0];
        }

        int as_int(const Entry &e)
        {
            const double v = as_double(e);
            if (v != std::floor(v) || std::abs(v) > 2e9)
                bad(e, "expected an integer, got '" + e.value + "'");
            return int(v);
        }

        std::vector<int> as_ints(const Entry &e)
        {
            std::vector<int> out;
            for (double v : parse_grid(e.value))
            {
                if (v != std::floor(v))
                    bad(e, "expected integers, got '" + e.value + "'");
                out.push_back(int(v));
            }
            if (out.empty())
                bad(e, "empty list");
            return out;
        }

        bool as_bool(const Entry &e)
        {
            if (e.value == "true" || e.value == "1" || e.value == "yes")
                return true;
            if (e.value == "false" || e.value == "0" || e.value == "no")
                return false;
            bad(e, "expected true or false, got '" + e.value + "'");
        }

        template <typename T>
        T as_enum(const Entry &e, const std::map<std::string, T> &choices)
        {
            auto it = choices.find(e.value);
            if (it == choices.end())
            {
                std::string names;
                for (const auto &[k, v] : choices)
                    names += (names.empty() ? "" : ", ") + k;
                bad(e, "expected one of {" + names + "}, got '" + e.value + "'");
            }
            return it->second;
        }

        using Setter = std::function<void(ExperimentConfig &, const Entry &)>;

        const std::map<std::string, Setter> &setters()
        {
            static const std::map<std::string, Setter> s{
                {"experiment", [](ExperimentConfig &, const Entry &) {}},
                {"seed", [](ExperimentConfig &c, const Entry &e)
                 {
                     try
                     {
                         c.seed = std::stoull(e.value);
                     }
                     catch (const std::exception &)
                     {
                         bad(e, "expected an unsigned integer");
                     }
                 }},
                {"trials", [](ExperimentConfig &c, const Entry &e) { c.trials = as_int(e); }},
                {"threads", [](ExperimentConfig &c, const Entry &e) { c.threads = as_int(e); }},
                {"snr_db", [](ExperimentConfig &c, const Entry &e) { c.snr_db = parse_grid(e.value); }},
                {"array.n_x", [](ExperimentConfig &c, const Entry &e) { c.arrays.n_x = as_int(e); }},
                {"array.n_y", [](ExperimentConfig &c, const Entry &e) { c.arrays.n_y = as_int(e); }},
                {"array.m_tot", [](ExperimentConfig &c, const Entry &e) { c.arrays.m_tot = as_int(e); }},
                {"array.spacing", [](ExperimentConfig &c, const Entry &e)
                 { c.arrays.d_tx = c.arrays.d_ty = c.arrays.d_r = as_double(e); }},
                {"array.d_tx", [](ExperimentConfig &c, const Entry &e) { c.arrays.d_tx = as_double(e); }},
                {"array.d_ty", [](ExperimentConfig &c, const Entry &e) { c.arrays.d_ty = as_double(e); }},
                {"array.d_r", [](ExperimentConfig &c, const Entry &e) { c.arrays.d_r = as_double(e); }},
                {"array.mode", [](ExperimentConfig &c, const Entry &e)
                 { c.arrays.mode = as_enum<PolarizationMode>(e, {{"co", PolarizationMode::co}, {"cross", PolarizationMode::cross}}); }},
                {"array.normalization", [](ExperimentConfig &c, const Entry &e)
                 { c.normalization = as_enum<GainNormalization>(e, {{"unit", GainNormalization::unit}, {"array_gain", GainNormalization::array_gain}}); }},
                {"coverage.azimuth_deg", [](ExperimentConfig &c, const Entry &e) { c.sectors.azimuth = deg2rad(as_double(e)); }},
                {"coverage.elevation_deg", [](ExperimentConfig &c, const Entry &e) { c.sectors.elevation = deg2rad(as_double(e)); }},
                {"coverage.receive_deg", [](ExperimentConfig &c, const Entry &e) { c.sectors.receive = deg2rad(as_double(e)); }},
                {"ofdm.n_subcarriers", [](ExperimentConfig &c, const Entry &e) { c.ofdm.n_subcarriers = as_int(e); }},
                {"ofdm.cp_length", [](ExperimentConfig &c, const Entry &e) { c.ofdm.cp_length = as_int(e); }},
                {"ofdm.subcarrier_spacing_khz", [](ExperimentConfig &c, const Entry &e) { c.ofdm.subcarrier_spacing = 1e3 * as_double(e); }},
                {"ofdm.pulse", [](ExperimentConfig &c, const Entry &e)
                 { c.ofdm.pulse = as_enum<PulseShape>(e, {{"unit_sample", PulseShape::unit_sample}, {"raised_cosine", PulseShape::raised_cosine}}); }},
                {"ofdm.rolloff", [](ExperimentConfig &c, const Entry &e) { c.ofdm.rolloff = as_double(e); }},
                {"channel.k_factor_db", [](ExperimentConfig &c, const Entry &e) { c.k_factor_db = as_double(e); }},
                {"channel.n_nlos", [](ExperimentConfig &c, const Entry &e) { c.n_nlos = as_int(e); }},
                {"channel.clusters", [](ExperimentConfig &c, const Entry &e) { c.cluster.n_clusters = as_int(e); }},
                {"channel.subpaths", [](ExperimentConfig &c, const Entry &e) { c.cluster.subpaths = as_int(e); }},
                {"channel.delay_spread_ns", [](ExperimentConfig &c, const Entry &e) { c.cluster.delay_spread = as_double(e) / 1e9; }},
                {"channel.angular_spread_deg", [](ExperimentConfig &c, const Entry &e) { c.cluster.angular_spread = deg2rad(as_double(e)); }},
                {"channel.chi", [](ExperimentConfig &c, const Entry &e) { c.cluster.xp.chi = as_double(e); }},
                {"channel.varsigma_deg", [](ExperimentConfig &c, const Entry &e) { c.cluster.xp.varsigma = deg2rad(as_double(e)); }},
                {"pilot.roots", [](ExperimentConfig &c, const Entry &e) { c.roots = as_ints(e); }},
                {"pilot.shift", [](ExperimentConfig &c, const Entry &e) { c.shift_p = as_int(e); }},
                {"pilot.layout", [](ExperimentConfig &c, const Entry &e)
                 { c.pilot_layout = as_enum<PilotLayout>(e, {{"analytic", PilotLayout::analytic}, {"dc_punctured", PilotLayout::dc_punctured}}); }},
                {"pilot.window", [](ExperimentConfig &c, const Entry &e) { c.window = as_int(e); }},
                {"quantizer.bits", [](ExperimentConfig &c, const Entry &e) { c.quant_bits = as_int(e); }},
                {"quantizer.bits_sweep", [](ExperimentConfig &c, const Entry &e) { c.quant_bits_sweep = as_ints(e); }},
                {"quantizer.n_y_sweep", [](ExperimentConfig &c, const Entry &e) { c.n_y_sweep = as_ints(e); }},
                {"quantizer.variant", [](ExperimentConfig &c, const Entry &e)
                 { c.variant = as_enum<DifferentialVariant>(e, {{"magnitude_sign", DifferentialVariant::magnitude_sign}, {"signed_offset", DifferentialVariant::signed_offset}}); }},
                {"probing.n_s", [](ExperimentConfig &c, const Entry &e) { c.n_s = as_ints(e); }},
                {"probing.n_tx", [](ExperimentConfig &c, const Entry &e) { c.n_tx = as_ints(e); }},
                {"probing.m_rx", [](ExperimentConfig &c, const Entry &e) { c.m_rx = as_ints(e); }},
                {"overhead.epsilon_t", [](ExperimentConfig &c, const Entry &e) { c.overhead.epsilon_t = as_double(e); }},
                {"overhead.t_tot", [](ExperimentConfig &c, const Entry &e) { c.overhead.t_tot = as_int(e); }},
                {"overhead.n_bm", [](ExperimentConfig &c, const Entry &e) { c.n_bm = as_int(e); }},
                {"overhead.m_bm", [](ExperimentConfig &c, const Entry &e) { c.m_bm = as_int(e); }},
                {"sweep.values", [](ExperimentConfig &c, const Entry &e) { c.sweep = parse_grid(e.value); }},
                {"estimator.inversion", [](ExperimentConfig &c, const Entry &e)
                 { c.inversion = as_enum<RatioInversion>(e, {{"closed_form", RatioInversion::closed_form}, {"array_factor", RatioInversion::array_factor}}); }},
                {"output.plots", [](ExperimentConfig &c, const Entry &e) { c.plots = as_bool(e); }},
            };
            return s;
        }
    }

    ExperimentConfig validate_config(const std::string &raw)
    {
        std::vector<Entry> entries;
        std::stringstream ss(raw);
        std::string line;
        int no = 0;
        std::string experiment = "maee_vs_snr";
        std::set<std::string> seen;
        while (std::getline(ss, line))
        {
            ++no;
            const auto hash = line.find('#');
            if (hash != std::string::npos)
                line = line.substr(0, hash);
            line = trim(line);
            if (line.empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw Error(ErrorCode::ParseError, "line " + std::to_string(no) + ": expected key = value");
            Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), no};
            if (e.key.empty())
                throw Error(ErrorCode::ParseError, "line " + std::to_string(no) + ": empty key");
            if (!setters().count(e.key))
                bad(e, "unknown key '" + e.key + "'");
            if (!seen.insert(e.key).second)
                bad(e, "duplicate key '" + e.key + "'");
            if (e.key == "experiment")
                experiment = e.value;
            entries.push_back(e);
        }

        const auto &ids = experiment_ids();
        if (std::find(ids.begin(), ids.end(), experiment) == ids.end())
        {
            for (const auto &e : entries)
                if (e.key == "experiment")
                    bad(e, "unknown experiment '" + experiment + "'");
        }

        ExperimentConfig cfg = defaults_for(experiment);
        for (const auto &e : entries)
        {
            setters().at(e.key)(cfg, e);
            cfg.explicit_keys.insert(e.key);
        }
        cfg.ofdm.sample_period = 1.0 / (double(cfg.ofdm.n_subcarriers) * cfg.ofdm.subcarrier_spacing);
        cfg.validate();
        return cfg;
    }

    std::string describe(const ExperimentConfig &c)
    {
        auto list = [](const auto &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                if constexpr (std::is_same_v<std::decay_t<decltype(v[i])>, double>)
                    s += (i ? "," : "") + fmt(v[i]);
                else
                    s += (i ? "," : "") + std::to_string(v[i]);
            }
            return s;
        };
        auto pick = [](bool first, const char *a, const char *b) { return first ? a : b; };

        std::ostringstream os;
        os << "experiment = " << c.experiment << "\nseed = " << c.seed << "\ntrials = " << c.trials
           << "\nthreads = " << c.threads << "\nsnr_db = " << list(c.snr_db);
        os << "\narray.n_x = " << c.arrays.n_x << "\narray.n_y = " << c.arrays.n_y << "\narray.m_tot = " << c.arrays.m_tot
           << "\narray.d_tx = " << fmt(c.arrays.d_tx) << "\narray.d_ty = " << fmt(c.arrays.d_ty)
           << "\narray.d_r = " << fmt(c.arrays.d_r) << "\narray.mode = " << pick(c.arrays.cross(), "cross", "co")
           << "\narray.normalization = " << pick(c.normalization == GainNormalization::unit, "unit", "array_gain");
        os << "\ncoverage.azimuth_deg = " << fmt(rad2deg(c.sectors.azimuth))
           << "\ncoverage.elevation_deg = " << fmt(rad2deg(c.sectors.elevation))
           << "\ncoverage.receive_deg = " << fmt(rad2deg(c.sectors.receive));
        os << "\nofdm.n_subcarriers = " << c.ofdm.n_subcarriers << "\nofdm.cp_length = " << c.ofdm.cp_length
           << "\nofdm.subcarrier_spacing_khz = " << fmt(c.ofdm.subcarrier_spacing / 1e3)
           << "\nofdm.pulse = " << pick(c.ofdm.pulse == PulseShape::unit_sample, "unit_sample", "raised_cosine")
           << "\nofdm.rolloff = " << fmt(c.ofdm.rolloff);
        os << "\nchannel.k_factor_db = " << fmt(c.k_factor_db) << "\nchannel.n_nlos = " << c.n_nlos
           << "\nchannel.clusters = " << c.cluster.n_clusters << "\nchannel.subpaths = " << c.cluster.subpaths
           << "\nchannel.delay_spread_ns = " << fmt(c.cluster.delay_spread * 1e9)
           << "\nchannel.angular_spread_deg = " << fmt(rad2deg(c.cluster.angular_spread))
           << "\nchannel.chi = " << fmt(c.cluster.xp.chi)
           << "\nchannel.varsigma_deg = " << fmt(rad2deg(c.cluster.xp.varsigma));
        os << "\npilot.roots = " << list(c.roots) << "\npilot.shift = " << c.shift_p
           << "\npilot.layout = " << pick(c.pilot_layout == PilotLayout::analytic, "analytic", "dc_punctured")
           << "\npilot.window = " << c.window;
        os << "\nquantizer.bits = " << c.quant_bits << "\nquantizer.bits_sweep = " << list(c.quant_bits_sweep)
           << "\nquantizer.n_y_sweep = " << list(c.n_y_sweep) << "\nquantizer.variant = "
           << pick(c.variant == DifferentialVariant::magnitude_sign, "magnitude_sign", "signed_offset");
        os << "\nprobing.n_s = " << list(c.n_s) << "\nprobing.n_tx = " << list(c.n_tx)
           << "\nprobing.m_rx = " << list(c.m_rx);
        os << "\noverhead.epsilon_t = " << fmt(c.overhead.epsilon_t) << "\noverhead.t_tot = " << c.overhead.t_tot
           << "\noverhead.n_bm = " << c.n_bm << "\noverhead.m_bm = " << c.m_bm;
        if (!c.sweep.empty())
            os << "\nsweep.values = " << list(c.sweep);
        os << "\nestimator.inversion = " << pick(c.inversion == RatioInversion::closed_form, "closed_form", "array_factor")
           << "\noutput.plots = " << pick(c.plots, "true", "false") << "\n";
        return os.str();
    }
}
