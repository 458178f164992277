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

#include "abp/channel.hpp"

#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace abp
{
    // Format:
    //   # abp-channel v1
    //   # key=value            (metadata, one per line)
    //   g_vv_re,g_vv_im,...    (header row)
    //   one row per path
    void write_channel_csv(std::ostream &os, const ChannelRealization &ch)
    {
        const auto &a = ch.arrays;
        const auto &o = ch.ofdm;
        os << std::setprecision(17);
        os << "# abp-channel v1\n";
        os << "# mode=" << (a.cross() ? "cross" : "co") << "\n";
        os << "# n_x=" << a.n_x << "\n# n_y=" << a.n_y << "\n# m_tot=" << a.m_tot << "\n";
        os << "# d_tx=" << a.d_tx << "\n# d_ty=" << a.d_ty << "\n# d_r=" << a.d_r << "\n";
        os << "# n_subcarriers=" << o.n_subcarriers << "\n# cp_length=" << o.cp_length << "\n";
        os << "# subcarrier_spacing=" << o.subcarrier_spacing << "\n# sample_period=" << o.sample_period << "\n";
        os << "# pulse=" << (o.pulse == PulseShape::unit_sample ? "unit_sample" : "raised_cosine") << "\n";
        os << "# rolloff=" << o.rolloff << "\n# gain_scale=" << ch.gain_scale << "\n";
        if (ch.crosspol)
            os << "# chi=" << ch.crosspol->chi << "\n# varsigma=" << ch.crosspol->varsigma << "\n";
        os << "# dominant=";
        for (std::size_t i = 0; i < ch.dominant.size(); ++i)
            os << (i ? ";" : "") << ch.dominant[i];
        os << "\n";
        os << "g_vv_re,g_vv_im,g_vh_re,g_vh_im,g_hv_re,g_hv_im,g_hh_re,g_hh_im,tau,theta,phi,psi\n";
        for (const auto &p : ch.paths)
        {
            os << p.g_vv.real() << ',' << p.g_vv.imag() << ',' << p.g_vh.real() << ',' << p.g_vh.imag() << ','
               << p.g_hv.real() << ',' << p.g_hv.imag() << ',' << p.g_hh.real() << ',' << p.g_hh.imag() << ','
               << p.tau << ',' << p.angles.theta << ',' << p.angles.phi << ',' << p.angles.psi << "\n";
        }
        if (!os)
            throw Error(ErrorCode::IoError, "failed writing channel CSV");
    }

    ChannelRealization read_channel_csv(std::istream &is)
    {
        std::map<std::string, std::string> meta;
        std::vector<PathParams> paths;
        std::string line;
        bool header_seen = false;
        int line_no = 0;
        while (std::getline(is, line))
        {
            ++line_no;
            if (line.empty())
                continue;
            if (line[0] == '#')
            {
                const auto eq = line.find('=');
                if (eq != std::string::npos)
                {
                    std::string key = line.substr(1, eq - 1);
                    key.erase(0, key.find_first_not_of(' '));
                    meta[key] = line.substr(eq + 1);
                }
                continue;
            }
            if (!header_seen)
            {
                header_seen = true;
                continue;
            }
            std::stringstream ss(line);
            std::string cell;
            double v[12];
            for (int i = 0; i < 12; ++i)
            {
                if (!std::getline(ss, cell, ','))
                    throw Error(ErrorCode::ParseError, "channel CSV line " + std::to_string(line_no) + ": expected 12 fields");
                try
                {
                    v[i] = std::stod(cell);
                }
                catch (const std::exception &)
                {
                    throw Error(ErrorCode::ParseError, "channel CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
                }
            }
            PathParams p;
            p.g_vv = {v[0], v[1]};
            p.g_vh = {v[2], v[3]};
            p.g_hv = {v[4], v[5]};
            p.g_hh = {v[6], v[7]};
            p.tau = v[8];
            p.angles = {v[9], v[10], v[11]};
            paths.push_back(p);
        }

        auto get = [&](const std::string &k) -> const std::string &
        {
            auto it = meta.find(k);
            if (it == meta.end())
                throw Error(ErrorCode::ParseError, "channel CSV missing metadata '" + k + "'");
            return it->second;
        };

        ArrayConfig a;
        a.mode = get("mode") == "cross" ? PolarizationMode::cross : PolarizationMode::co;
        a.n_x = std::stoi(get("n_x"));
        a.n_y = std::stoi(get("n_y"));
        a.m_tot = std::stoi(get("m_tot"));
        a.d_tx = std::stod(get("d_tx"));
        a.d_ty = std::stod(get("d_ty"));
        a.d_r = std::stod(get("d_r"));

        OfdmConfig o;
        o.n_subcarriers = std::stoi(get("n_subcarriers"));
        o.cp_length = std::stoi(get("cp_length"));
        o.subcarrier_spacing = std::stod(get("subcarrier_spacing"));
        o.sample_period = std::stod(get("sample_period"));
        o.pulse = get("pulse") == "unit_sample" ? PulseShape::unit_sample : PulseShape::raised_cosine;
        o.rolloff = std::stod(get("rolloff"));
        const double scale = std::stod(get("gain_scale"));

        std::optional<CrossPolConfig> xp;
        if (meta.count("chi"))
            xp = CrossPolConfig{std::stod(meta["chi"]), std::stod(get("varsigma"))};

        auto ch = frequency_response(paths, a, o, xp, scale);
        std::stringstream ds(meta.count("dominant") ? meta["dominant"] : "");
        std::string tok;
        while (std::getline(ds, tok, ';'))
            if (!tok.empty())
                ch.dominant.push_back(std::stoi(tok));
        return ch;
    }
}
