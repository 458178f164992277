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

#include "abp/sim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace abp::sim
{
    namespace
    {
        const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

        std::string escape(const std::string &s)
        {
            std::string o;
            for (char c : s)
            {
                if (c == '<')
                    o += "&lt;";
                else if (c == '>')
                    o += "&gt;";
                else if (c == '&')
                    o += "&amp;";
                else
                    o += c;
            }
            return o;
        }

        std::string num(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4g", v);
            return buf;
        }
    }

    std::string render_svg(const PlotSpec &spec)
    {
        const double W = 640, H = 420, L = 70, R = 170, T = 40, B = 55;
        double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
        auto ty = [&](double y) { return spec.log_y ? std::log10(std::max(y, 1e-300)) : y; };
        for (const auto &s : spec.series)
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
            {
                if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i])))
                    continue;
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, ty(s.y[i]));
                y1 = std::max(y1, ty(s.y[i]));
            }
        if (!(x0 <= x1))
            x0 = 0, x1 = 1, y0 = 0, y1 = 1;
        if (x1 - x0 < 1e-12)
            x0 -= 0.5, x1 += 0.5;
        if (y1 - y0 < 1e-12)
            y0 -= 0.5, y1 += 0.5;
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;

        auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
        auto py = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };

        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
           << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << (W - R + L) / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
           << escape(spec.title) << "</text>\n";
        os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
           << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 5; ++i)
        {
            const double xv = x0 + (x1 - x0) * i / 5.0, yv = y0 + (y1 - y0) * i / 5.0;
            const double gx = L + (W - L - R) * i / 5.0, gy = H - B - (H - T - B) * i / 5.0;
            os << "<line x1=\"" << gx << "\" y1=\"" << T << "\" x2=\"" << gx << "\" y2=\"" << H - B
               << "\" stroke=\"#ddd\"/>\n";
            os << "<line x1=\"" << L << "\" y1=\"" << gy << "\" x2=\"" << W - R << "\" y2=\"" << gy
               << "\" stroke=\"#ddd\"/>\n";
            os << "<text x=\"" << gx << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << num(xv)
               << "</text>\n";
            os << "<text x=\"" << L - 6 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">"
               << num(spec.log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
        }
        os << "<text x=\"" << (W - R + L) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
           << escape(spec.x_label) << "</text>\n";
        os << "<text transform=\"translate(18," << (H - B + T) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
           << escape(spec.y_label) << "</text>\n";

        for (std::size_t s = 0; s < spec.series.size(); ++s)
        {
            const auto &se = spec.series[s];
            const char *col = palette[s % 8];
            os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < se.x.size() && i < se.y.size(); ++i)
                if (std::isfinite(ty(se.y[i])))
                    os << px(se.x[i]) << "," << py(se.y[i]) << " ";
            os << "\"/>\n";
            for (std::size_t i = 0; i < se.x.size() && i < se.y.size(); ++i)
                if (std::isfinite(ty(se.y[i])))
                    os << "<circle cx=\"" << px(se.x[i]) << "\" cy=\"" << py(se.y[i]) << "\" r=\"3\" fill=\"" << col
                       << "\"/>\n";
            const double ly = T + 14 + 18 * double(s);
            os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
               << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\">" << escape(se.label) << "</text>\n";
        }
        os << "</svg>\n";
        return os.str();
    }
}
