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

#ifndef ABP_SIM_PLOT_H
#define ABP_SIM_PLOT_H

#include <string>
#include <vector>

namespace abp::sim
{
    struct Series
    {
        std::string label;
        std::vector<double> x, y;
    };

    struct PlotSpec
    {
        std::string title, x_label, y_label;
        std::vector<Series> series;
        bool log_y = false;
    };

    // Standalone SVG line chart with markers and a legend
    std::string render_svg(const PlotSpec &spec);
}

#endif
