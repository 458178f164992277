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

#ifndef ABP_SIM_TABLE_H
#define ABP_SIM_TABLE_H

#include <iosfwd>
#include <string>
#include <vector>

namespace abp::sim
{
    struct Table
    {
        std::string name; // file stem
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        void add_row(std::vector<std::string> row);
        std::size_t column(const std::string &name) const;
        bool operator==(const Table &) const = default;
    };

    // Shortest text that parses back to the same double
    std::string fmt(double v);

    std::string csv_escape(const std::string &field);
    void write_csv(std::ostream &os, const Table &t);
    std::string to_csv(const Table &t);

    // Header row first; quoted fields may contain commas, quotes and newlines
    Table parse_csv(const std::string &text);
}

#endif
