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

#include "abp/sim/table.hpp"
#include "abp/common.hpp"

#include <charconv>
#include <ostream>
#include <sstream>

namespace abp::sim
{
    void Table::add_row(std::vector<std::string> row)
    {
        if (row.size() != header.size())
            throw Error(ErrorCode::DimensionMismatch, "row has " + std::to_string(row.size()) + " fields, header has " +
                                                          std::to_string(header.size()));
        rows.push_back(std::move(row));
    }

    std::size_t Table::column(const std::string &n) const
    {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == n)
                return i;
        throw Error(ErrorCode::InvalidArgument, "no column '" + n + "'");
    }

    std::string fmt(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }

    std::string csv_escape(const std::string &f)
    {
        if (f.find_first_of(",\"\r\n") == std::string::npos)
            return f;
        std::string out = "\"";
        for (char c : f)
        {
            if (c == '"')
                out += '"';
            out += c;
        }
        return out + "\"";
    }

    static void write_row(std::ostream &os, const std::vector<std::string> &row)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << csv_escape(row[i]);
        os << "\r\n";
    }

    void write_csv(std::ostream &os, const Table &t)
    {
        write_row(os, t.header);
        for (const auto &r : t.rows)
            write_row(os, r);
    }

    std::string to_csv(const Table &t)
    {
        std::ostringstream os;
        write_csv(os, t);
        return os.str();
    }

    Table parse_csv(const std::string &text)
    {
        std::vector<std::vector<std::string>> records;
        std::vector<std::string> rec;
        std::string field;
        bool quoted = false, any = false;
        std::size_t i = 0;
        auto end_record = [&]
        {
            rec.push_back(field);
            records.push_back(rec);
            rec.clear();
            field.clear();
            any = false;
        };
        while (i < text.size())
        {
            const char c = text[i];
            if (quoted)
            {
                if (c == '"')
                {
                    if (i + 1 < text.size() && text[i + 1] == '"')
                    {
                        field += '"';
                        ++i;
                    }
                    else
                        quoted = false;
                }
                else
                    field += c;
            }
            else if (c == '"')
            {
                quoted = true;
                any = true;
            }
            else if (c == ',')
            {
                rec.push_back(field);
                field.clear();
                any = true;
            }
            else if (c == '\r' || c == '\n')
            {
                if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                    ++i;
                end_record();
            }
            else
            {
                field += c;
                any = true;
            }
            ++i;
        }
        if (quoted)
            throw Error(ErrorCode::ParseError, "unterminated quoted field");
        if (any || !field.empty() || !rec.empty())
            end_record();

        Table t;
        if (records.empty())
            throw Error(ErrorCode::ParseError, "no header row");
        t.header = records.front();
        for (std::size_t r = 1; r < records.size(); ++r)
        {
            if (records[r].size() != t.header.size())
                throw Error(ErrorCode::ParseError, "record " + std::to_string(r + 1) + " has " +
                                                       std::to_string(records[r].size()) + " fields");
            t.rows.push_back(records[r]);
        }
        return t;
    }
}
