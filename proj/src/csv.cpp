// SPDX-License-Identifier: Apache-2.0
//
// df-eval: deterministic evaluation of direction finding antenna systems
// Copyright (C) 2026 The df-eval Authors
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

#include "dfeval/csv.hpp"
#include "dfeval/errors.hpp"

#include <charconv>
#include <cstdio>

namespace dfeval::csv
{
    std::string format(double value)
    {
        char buf[64];
        const int n = std::snprintf(buf, sizeof(buf), "%.17g", value);
        return std::string(buf, static_cast<std::size_t>(n));
    }

    Writer::Writer(const std::filesystem::path &path) : out_(path), path_(path)
    {
        if (!out_)
            throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }

    void Writer::header(std::string_view line) { raw(line); }

    void Writer::raw(std::string_view line)
    {
        out_ << line << '\n';
        if (!out_)
            throw std::runtime_error("write failed: " + path_.string());
    }

    void Writer::row(std::initializer_list<double> values)
    {
        std::string line;
        bool first = true;
        for (double v : values)
        {
            if (!first)
                line += ',';
            line += format(v);
            first = false;
        }
        raw(line);
    }

    void Writer::row(const std::vector<double> &values)
    {
        std::string line;
        for (std::size_t i = 0; i < values.size(); ++i)
        {
            if (i)
                line += ',';
            line += format(values[i]);
        }
        raw(line);
    }

    double parse_double(std::string_view field)
    {
        while (!field.empty() && (field.front() == ' ' || field.front() == '+'))
            field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '\r'))
            field.remove_suffix(1);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size())
            throw ValidationError("malformed number '" + std::string(field) + "'");
        return value;
    }

    namespace
    {
        std::vector<std::string_view> split(std::string_view line)
        {
            std::vector<std::string_view> out;
            std::size_t start = 0;
            while (true)
            {
                const auto pos = line.find(',', start);
                if (pos == std::string_view::npos)
                {
                    out.push_back(line.substr(start));
                    return out;
                }
                out.push_back(line.substr(start, pos - start));
                start = pos + 1;
            }
        }

        std::string_view trim_cr(std::string_view s)
        {
            if (!s.empty() && s.back() == '\r')
                s.remove_suffix(1);
            return s;
        }
    } // namespace

    Table read(const std::filesystem::path &path, std::string_view expected_header)
    {
        std::ifstream in(path);
        if (!in)
            throw ValidationError("missing file: " + path.string());

        Table table;
        std::string line;
        if (!std::getline(in, line))
            throw ValidationError("empty CSV file: " + path.string());
        const auto head = trim_cr(line);
        if (!expected_header.empty() && head != expected_header)
            throw ValidationError(path.string() + ": unexpected header '" + std::string(head) + "', expected '" +
                                  std::string(expected_header) + "'");
        for (auto f : split(head))
            table.header.emplace_back(f);

        std::size_t line_no = 1;
        while (std::getline(in, line))
        {
            ++line_no;
            const auto body = trim_cr(line);
            if (body.empty())
                continue;
            const auto fields = split(body);
            if (fields.size() != table.header.size())
                throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                                      std::to_string(table.header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
            std::vector<double> row;
            row.reserve(fields.size());
            try
            {
                for (auto f : fields)
                    row.push_back(parse_double(f));
            }
            catch (const ValidationError &e)
            {
                throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
            table.rows.push_back(std::move(row));
        }
        return table;
    }

} // namespace dfeval::csv
