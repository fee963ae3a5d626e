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

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace dfeval::csv
{
    // Shortest-safe representation: 17 significant digits, round-trips every double
    std::string format(double value);

    // Comma-separated line writer on top of an ofstream
    class Writer
    {
    public:
        explicit Writer(const std::filesystem::path &path);

        void header(std::string_view line);
        void row(std::initializer_list<double> values);
        void row(const std::vector<double> &values);
        void raw(std::string_view line);

    private:
        std::ofstream out_;
        std::filesystem::path path_;
    };

    struct Table
    {
        std::vector<std::string> header;
        std::vector<std::vector<double>> rows;
    };

    // Parses a numeric CSV with a single header line. Throws ValidationError on
    // malformed numbers or ragged rows; `expected_header` is checked when non-empty.
    Table read(const std::filesystem::path &path, std::string_view expected_header = {});

    // Parses a numeric field exactly (std::from_chars)
    double parse_double(std::string_view field);

} // namespace dfeval::csv
