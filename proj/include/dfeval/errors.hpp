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

#include <stdexcept>
#include <string>

namespace dfeval
{
    // Invalid parameters are reported as std::invalid_argument, queries outside the
    // sampled region as std::out_of_range. The two classes below cover input data
    // that fails validation and numerically degenerate configurations.

    class ValidationError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class DegeneracyError : public std::runtime_error
    {
    public:
        explicit DegeneracyError(const std::string &what, long long index = -1)
            : std::runtime_error(what), index_(index) {}

        // Offending grid / DoA index, or -1 if not tied to one
        long long index() const noexcept { return index_; }

    private:
        long long index_;
    };

} // namespace dfeval
