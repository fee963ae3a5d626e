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

#include "dfeval/types.hpp"

#include <stdexcept>
#include <string>

namespace dfeval
{
    std::string_view to_string(Polarization pol)
    {
        return pol == Polarization::theta ? "theta" : "phi";
    }

    Polarization polarization_from_string(std::string_view s)
    {
        if (s == "theta")
            return Polarization::theta;
        if (s == "phi")
            return Polarization::phi;
        throw std::invalid_argument("unknown polarization '" + std::string(s) + "' (expected theta or phi)");
    }

} // namespace dfeval
