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

#include "dfeval/geometry.hpp"
#include "dfeval/types.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace dfeval::testing
{
    inline const DoAGrid &default_grid()
    {
        static const DoAGrid g = generate_cap_grid(deg2rad(45.0), deg2rad(90.0), 250);
        return g;
    }

    inline ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64 &rng)
    {
        std::normal_distribution<double> n(0.0, 1.0);
        ComplexMatrix X(rows, cols);
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i)
                X(i, j) = cd(n(rng), n(rng));
        return X;
    }

    // Haar-ish unitary from the QR factor of a Gaussian matrix
    ComplexMatrix random_unitary(Index n, std::mt19937_64 &rng);

    inline std::filesystem::path scratch_dir(const std::string &name)
    {
        const auto dir = std::filesystem::temp_directory_path() / ("dfeval_test_" + name);
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

} // namespace dfeval::testing
