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

#include <Eigen/Core>

#include <complex>
#include <numbers>
#include <string_view>

namespace dfeval
{
    using Index = Eigen::Index;

    template <typename Scalar>
    using ComplexMatrixT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
    template <typename Scalar>
    using ComplexVectorT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
    template <typename Scalar>
    using RealMatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    template <typename Scalar>
    using RealVectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    using cd = std::complex<double>;
    using ComplexMatrix = ComplexMatrixT<double>;
    using ComplexVector = ComplexVectorT<double>;
    using RealMatrix = RealMatrixT<double>;
    using RealVector = RealVectorT<double>;
    using IndexVector = Eigen::Matrix<Index, Eigen::Dynamic, 1>;
    using IndexMatrix = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

    inline constexpr double pi = std::numbers::pi;

    constexpr double deg2rad(double deg) { return deg * (pi / 180.0); }
    constexpr double rad2deg(double rad) { return rad * (180.0 / pi); }

    // Field component of the incident / received wave
    enum class Polarization
    {
        theta,
        phi
    };

    std::string_view to_string(Polarization pol);
    Polarization polarization_from_string(std::string_view s);

} // namespace dfeval
