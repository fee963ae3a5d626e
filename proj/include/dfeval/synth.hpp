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

#include "dfeval/farfield.hpp"

#include <Eigen/Core>

#include <map>
#include <string>

namespace dfeval
{
    // Analytic far-field generators. Lengths are in free-space wavelengths.

    struct GridResolution
    {
        double theta_step_deg = 1.0;
        double phi_step_deg = 1.0;
        bool full_sphere = false; // theta up to 180 deg instead of the ground-plane 90 deg
    };

    // Uniform circular array of z-directed monopoles over an infinite ground plane
    struct UcaSpec
    {
        Index element_count = 6;
        double spacing_over_lambda = 0.6;
        double monopole_length_over_lambda = 0.25;
        GridResolution resolution{};
        double frequency_hz = 1.06e9;

        double circumradius_over_lambda() const; // d / (2 sin(pi / P))
        void validate() const;
    };

    // Thin monopole over ground: [cos(k0 L cos(theta)) - cos(k0 L)] / sin(theta), 0 on the axis
    double monopole_element_pattern(double length_over_lambda, double theta);

    // Element positions (columns, in wavelengths) on the z = 0 circle, first element at phi = 0
    Eigen::Matrix3Xd uca_element_positions(const UcaSpec &spec);

    // One isolated-element port pattern per monopole, e_theta carrying the steering phase
    // exp(+j k0 e_r . p) with the array centre as phase origin; e_phi = 0.
    FarFieldSet synth_uca(const UcaSpec &spec);

    // Canonical mode-like patterns (unit peak):
    //   VED  F_theta = sin(theta),  F_phi = 0
    //   MDX  F_theta = sin(phi),    F_phi =  cos(theta) cos(phi)
    //   MDY  F_theta = cos(phi),    F_phi = -cos(theta) sin(phi)
    //   ZTH  F_theta = 0,           F_phi = sin(theta)
    // Eigenvalues default to 0; `eigenvalues` overrides by name. Tagged cm-directivity.
    FarFieldSet canonical_mode_set(const GridResolution &resolution = {},
                                   const std::map<std::string, double> &eigenvalues = {});

} // namespace dfeval
