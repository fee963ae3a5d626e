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
#include "dfeval/geometry.hpp"
#include "dfeval/types.hpp"

#include <filesystem>

namespace dfeval
{
    // Incident-field expansion coefficients for a plane wave from `reference`: each
    // coefficient equals the entry's far field there (the common physical constant is 1).
    struct IncidentCoefficients
    {
        ComplexVector values;
        bool common_null = false; // reference is a null of every entry
    };

    IncidentCoefficients incident_coefficients(const FarFieldSet &set, const Direction &reference, Polarization pol);

    // Conjugate-weighted superposition sum_n c_n conj(F_n) on an output grid, both components
    struct IncidentFieldEstimate
    {
        Direction reference_doa;
        IncidentCoefficients coefficients;
        DoAGrid output_grid;
        ComplexVector f_theta;
        ComplexVector f_phi;

        RealVector magnitude() const; // sqrt(|F_theta|^2 + |F_phi|^2)
    };

    IncidentFieldEstimate estimate_incident_field(const FarFieldSet &set, const Direction &reference, Polarization pol,
                                                  const DoAGrid &output_grid);

    // c_a^H c_b / (|c_a| |c_b|), same arithmetic as the measurement-matrix correlation.
    // Throws DegeneracyError for a zero vector.
    cd coefficient_correlation(const ComplexVector &a, const ComplexVector &b);

    // Correlation of two estimated incident fields through the surface inner product
    // <A, B> = sum_k w_k (conj(A_theta) B_theta + conj(A_phi) B_phi) on the quadrature grid.
    // Throws DegeneracyError for a zero-norm pattern.
    cd correlation_via_incident_fields(const FarFieldSet &set, const Direction &ref_a, const Direction &ref_b,
                                       Polarization pol, const DoAGrid &quadrature);

    // Gram matrix of the entries' vector patterns under the quadrature inner product
    ComplexMatrix pattern_gram(const FarFieldSet &set, const DoAGrid &quadrature);

    // Symmetric (Loewdin) orthonormalization F' = F G^{-1/2} applied to the stored samples.
    // Eigenvalues, names and axes are kept. Throws DegeneracyError for a singular Gram matrix.
    FarFieldSet orthonormalize(const FarFieldSet &set, const DoAGrid &quadrature);

    // Both correlation forms side by side. On data whose entries are not orthonormal over
    // the covered domain (for example hemisphere-only sets) the residual is reported, not
    // asserted to vanish.
    struct CorrelationComparison
    {
        cd coefficient_form;
        cd incident_form;
        double residual = 0.0; // |incident_form - coefficient_form|
    };

    CorrelationComparison compare_correlation_forms(const FarFieldSet &set, const Direction &ref_a,
                                                    const Direction &ref_b, Polarization pol,
                                                    const DoAGrid &quadrature);

    // `theta_deg,phi_deg,re_ftheta,im_ftheta,re_fphi,im_fphi,magnitude`
    void write_incident_csv(const IncidentFieldEstimate &estimate, const std::filesystem::path &path);

} // namespace dfeval
