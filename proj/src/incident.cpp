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

#include "dfeval/incident.hpp"
#include "dfeval/csv.hpp"
#include "dfeval/errors.hpp"
#include "dfeval/uncertainty.hpp"

#include <Eigen/Eigenvalues>

namespace dfeval
{
    IncidentCoefficients incident_coefficients(const FarFieldSet &set, const Direction &reference, Polarization pol)
    {
        IncidentCoefficients c;
        c.values.resize(set.size());
        for (Index n = 0; n < set.size(); ++n)
            c.values(n) = set.sample(n, reference, pol);
        c.common_null = (c.values.array() == cd(0.0)).all();
        return c;
    }

    RealVector IncidentFieldEstimate::magnitude() const
    {
        return (f_theta.cwiseAbs2() + f_phi.cwiseAbs2()).cwiseSqrt();
    }

    IncidentFieldEstimate estimate_incident_field(const FarFieldSet &set, const Direction &reference, Polarization pol,
                                                  const DoAGrid &output_grid)
    {
        IncidentFieldEstimate est;
        est.reference_doa = reference;
        est.coefficients = incident_coefficients(set, reference, pol);
        est.output_grid = output_grid;
        const Index K = output_grid.size();
        est.f_theta = ComplexVector::Zero(K);
        est.f_phi = ComplexVector::Zero(K);
        const auto &c = est.coefficients.values;
        for (Index k = 0; k < K; ++k)
            for (Index n = 0; n < set.size(); ++n)
            {
                const auto [ft, fp] = set.sample_vector(n, output_grid[k]);
                est.f_theta(k) += c(n) * std::conj(ft);
                est.f_phi(k) += c(n) * std::conj(fp);
            }
        return est;
    }

    cd coefficient_correlation(const ComplexVector &a, const ComplexVector &b)
    {
        if (a.size() != b.size())
            throw std::invalid_argument("coefficient vectors differ in length");
        ComplexMatrix X(a.size(), 2);
        X.col(0) = a;
        X.col(1) = b;
        // identical vectors are the same column of a measurement matrix
        return correlation(X, 0, a == b ? 0 : 1);
    }

    namespace
    {
        cd surface_inner(const ComplexVector &at, const ComplexVector &ap, const ComplexVector &bt,
                         const ComplexVector &bp, const RealVector &w)
        {
            cd s = 0.0;
            for (Index k = 0; k < w.size(); ++k)
                s += w(k) * (std::conj(at(k)) * bt(k) + std::conj(ap(k)) * bp(k));
            return s;
        }

        // Sampled components of every entry at the quadrature points (columns: entries)
        std::pair<ComplexMatrix, ComplexMatrix> sample_all(const FarFieldSet &set, const DoAGrid &quadrature)
        {
            ComplexMatrix t(quadrature.size(), set.size()), p(quadrature.size(), set.size());
            for (Index n = 0; n < set.size(); ++n)
                for (Index k = 0; k < quadrature.size(); ++k)
                {
                    const auto [ft, fp] = set.sample_vector(n, quadrature[k]);
                    t(k, n) = ft;
                    p(k, n) = fp;
                }
            return {t, p};
        }
    } // namespace

    cd correlation_via_incident_fields(const FarFieldSet &set, const Direction &ref_a, const Direction &ref_b,
                                       Polarization pol, const DoAGrid &quadrature)
    {
        const auto a = estimate_incident_field(set, ref_a, pol, quadrature);
        const auto b = estimate_incident_field(set, ref_b, pol, quadrature);
        const auto &w = quadrature.cell_weights;
        const double na = surface_inner(a.f_theta, a.f_phi, a.f_theta, a.f_phi, w).real();
        const double nb = surface_inner(b.f_theta, b.f_phi, b.f_theta, b.f_phi, w).real();
        if (!(na > 0.0) || !(nb > 0.0))
            throw DegeneracyError("estimated incident field has zero norm on the quadrature grid");
        return surface_inner(a.f_theta, a.f_phi, b.f_theta, b.f_phi, w) / (std::sqrt(na) * std::sqrt(nb));
    }

    ComplexMatrix pattern_gram(const FarFieldSet &set, const DoAGrid &quadrature)
    {
        const auto [t, p] = sample_all(set, quadrature);
        const Index N = set.size();
        ComplexMatrix G(N, N);
        for (Index m = 0; m < N; ++m)
            for (Index n = 0; n < N; ++n)
                G(m, n) = surface_inner(t.col(m), p.col(m), t.col(n), p.col(n), quadrature.cell_weights);
        return G;
    }

    FarFieldSet orthonormalize(const FarFieldSet &set, const DoAGrid &quadrature)
    {
        const ComplexMatrix G = pattern_gram(set, quadrature);
        const ComplexMatrix H = 0.5 * (G + G.adjoint());
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
        if (es.info() != Eigen::Success)
            throw DegeneracyError("Gram matrix eigendecomposition failed");
        const auto &ev = es.eigenvalues();
        if (!(ev.minCoeff() > 1e-12 * ev.maxCoeff()))
            throw DegeneracyError("entries are linearly dependent on the quadrature grid");
        const ComplexMatrix T =
            es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();

        const Index N = set.size();
        std::vector<PatternEntry> out;
        for (Index n = 0; n < N; ++n)
        {
            PatternEntry e;
            e.name = set.entry(n).name;
            e.eigenvalue = set.entry(n).eigenvalue;
            e.e_theta = ComplexMatrix::Zero(set.entry(n).e_theta.rows(), set.entry(n).e_theta.cols());
            e.e_phi = e.e_theta;
            for (Index m = 0; m < N; ++m)
            {
                e.e_theta += T(m, n) * set.entry(m).e_theta;
                e.e_phi += T(m, n) * set.entry(m).e_phi;
            }
            out.push_back(std::move(e));
        }
        return FarFieldSet(set.theta_axis(), set.phi_axis(), set.normalization(), set.frequency_hz(), std::move(out));
    }

    CorrelationComparison compare_correlation_forms(const FarFieldSet &set, const Direction &ref_a,
                                                    const Direction &ref_b, Polarization pol,
                                                    const DoAGrid &quadrature)
    {
        CorrelationComparison c;
        c.coefficient_form = coefficient_correlation(incident_coefficients(set, ref_a, pol).values,
                                                     incident_coefficients(set, ref_b, pol).values);
        c.incident_form = correlation_via_incident_fields(set, ref_a, ref_b, pol, quadrature);
        c.residual = std::abs(c.incident_form - c.coefficient_form);
        return c;
    }

    void write_incident_csv(const IncidentFieldEstimate &estimate, const std::filesystem::path &path)
    {
        csv::Writer w(path);
        w.header("theta_deg,phi_deg,re_ftheta,im_ftheta,re_fphi,im_fphi,magnitude");
        const RealVector mag = estimate.magnitude();
        const auto &g = estimate.output_grid;
        for (Index k = 0; k < g.size(); ++k)
            w.row({g[k].theta_deg(), g[k].phi_deg(), estimate.f_theta(k).real(), estimate.f_theta(k).imag(),
                   estimate.f_phi(k).real(), estimate.f_phi(k).imag(), mag(k)});
    }

} // namespace dfeval
