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

#include "dfeval/synth.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dfeval
{
    namespace
    {
        struct Axes
        {
            UniformAxis theta;
            UniformAxis phi;
        };

        Axes make_axes(const GridResolution &res)
        {
            const double theta_span = res.full_sphere ? 180.0 : 90.0;
            if (!(res.theta_step_deg > 0.0) || !(res.phi_step_deg > 0.0))
                throw std::invalid_argument("grid steps must be positive");
            const auto n_theta = std::llround(theta_span / res.theta_step_deg);
            const auto n_phi = std::llround(360.0 / res.phi_step_deg);
            if (std::abs(static_cast<double>(n_theta) * res.theta_step_deg - theta_span) > 1e-9 ||
                std::abs(static_cast<double>(n_phi) * res.phi_step_deg - 360.0) > 1e-9)
                throw std::invalid_argument("grid steps must divide the theta range and 360 deg");
            return {UniformAxis{0.0, deg2rad(res.theta_step_deg), static_cast<Index>(n_theta) + 1},
                    UniformAxis{0.0, deg2rad(res.phi_step_deg), static_cast<Index>(n_phi)}};
        }

        // sin / cos of an angle in degrees, reduced to the first quadrant so that values at
        // angles a quarter turn apart are exact sign/swap images and quadrant nulls are zero
        std::pair<double, double> sin_cos_deg(double deg)
        {
            deg = std::fmod(deg, 360.0);
            if (deg < 0.0)
                deg += 360.0;
            const double quarter = std::floor(deg / 90.0);
            const double rest = deg - 90.0 * quarter;
            const double s = rest == 0.0 ? 0.0 : std::sin(deg2rad(rest));
            const double c = rest == 0.0 ? 1.0 : std::cos(deg2rad(rest));
            switch (static_cast<int>(quarter) % 4)
            {
            case 0:
                return {s, c};
            case 1:
                return {c, -s};
            case 2:
                return {-s, -c};
            default:
                return {-c, s};
            }
        }
    } // namespace

    double UcaSpec::circumradius_over_lambda() const
    {
        return spacing_over_lambda / (2.0 * std::sin(pi / static_cast<double>(element_count)));
    }

    void UcaSpec::validate() const
    {
        if (element_count < 2)
            throw std::invalid_argument("a UCA needs at least two elements");
        if (!(spacing_over_lambda > 0.0))
            throw std::invalid_argument("element spacing must be positive");
        if (!(monopole_length_over_lambda > 0.0))
            throw std::invalid_argument("monopole length must be positive");
        if (!(frequency_hz > 0.0))
            throw std::invalid_argument("frequency must be positive");
    }

    double monopole_element_pattern(double length_over_lambda, double theta)
    {
        const double s = std::sin(theta);
        if (s <= 0.0)
            return 0.0;
        const double kl = 2.0 * pi * length_over_lambda;
        return (std::cos(kl * std::cos(theta)) - std::cos(kl)) / s;
    }

    Eigen::Matrix3Xd uca_element_positions(const UcaSpec &spec)
    {
        spec.validate();
        const double R = spec.circumradius_over_lambda();
        Eigen::Matrix3Xd pos(3, spec.element_count);
        for (Index p = 0; p < spec.element_count; ++p)
        {
            const double a = 2.0 * pi * static_cast<double>(p) / static_cast<double>(spec.element_count);
            pos.col(p) << R * std::cos(a), R * std::sin(a), 0.0;
        }
        return pos;
    }

    FarFieldSet synth_uca(const UcaSpec &spec)
    {
        spec.validate();
        const auto axes = make_axes(spec.resolution);
        const Index P = spec.element_count;
        const Index n_phi = axes.phi.count;
        const double kR = 2.0 * pi * spec.circumradius_over_lambda();

        // With element azimuths on phi nodes the phase argument uses the integer node
        // difference, so a ring rotation by 360/P maps entries onto each other bit-exactly.
        const bool on_nodes = n_phi % P == 0;

        std::vector<PatternEntry> entries;
        for (Index p = 0; p < P; ++p)
        {
            PatternEntry e;
            e.name = "port_" + std::to_string(p + 1);
            e.e_theta.resize(axes.theta.count, n_phi);
            e.e_phi = ComplexMatrix::Zero(axes.theta.count, n_phi);
            const double element_phi = 2.0 * pi * static_cast<double>(p) / static_cast<double>(P);
            for (Index i = 0; i < axes.theta.count; ++i)
            {
                const double theta = axes.theta[i];
                const double g = monopole_element_pattern(spec.monopole_length_over_lambda, theta);
                const double st = std::sin(theta);
                for (Index j = 0; j < n_phi; ++j)
                {
                    double rel;
                    if (on_nodes)
                        rel = axes.phi[((j - p * (n_phi / P)) % n_phi + n_phi) % n_phi];
                    else
                        rel = axes.phi[j] - element_phi;
                    e.e_theta(i, j) = g * std::polar(1.0, kR * st * std::cos(rel));
                }
            }
            entries.push_back(std::move(e));
        }
        return FarFieldSet(axes.theta, axes.phi, Normalization::directivity, spec.frequency_hz, std::move(entries));
    }

    FarFieldSet canonical_mode_set(const GridResolution &resolution, const std::map<std::string, double> &eigenvalues)
    {
        const auto axes = make_axes(resolution);
        const Index nt = axes.theta.count, np = axes.phi.count;

        const char *names[] = {"VED", "MDX", "MDY", "ZTH"};
        for (const auto &[name, value] : eigenvalues)
        {
            bool known = false;
            for (const char *n : names)
                known = known || name == n;
            if (!known)
                throw std::invalid_argument("no canonical mode named '" + name + "'");
        }

        std::vector<PatternEntry> entries;
        for (const char *name : names)
        {
            PatternEntry e;
            e.name = name;
            e.e_theta = ComplexMatrix::Zero(nt, np);
            e.e_phi = ComplexMatrix::Zero(nt, np);
            const auto it = eigenvalues.find(name);
            e.eigenvalue = it == eigenvalues.end() ? 0.0 : it->second;
            entries.push_back(std::move(e));
        }

        for (Index i = 0; i < nt; ++i)
        {
            const auto [st, ct] = sin_cos_deg(static_cast<double>(i) * resolution.theta_step_deg);
            for (Index j = 0; j < np; ++j)
            {
                const auto [sp, cp] = sin_cos_deg(static_cast<double>(j) * resolution.phi_step_deg);
                entries[0].e_theta(i, j) = st;
                entries[1].e_theta(i, j) = sp;
                entries[1].e_phi(i, j) = ct * cp;
                entries[2].e_theta(i, j) = cp;
                entries[2].e_phi(i, j) = -ct * sp;
                entries[3].e_phi(i, j) = st;
            }
        }
        return FarFieldSet(axes.theta, axes.phi, Normalization::cm_directivity, 1.06e9, std::move(entries));
    }

} // namespace dfeval
