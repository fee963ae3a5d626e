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

#include "dfeval/farfield.hpp"
#include "dfeval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dfeval
{
    namespace
    {
        // Queries this close to a node (in units of the step) snap onto it
        constexpr double snap_tolerance = 1e-9;
    }

    std::string_view to_string(Normalization n)
    {
        switch (n)
        {
        case Normalization::directivity:
            return "directivity";
        case Normalization::gain:
            return "gain";
        case Normalization::realized_gain:
            return "realized-gain";
        case Normalization::cm_directivity:
            return "cm-directivity";
        }
        return "directivity";
    }

    Normalization normalization_from_string(std::string_view s)
    {
        if (s == "directivity")
            return Normalization::directivity;
        if (s == "gain")
            return Normalization::gain;
        if (s == "realized-gain")
            return Normalization::realized_gain;
        if (s == "cm-directivity")
            return Normalization::cm_directivity;
        throw ValidationError("unknown normalization '" + std::string(s) + "'");
    }

    RealVector UniformAxis::samples() const
    {
        RealVector v(count);
        for (Index i = 0; i < count; ++i)
            v(i) = (*this)[i];
        return v;
    }

    FarFieldSet::FarFieldSet(UniformAxis theta, UniformAxis phi, Normalization normalization, double frequency_hz,
                             std::vector<PatternEntry> entries)
        : theta_(theta), phi_(phi), normalization_(normalization), frequency_hz_(frequency_hz),
          entries_(std::move(entries))
    {
        if (theta_.count < 2 || !(theta_.step > 0.0))
            throw ValidationError("theta axis needs at least two strictly increasing samples");
        if (theta_.start < -1e-12 || theta_.stop() > pi + 1e-9)
            throw ValidationError("theta samples must lie within [0, 180] deg");
        if (phi_.count < 2 || !(phi_.step > 0.0))
            throw ValidationError("phi axis needs at least two strictly increasing samples");
        if (std::abs(static_cast<double>(phi_.count) * phi_.step - 2.0 * pi) > 1e-9 * 2.0 * pi)
            throw ValidationError("phi samples must cover a full revolution (count * step = 360 deg)");
        if (!std::isfinite(frequency_hz_) || frequency_hz_ <= 0.0)
            throw ValidationError("frequency must be positive");

        for (const auto &e : entries_)
        {
            for (const auto *m : {&e.e_theta, &e.e_phi})
            {
                if (m->rows() != theta_.count || m->cols() != phi_.count)
                    throw ValidationError("entry '" + e.name + "': dimension mismatch, got " +
                                          std::to_string(m->rows()) + "x" + std::to_string(m->cols()) +
                                          ", expected " + std::to_string(theta_.count) + "x" +
                                          std::to_string(phi_.count));
                if (!m->allFinite())
                    throw ValidationError("entry '" + e.name + "': non-finite far-field value");
            }
            if (e.eigenvalue && !std::isfinite(*e.eigenvalue))
                throw ValidationError("entry '" + e.name + "': eigenvalue must be finite");
            if (normalization_ == Normalization::cm_directivity && !e.eigenvalue)
                throw ValidationError("entry '" + e.name + "': cm-directivity sets require an eigenvalue per entry");
        }
    }

    const PatternEntry &FarFieldSet::entry(Index n) const
    {
        if (n < 0 || n >= size())
            throw std::out_of_range("entry index " + std::to_string(n) + " out of range");
        return entries_[static_cast<std::size_t>(n)];
    }

    bool FarFieldSet::has_eigenvalues() const noexcept
    {
        return std::all_of(entries_.begin(), entries_.end(), [](const PatternEntry &e)
                           { return e.eigenvalue.has_value(); });
    }

    bool FarFieldSet::covers(const Direction &d) const noexcept
    {
        const double t = (d.theta() - theta_.start) / theta_.step;
        return t >= -snap_tolerance && t <= static_cast<double>(theta_.count - 1) + snap_tolerance;
    }

    FarFieldSet::Stencil FarFieldSet::stencil(const Direction &d) const
    {
        double t = (d.theta() - theta_.start) / theta_.step;
        const double last = static_cast<double>(theta_.count - 1);
        if (t < -snap_tolerance || t > last + snap_tolerance)
            throw std::out_of_range("theta = " + std::to_string(d.theta_deg()) + " deg is outside the sampled range [" +
                                    std::to_string(rad2deg(theta_.start)) + ", " +
                                    std::to_string(rad2deg(theta_.stop())) + "] deg");
        if (std::abs(t - std::round(t)) < snap_tolerance)
            t = std::round(t);
        t = std::clamp(t, 0.0, last);

        const double n_phi = static_cast<double>(phi_.count);
        double p = (d.phi() - phi_.start) / phi_.step;
        p = std::fmod(p, n_phi);
        if (p < 0.0)
            p += n_phi;
        if (std::abs(p - std::round(p)) < snap_tolerance)
            p = std::round(p);
        if (p >= n_phi)
            p -= n_phi;

        Stencil s{};
        s.i0 = std::min(static_cast<Index>(std::floor(t)), theta_.count - 2);
        s.i1 = s.i0 + 1;
        s.ft = t - static_cast<double>(s.i0);
        s.j0 = static_cast<Index>(std::floor(p)) % phi_.count;
        s.j1 = (s.j0 + 1) % phi_.count;
        s.fp = p - std::floor(p);
        return s;
    }

    namespace
    {
        cd bilinear(const ComplexMatrix &m, Index i0, Index i1, Index j0, Index j1, double ft, double fp)
        {
            // Exact node hits must not pick up 0 * neighbour rounding
            if (ft == 0.0 && fp == 0.0)
                return m(i0, j0);
            const cd lo = (1.0 - fp) * m(i0, j0) + fp * m(i0, j1);
            if (ft == 0.0)
                return lo;
            const cd hi = (1.0 - fp) * m(i1, j0) + fp * m(i1, j1);
            return (1.0 - ft) * lo + ft * hi;
        }
    } // namespace

    cd FarFieldSet::sample(Index n, const Direction &d, Polarization pol) const
    {
        const auto s = stencil(d);
        return bilinear(entry(n).component(pol), s.i0, s.i1, s.j0, s.j1, s.ft, s.fp);
    }

    std::pair<cd, cd> FarFieldSet::sample_vector(Index n, const Direction &d) const
    {
        const auto s = stencil(d);
        const auto &e = entry(n);
        return {bilinear(e.e_theta, s.i0, s.i1, s.j0, s.j1, s.ft, s.fp),
                bilinear(e.e_phi, s.i0, s.i1, s.j0, s.j1, s.ft, s.fp)};
    }

    FarFieldSet FarFieldSet::scaled(cd factor) const
    {
        auto entries = entries_;
        for (auto &e : entries)
        {
            e.e_theta *= factor;
            e.e_phi *= factor;
        }
        return FarFieldSet(theta_, phi_, normalization_, frequency_hz_, std::move(entries));
    }

    FarFieldSet FarFieldSet::select(const std::vector<Index> &indices) const
    {
        std::vector<PatternEntry> entries;
        entries.reserve(indices.size());
        for (Index n : indices)
            entries.push_back(entry(n));
        return FarFieldSet(theta_, phi_, normalization_, frequency_hz_, std::move(entries));
    }

    double radiated_power(const FarFieldSet &set, Index n)
    {
        const auto &e = set.entry(n);
        const auto &ta = set.theta_axis();
        const auto &pa = set.phi_axis();

        std::vector<double> ring(static_cast<std::size_t>(pa.count));
        double total = 0.0;
        for (Index i = 0; i < ta.count; ++i)
        {
            const double end_weight = (i == 0 || i == ta.count - 1) ? 0.5 : 1.0;
            const double w = end_weight * ta.step * std::sin(ta[i]) * pa.step;
            for (Index j = 0; j < pa.count; ++j)
                ring[static_cast<std::size_t>(j)] = std::norm(e.e_theta(i, j)) + std::norm(e.e_phi(i, j));
            // Sorted ring sums make the result independent of the azimuth origin
            std::sort(ring.begin(), ring.end());
            double ring_sum = 0.0;
            for (double v : ring)
                ring_sum += v;
            total += w * ring_sum;
        }
        return total;
    }

    FarFieldSet rotate_about_z(const FarFieldSet &set, Index steps)
    {
        const Index n = set.phi_axis().count;
        const Index shift = ((steps % n) + n) % n;
        auto entries = set.entries();
        for (auto &e : entries)
        {
            for (auto *m : {&e.e_theta, &e.e_phi})
            {
                ComplexMatrix rotated(m->rows(), m->cols());
                for (Index j = 0; j < n; ++j)
                    rotated.col((j + shift) % n) = m->col(j);
                *m = std::move(rotated);
            }
        }
        return FarFieldSet(set.theta_axis(), set.phi_axis(), set.normalization(), set.frequency_hz(),
                           std::move(entries));
    }

} // namespace dfeval
