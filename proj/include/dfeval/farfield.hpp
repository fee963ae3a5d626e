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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dfeval
{
    // Which quantity the stored far fields are normalized to. The tag is carried as
    // metadata only; no conversion between the kinds is ever performed.
    enum class Normalization
    {
        directivity,
        gain,
        realized_gain,
        cm_directivity
    };

    std::string_view to_string(Normalization n);
    Normalization normalization_from_string(std::string_view s);

    // Uniformly spaced sample axis in radians
    struct UniformAxis
    {
        double start = 0.0;
        double step = 0.0;
        Index count = 0;

        double operator[](Index i) const noexcept { return start + static_cast<double>(i) * step; }
        double stop() const noexcept { return (*this)[count - 1]; }
        RealVector samples() const;
    };

    // One port or Characteristic Mode: complex theta / phi far-field components sampled on
    // the set's grid (rows: theta samples, columns: phi samples).
    struct PatternEntry
    {
        std::string name;
        ComplexMatrix e_theta;
        ComplexMatrix e_phi;
        std::optional<double> eigenvalue;

        const ComplexMatrix &component(Polarization pol) const { return pol == Polarization::theta ? e_theta : e_phi; }
    };

    class FarFieldSet
    {
    public:
        // Validates all invariants; throws ValidationError naming the offending entry.
        // The phi axis must span a full revolution (periodic wrap is implied).
        FarFieldSet(UniformAxis theta, UniformAxis phi, Normalization normalization, double frequency_hz,
                    std::vector<PatternEntry> entries);

        Index size() const noexcept { return static_cast<Index>(entries_.size()); }
        const std::vector<PatternEntry> &entries() const noexcept { return entries_; }
        const PatternEntry &entry(Index n) const;

        const UniformAxis &theta_axis() const noexcept { return theta_; }
        const UniformAxis &phi_axis() const noexcept { return phi_; }
        Normalization normalization() const noexcept { return normalization_; }
        double frequency_hz() const noexcept { return frequency_hz_; }

        bool has_eigenvalues() const noexcept;
        bool covers(const Direction &d) const noexcept;

        // Bilinear interpolation of a single component (complex-linear, i.e. real and
        // imaginary parts independently), periodic across the phi seam. Queries at stored
        // nodes return the stored value. Throws std::out_of_range outside the theta range.
        cd sample(Index entry, const Direction &d, Polarization pol) const;

        // Both components at once
        std::pair<cd, cd> sample_vector(Index entry, const Direction &d) const;

        // Entries multiplied by a common complex factor (metadata kept)
        FarFieldSet scaled(cd factor) const;

        // New set holding the listed entries in the given order
        FarFieldSet select(const std::vector<Index> &indices) const;

    private:
        struct Stencil
        {
            Index i0, i1, j0, j1;
            double ft, fp;
        };
        Stencil stencil(const Direction &d) const;

        UniformAxis theta_;
        UniformAxis phi_;
        Normalization normalization_;
        double frequency_hz_;
        std::vector<PatternEntry> entries_;
    };

    inline cd sample(const FarFieldSet &set, Index entry, const Direction &d, Polarization pol)
    {
        return set.sample(entry, d, pol);
    }

    // Integral of |F_theta|^2 + |F_phi|^2 over the sampled region: trapezoidal in theta with
    // the sin(theta) Jacobian, periodic rectangle rule in phi.
    double radiated_power(const FarFieldSet &set, Index entry);

    // Circular shift of every entry by `steps` phi samples: new(phi) = old(phi - steps * dphi)
    FarFieldSet rotate_about_z(const FarFieldSet &set, Index steps);

    // Manifest (JSON) + one CSV per entry; see README for the schema. A directory stands
    // for the manifest.json inside it.
    FarFieldSet load_farfield_set(const std::filesystem::path &path);

    // Writes `<dir>/<manifest_name>` and one CSV per entry next to it
    void save_farfield_set(const FarFieldSet &set, const std::filesystem::path &dir,
                           const std::string &manifest_name = "manifest.json");

} // namespace dfeval
