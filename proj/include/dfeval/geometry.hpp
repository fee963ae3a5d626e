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

#include "dfeval/types.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <vector>

namespace dfeval
{
    // Direction of arrival in spherical coordinates. theta is the polar angle from +z in
    // [0, pi], phi the azimuth, normalized into [0, 2*pi). All angles in radians.
    class Direction
    {
    public:
        Direction() = default;
        Direction(double theta, double phi); // throws std::invalid_argument for theta outside [0, pi]

        static Direction from_degrees(double theta_deg, double phi_deg);

        double theta() const noexcept { return theta_; }
        double phi() const noexcept { return phi_; }
        double theta_deg() const noexcept { return rad2deg(theta_); }
        double phi_deg() const noexcept { return rad2deg(phi_); }

        bool is_pole() const noexcept { return theta_ == 0.0 || theta_ == pi; }
        Eigen::Vector3d unit_vector() const;

        // Physical equality: at the poles the azimuth is irrelevant
        friend bool operator==(const Direction &a, const Direction &b) noexcept;

    private:
        double theta_ = 0.0;
        double phi_ = 0.0;
    };

    // Wraps an angle into [0, 2*pi)
    double wrap_two_pi(double angle) noexcept;

    // Great-circle distance on the unit sphere in [0, pi]. Exactly zero for physically
    // identical directions; the arccos argument is clamped to [-1, 1].
    double great_circle_distance(const Direction &a, const Direction &b) noexcept;

    // Ordered set of evaluation DoAs on a spherical cap with solid-angle weights (sr).
    struct DoAGrid
    {
        std::vector<Direction> directions;
        RealVector cell_weights;
        double theta_min = 0.0;
        double theta_max = 0.0;

        Index size() const noexcept { return static_cast<Index>(directions.size()); }
        const Direction &operator[](Index k) const { return directions[static_cast<std::size_t>(k)]; }

        // Index of the grid direction closest (great-circle) to d, ties to the lower index
        Index nearest(const Direction &d) const;
    };

    // Solid angle of the cap theta_min <= theta <= theta_max
    double cap_solid_angle(double theta_min, double theta_max) noexcept;

    // Deterministic equal-area ring grid on the cap [theta_min, theta_max] with exactly
    // target_count points. Both cap bounds carry a ring; per-ring counts are proportional
    // to the area of the band each ring represents.
    DoAGrid generate_cap_grid(double theta_min, double theta_max, Index target_count);

    // Regular lat-long grid (rings every theta_step, phi_step spacing from phi=0). Weights
    // are exact band areas, so they also serve as a surface quadrature.
    DoAGrid product_grid(double theta_min, double theta_max, double theta_step, double phi_step);

    // Permutation (sorted position -> grid index) ordering directions by ascending distance
    // to the north pole; ties by ascending phi, then by grid index.
    std::vector<Index> sort_reference_order(const DoAGrid &grid);

    // Same ordering rule relative to an arbitrary reference
    std::vector<Index> sort_by_distance(const DoAGrid &grid, const Direction &reference);

    // Pairwise great-circle distances, exactly symmetric
    RealMatrix distance_matrix(const DoAGrid &grid);

    // The `count` nearest grid neighbours of every grid point (excluding itself), ordered by
    // distance then index.
    std::vector<std::vector<Index>> nearest_neighbors(const RealMatrix &distances, Index count);

    // Grid-dependent data shared by every uncertainty matrix on one grid: pairwise
    // distances, the double sort order and the nearest-neighbour structure.
    class GridMetric
    {
    public:
        explicit GridMetric(DoAGrid grid, Index neighbor_count = 6);

        const DoAGrid &grid() const noexcept { return grid_; }
        Index size() const noexcept { return grid_.size(); }
        const RealMatrix &distances() const noexcept { return distances_; }

        // sorted column -> grid index of the reference DoA
        const std::vector<Index> &column_order() const noexcept { return column_order_; }
        // (sorted row, sorted column) -> grid index of the test DoA
        const IndexMatrix &row_order() const noexcept { return row_order_; }
        const std::vector<std::vector<Index>> &neighbors() const noexcept { return neighbors_; }

    private:
        DoAGrid grid_;
        RealMatrix distances_;
        std::vector<Index> column_order_;
        IndexMatrix row_order_;
        std::vector<std::vector<Index>> neighbors_;
    };

    // CSV with header `index,theta_deg,phi_deg,weight_sr`, 17 significant digits
    void write_grid_csv(const DoAGrid &grid, const std::filesystem::path &path);
    DoAGrid read_grid_csv(const std::filesystem::path &path);

} // namespace dfeval
