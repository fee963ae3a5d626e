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

#include "dfeval/geometry.hpp"
#include "dfeval/csv.hpp"
#include "dfeval/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dfeval
{
    double wrap_two_pi(double angle) noexcept
    {
        double r = std::fmod(angle, 2.0 * pi);
        if (r < 0.0)
            r += 2.0 * pi;
        if (r >= 2.0 * pi) // fmod of a tiny negative value can round up to 2*pi
            r = 0.0;
        return r;
    }

    Direction::Direction(double theta, double phi)
    {
        if (!std::isfinite(theta) || !std::isfinite(phi))
            throw std::invalid_argument("direction angles must be finite");
        if (theta < 0.0 || theta > pi)
            throw std::invalid_argument("theta = " + std::to_string(theta) + " rad is outside [0, pi]");
        theta_ = theta;
        phi_ = wrap_two_pi(phi);
    }

    Direction Direction::from_degrees(double theta_deg, double phi_deg)
    {
        // 180 deg maps to pi exactly, keeps the poles representable
        const double theta = theta_deg == 180.0 ? pi : deg2rad(theta_deg);
        return Direction(theta, deg2rad(phi_deg));
    }

    Eigen::Vector3d Direction::unit_vector() const
    {
        const double st = std::sin(theta_);
        return {st * std::cos(phi_), st * std::sin(phi_), std::cos(theta_)};
    }

    bool operator==(const Direction &a, const Direction &b) noexcept
    {
        if (a.theta_ != b.theta_)
            return false;
        return a.is_pole() || a.phi_ == b.phi_;
    }

    double great_circle_distance(const Direction &a, const Direction &b) noexcept
    {
        if (a == b)
            return 0.0;
        const double c = std::cos(a.theta()) * std::cos(b.theta()) +
                         std::sin(a.theta()) * std::sin(b.theta()) * std::cos(b.phi() - a.phi());
        return std::acos(std::clamp(c, -1.0, 1.0));
    }

    double cap_solid_angle(double theta_min, double theta_max) noexcept
    {
        return 2.0 * pi * (std::cos(theta_min) - std::cos(theta_max));
    }

    Index DoAGrid::nearest(const Direction &d) const
    {
        if (directions.empty())
            throw std::invalid_argument("nearest() on an empty grid");
        Index best = 0;
        double best_dist = great_circle_distance(d, directions.front());
        for (Index k = 1; k < size(); ++k)
        {
            const double dist = great_circle_distance(d, (*this)[k]);
            if (dist < best_dist)
            {
                best_dist = dist;
                best = k;
            }
        }
        return best;
    }

    namespace
    {
        // Largest-remainder apportionment of `total` points over bands, at least one each
        std::vector<Index> apportion(const std::vector<double> &areas, Index total)
        {
            const double sum = std::accumulate(areas.begin(), areas.end(), 0.0);
            const std::size_t n = areas.size();
            std::vector<double> quota(n);
            std::vector<Index> count(n);
            Index assigned = 0;
            for (std::size_t i = 0; i < n; ++i)
            {
                quota[i] = static_cast<double>(total) * areas[i] / sum;
                count[i] = std::max<Index>(1, static_cast<Index>(std::floor(quota[i])));
                assigned += count[i];
            }

            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            // Remainders descending, ties by ring index
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b)
                             { return quota[a] - static_cast<double>(count[a]) > quota[b] - static_cast<double>(count[b]); });
            for (std::size_t i = 0; assigned < total; i = (i + 1) % n)
            {
                ++count[order[i]];
                ++assigned;
            }
            // Over-assignment only happens when minimum-one rings exceed their quota
            while (assigned > total)
            {
                std::size_t worst = 0;
                double worst_excess = -1e300;
                for (std::size_t i = 0; i < n; ++i)
                {
                    const double excess = static_cast<double>(count[i]) - quota[i];
                    if (count[i] > 1 && excess > worst_excess)
                    {
                        worst_excess = excess;
                        worst = i;
                    }
                }
                --count[worst];
                --assigned;
            }
            return count;
        }

        void push_ring(DoAGrid &grid, std::vector<double> &weights, double theta, Index count, double area, double offset)
        {
            const double step = 2.0 * pi / static_cast<double>(count);
            for (Index j = 0; j < count; ++j)
            {
                grid.directions.emplace_back(theta, (static_cast<double>(j) + offset) * step);
                weights.push_back(area / static_cast<double>(count));
            }
        }
    } // namespace

    DoAGrid generate_cap_grid(double theta_min, double theta_max, Index target_count)
    {
        if (!(theta_min >= 0.0 && theta_min < theta_max && theta_max <= pi / 2.0 + 1e-15))
            throw std::invalid_argument("cap bounds must satisfy 0 <= theta_min < theta_max <= pi/2");
        if (target_count < 1)
            throw std::invalid_argument("target_count must be positive");
        theta_max = std::min(theta_max, pi / 2.0);

        DoAGrid grid;
        grid.theta_min = theta_min;
        grid.theta_max = theta_max;
        std::vector<double> weights;

        const double total_area = cap_solid_angle(theta_min, theta_max);
        const double spacing = std::sqrt(total_area / static_cast<double>(target_count));
        Index rings = static_cast<Index>(std::lround((theta_max - theta_min) / spacing)) + 1;
        rings = std::min(rings, target_count);

        if (rings <= 1)
        {
            // Ring splitting the cap into two halves of equal area
            const double theta_c = std::acos(0.5 * (std::cos(theta_min) + std::cos(theta_max)));
            push_ring(grid, weights, theta_c, target_count, total_area, 0.0);
        }
        else
        {
            std::vector<double> theta(static_cast<std::size_t>(rings));
            const double dtheta = (theta_max - theta_min) / static_cast<double>(rings - 1);
            for (Index i = 0; i < rings; ++i)
                theta[static_cast<std::size_t>(i)] = theta_min + static_cast<double>(i) * dtheta;
            theta.back() = theta_max;

            std::vector<double> areas(theta.size());
            for (std::size_t i = 0; i < theta.size(); ++i)
            {
                const double lo = i == 0 ? theta_min : 0.5 * (theta[i - 1] + theta[i]);
                const double hi = i + 1 == theta.size() ? theta_max : 0.5 * (theta[i] + theta[i + 1]);
                areas[i] = cap_solid_angle(lo, hi);
            }
            const auto counts = apportion(areas, target_count);
            for (std::size_t i = 0; i < theta.size(); ++i)
                push_ring(grid, weights, theta[i], counts[i], areas[i], (i % 2) ? 0.5 : 0.0);
        }
        grid.cell_weights = Eigen::Map<const RealVector>(weights.data(), static_cast<Index>(weights.size()));
        return grid;
    }

    DoAGrid product_grid(double theta_min, double theta_max, double theta_step, double phi_step)
    {
        if (!(theta_min >= 0.0 && theta_min < theta_max && theta_max <= pi))
            throw std::invalid_argument("product grid bounds must satisfy 0 <= theta_min < theta_max <= pi");
        if (!(theta_step > 0.0 && phi_step > 0.0))
            throw std::invalid_argument("grid steps must be positive");

        const double span = theta_max - theta_min;
        const Index n_theta = static_cast<Index>(std::lround(span / theta_step)) + 1;
        if (std::abs(static_cast<double>(n_theta - 1) * theta_step - span) > 1e-9 * span)
            throw std::invalid_argument("theta step does not divide the theta range");
        const Index n_phi = static_cast<Index>(std::lround(2.0 * pi / phi_step));
        if (n_phi < 1 || std::abs(static_cast<double>(n_phi) * phi_step - 2.0 * pi) > 1e-9 * 2.0 * pi)
            throw std::invalid_argument("phi step does not divide a full revolution");

        DoAGrid grid;
        grid.theta_min = theta_min;
        grid.theta_max = theta_max;
        std::vector<double> weights;
        for (Index i = 0; i < n_theta; ++i)
        {
            double theta = i + 1 == n_theta ? theta_max : theta_min + static_cast<double>(i) * theta_step;
            const double lo = i == 0 ? theta_min : theta - 0.5 * theta_step;
            const double hi = i + 1 == n_theta ? theta_max : theta + 0.5 * theta_step;
            push_ring(grid, weights, theta, n_phi, cap_solid_angle(lo, hi), 0.0);
        }
        grid.cell_weights = Eigen::Map<const RealVector>(weights.data(), static_cast<Index>(weights.size()));
        return grid;
    }

    std::vector<Index> sort_by_distance(const DoAGrid &grid, const Direction &reference)
    {
        std::vector<double> dist(grid.directions.size());
        for (Index k = 0; k < grid.size(); ++k)
            dist[static_cast<std::size_t>(k)] = great_circle_distance(reference, grid[k]);

        std::vector<Index> order(grid.directions.size());
        std::iota(order.begin(), order.end(), Index{0});
        std::sort(order.begin(), order.end(), [&](Index a, Index b)
                  {
                      const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
                      if (dist[ua] != dist[ub])
                          return dist[ua] < dist[ub];
                      if (grid[a].phi() != grid[b].phi())
                          return grid[a].phi() < grid[b].phi();
                      return a < b; });
        return order;
    }

    std::vector<Index> sort_reference_order(const DoAGrid &grid)
    {
        if (grid.directions.empty())
            throw std::invalid_argument("cannot sort an empty grid");
        return sort_by_distance(grid, Direction(0.0, 0.0));
    }

    RealMatrix distance_matrix(const DoAGrid &grid)
    {
        const Index K = grid.size();
        RealMatrix d(K, K);
        for (Index j = 0; j < K; ++j)
        {
            d(j, j) = 0.0;
            for (Index i = j + 1; i < K; ++i)
            {
                d(i, j) = great_circle_distance(grid[j], grid[i]);
                d(j, i) = d(i, j);
            }
        }
        return d;
    }

    std::vector<std::vector<Index>> nearest_neighbors(const RealMatrix &distances, Index count)
    {
        const Index K = distances.rows();
        count = std::clamp<Index>(count, 0, std::max<Index>(K - 1, 0));
        std::vector<std::vector<Index>> out(static_cast<std::size_t>(K));
        std::vector<Index> idx;
        for (Index i = 0; i < K; ++i)
        {
            idx.clear();
            for (Index j = 0; j < K; ++j)
                if (j != i)
                    idx.push_back(j);
            const auto by_distance = [&](Index a, Index b)
            {
                if (distances(i, a) != distances(i, b))
                    return distances(i, a) < distances(i, b);
                return a < b;
            };
            std::partial_sort(idx.begin(), idx.begin() + count, idx.end(), by_distance);
            out[static_cast<std::size_t>(i)].assign(idx.begin(), idx.begin() + count);
        }
        return out;
    }

    GridMetric::GridMetric(DoAGrid grid, Index neighbor_count)
        : grid_(std::move(grid)), distances_(distance_matrix(grid_))
    {
        column_order_ = sort_reference_order(grid_);
        const Index K = grid_.size();
        row_order_.resize(K, K);
        std::vector<Index> order(static_cast<std::size_t>(K));
        for (Index c = 0; c < K; ++c)
        {
            const Index ref = column_order_[static_cast<std::size_t>(c)];
            std::iota(order.begin(), order.end(), Index{0});
            std::sort(order.begin(), order.end(), [&](Index a, Index b)
                      {
                          if (distances_(a, ref) != distances_(b, ref))
                              return distances_(a, ref) < distances_(b, ref);
                          if (grid_[a].phi() != grid_[b].phi())
                              return grid_[a].phi() < grid_[b].phi();
                          return a < b; });
            for (Index r = 0; r < K; ++r)
                row_order_(r, c) = order[static_cast<std::size_t>(r)];
        }
        neighbors_ = nearest_neighbors(distances_, neighbor_count);
    }

    void write_grid_csv(const DoAGrid &grid, const std::filesystem::path &path)
    {
        csv::Writer w(path);
        w.header("index,theta_deg,phi_deg,weight_sr");
        for (Index k = 0; k < grid.size(); ++k)
            w.row({static_cast<double>(k), grid[k].theta_deg(), grid[k].phi_deg(), grid.cell_weights(k)});
    }

    DoAGrid read_grid_csv(const std::filesystem::path &path)
    {
        const auto table = csv::read(path, "index,theta_deg,phi_deg,weight_sr");
        if (table.rows.empty())
            throw ValidationError(path.string() + ": grid has no rows");
        DoAGrid grid;
        grid.cell_weights.resize(static_cast<Index>(table.rows.size()));
        for (std::size_t k = 0; k < table.rows.size(); ++k)
        {
            const auto &r = table.rows[k];
            if (r[0] != static_cast<double>(k))
                throw ValidationError(path.string() + ": grid indices must be consecutive from 0");
            grid.directions.push_back(Direction::from_degrees(r[1], r[2]));
            grid.cell_weights(static_cast<Index>(k)) = r[3];
        }
        const auto [lo, hi] = std::minmax_element(grid.directions.begin(), grid.directions.end(),
                                                  [](const Direction &a, const Direction &b)
                                                  { return a.theta() < b.theta(); });
        grid.theta_min = lo->theta();
        grid.theta_max = hi->theta();
        return grid;
    }

} // namespace dfeval
