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

#include "dfeval/errors.hpp"
#include "dfeval/farfield.hpp"
#include "dfeval/geometry.hpp"
#include "dfeval/parallel.hpp"
#include "dfeval/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dfeval
{
    // ------------------------------------------------------------------------------------
    // Column kernels on any complex Eigen matrix whose columns are measurement vectors.
    // Sums run sequentially over rows in the order given (default: natural row order), so
    // results are reproducible and exact zero rows never change them.
    // ------------------------------------------------------------------------------------

    template <typename Derived>
    using real_scalar_t = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

    // ||x_k||^2
    template <typename Derived>
    real_scalar_t<Derived> column_squared_norm(const Eigen::MatrixBase<Derived> &X, Index k,
                                               std::span<const Index> row_order = {})
    {
        real_scalar_t<Derived> s(0);
        if (row_order.empty())
            for (Index p = 0; p < X.rows(); ++p)
                s += std::norm(X(p, k));
        else
            for (Index p : row_order)
                s += std::norm(X(p, k));
        return s;
    }

    // x_a^H x_b
    template <typename Derived>
    typename Derived::Scalar inner_product(const Eigen::MatrixBase<Derived> &X, Index a, Index b,
                                           std::span<const Index> row_order = {})
    {
        typename Derived::Scalar s(0);
        if (row_order.empty())
            for (Index p = 0; p < X.rows(); ++p)
                s += std::conj(X(p, a)) * X(p, b);
        else
            for (Index p : row_order)
                s += std::conj(X(p, a)) * X(p, b);
        return s;
    }

    // Normalized correlation rho = x_a^H x_b / (||x_a|| ||x_b||); exactly 1 for a == b.
    // Throws DegeneracyError for a zero-norm column.
    template <typename Derived>
    typename Derived::Scalar correlation(const Eigen::MatrixBase<Derived> &X, Index a, Index b)
    {
        using R = real_scalar_t<Derived>;
        const R na = column_squared_norm(X, a), nb = column_squared_norm(X, b);
        if (na == R(0))
            throw DegeneracyError("measurement column " + std::to_string(a) + " has zero norm", a);
        if (nb == R(0))
            throw DegeneracyError("measurement column " + std::to_string(b) + " has zero norm", b);
        if (a == b)
            return typename Derived::Scalar(1);
        return inner_product(X, a, b) / (std::sqrt(na) * std::sqrt(nb));
    }

    // Uncertainty parameter u = |rho| / (||x_a|| ||x_b||) = |x_a^H x_b| / (||x_a||^2 ||x_b||^2),
    // with u_aa = 1 / ||x_a||^2.
    template <typename Derived>
    real_scalar_t<Derived> uncertainty(const Eigen::MatrixBase<Derived> &X, Index a, Index b)
    {
        using R = real_scalar_t<Derived>;
        const R na = column_squared_norm(X, a), nb = column_squared_norm(X, b);
        if (na == R(0))
            throw DegeneracyError("measurement column " + std::to_string(a) + " has zero norm", a);
        if (nb == R(0))
            throw DegeneracyError("measurement column " + std::to_string(b) + " has zero norm", b);
        if (a == b)
            return R(1) / na;
        return std::abs(inner_product(X, a, b)) / (na * nb);
    }

    // Row order that depends only on the multiset of rows: lexicographic on (re, im) along
    // the columns. Accumulating in this order makes every result invariant under row
    // permutations of X.
    template <typename Derived>
    std::vector<Index> canonical_row_order(const Eigen::MatrixBase<Derived> &X)
    {
        std::vector<Index> order(static_cast<std::size_t>(X.rows()));
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(), [&](Index r, Index s)
                         {
                             for (Index k = 0; k < X.cols(); ++k)
                             {
                                 const auto a = X(r, k), b = X(s, k);
                                 if (a.real() != b.real())
                                     return a.real() < b.real();
                                 if (a.imag() != b.imag())
                                     return a.imag() < b.imag();
                             }
                             return false; });
        return order;
    }

    // All K x K uncertainties in grid order (unsorted). Exactly symmetric; the diagonal
    // holds 1 / ||x_k||^2. Parallel over columns with identical results for any worker count.
    template <typename Derived>
    RealMatrixT<real_scalar_t<Derived>> uncertainty_values(const Eigen::MatrixBase<Derived> &X, unsigned workers = 1)
    {
        using R = real_scalar_t<Derived>;
        const Index K = X.cols();
        const auto order = canonical_row_order(X);
        const std::span<const Index> rows(order);

        RealVectorT<R> norms(K);
        for (Index k = 0; k < K; ++k)
        {
            norms(k) = column_squared_norm(X, k, rows);
            if (norms(k) == R(0))
                throw DegeneracyError("measurement column " + std::to_string(k) + " has zero norm", k);
        }

        RealMatrixT<R> U(K, K);
        parallel_for(K, workers, [&](Index b)
                     {
                         U(b, b) = R(1) / norms(b);
                         for (Index a = 0; a < b; ++a)
                             U(a, b) = std::abs(inner_product(X, a, b, rows)) / (norms(a) * norms(b)); });
        for (Index b = 0; b < K; ++b)
            for (Index a = 0; a < b; ++a)
                U(b, a) = U(a, b);
        return U;
    }

    // Linear distance weighting w = delta / pi
    inline double linear_weight(double great_circle) noexcept { return great_circle / pi; }

    // ------------------------------------------------------------------------------------
    // Measurement matrices
    // ------------------------------------------------------------------------------------

    enum class MeasurementKind
    {
        port,           // port patterns, normalization as tagged
        cm_directivity, // mode far fields as they are
        cm_realized     // mode rows scaled by 1 / (1 + j lambda_n)
    };

    std::string_view to_string(MeasurementKind kind);
    MeasurementKind measurement_kind_from_string(std::string_view s);

    // P x K matrix: column k stacks the far-field value of every entry at grid DoA k
    struct MeasurementMatrix
    {
        ComplexMatrix values;
        DoAGrid grid;
        Polarization polarization = Polarization::theta;
        MeasurementKind kind = MeasurementKind::port;
        std::vector<std::string> entry_names;

        Index ports() const noexcept { return values.rows(); }
        Index doas() const noexcept { return values.cols(); }

        // Matrix restricted to the given entries (rows), in the given order
        MeasurementMatrix select_rows(std::span<const Index> rows) const;
        MeasurementMatrix scaled(cd factor) const;
    };

    // Throws std::invalid_argument if kind = cm_realized and eigenvalues are missing,
    // std::out_of_range for grid DoAs outside the sampled theta range.
    MeasurementMatrix assemble_measurement_matrix(const FarFieldSet &set, const DoAGrid &grid, Polarization pol,
                                                  MeasurementKind kind);

    // ------------------------------------------------------------------------------------
    // Sorted uncertainty matrix, weights, KPI
    // ------------------------------------------------------------------------------------

    // Columns ordered by the reference DoA's distance to the north pole, rows within each
    // column by distance to that column's reference.
    struct UncertaintyMatrix
    {
        RealMatrix values;                 // sorted, K x K
        std::vector<Index> column_reference_perm; // sorted column -> grid index
        IndexMatrix row_perms;             // (sorted row, sorted column) -> grid index
        RealVector self_terms;             // u_kk in grid order

        Index size() const noexcept { return values.rows(); }

        // Inverse of the double sorting, bit-exact
        RealMatrix unsorted() const;

        // u(reference, .) in grid order
        RealVector column_for(Index reference) const;
    };

    UncertaintyMatrix uncertainty_matrix(const MeasurementMatrix &X, const GridMetric &metric, unsigned workers = 1);
    UncertaintyMatrix uncertainty_matrix(const MeasurementMatrix &X, unsigned workers = 1);

    // Same as above from an already computed unsorted matrix
    UncertaintyMatrix sort_uncertainty(const RealMatrix &unsorted, const GridMetric &metric);

    // Distance weights laid out like U (same double sorting)
    RealMatrix weight_matrix(const UncertaintyMatrix &U, const GridMetric &metric);
    RealMatrix weight_matrix(const UncertaintyMatrix &U, const DoAGrid &grid);

    // Weights in the metric's own double sorting, shared by every matrix on that grid
    RealMatrix weight_matrix(const GridMetric &metric);

    struct Kpi
    {
        double linear = 0.0;
        double db = 0.0;
    };

    // Inverse mean of |u| * w over all K^2 entries, summed column-major over the sorted
    // layout. Throws DegeneracyError if the weighted sum vanishes.
    Kpi kpi(const UncertaintyMatrix &U, const RealMatrix &W);

    // ------------------------------------------------------------------------------------
    // Ambiguity detection
    // ------------------------------------------------------------------------------------

    struct AmbiguityOptions
    {
        double exclusion_radius = deg2rad(30.0);
        double relative_threshold = 0.5;
    };

    struct AmbiguityFinding
    {
        Index reference;   // grid index
        Index test;        // grid index
        double u;          // u(reference, test)
        double normalized; // u / sqrt(u_ref,ref * u_test,test)
        double distance;   // great-circle, rad
    };

    struct AmbiguityReport
    {
        std::vector<std::vector<AmbiguityFinding>> per_reference; // indexed by grid index

        Index total() const noexcept;
        Index references_affected() const noexcept;
    };

    // Reports, per reference DoA, test DoAs farther than the exclusion radius that are local
    // maxima of the power-normalized uncertainty u / sqrt(u_aa u_bb) over the grid's
    // nearest-neighbour structure and reach the relative threshold on that scale. The
    // normalization removes the received-power gradient that would otherwise turn every
    // weak-field cap edge into a spurious maximum.
    AmbiguityReport detect_ambiguities(const UncertaintyMatrix &U, const GridMetric &metric,
                                       const AmbiguityOptions &options = {});

    // Sorted U as CSV (K x K) plus the two permutation side files
    void write_uncertainty_csv(const UncertaintyMatrix &U, const std::filesystem::path &values_path,
                               const std::filesystem::path &column_perm_path,
                               const std::filesystem::path &row_perms_path);
    UncertaintyMatrix read_uncertainty_csv(const std::filesystem::path &values_path,
                                           const std::filesystem::path &column_perm_path,
                                           const std::filesystem::path &row_perms_path);

    // `theta_deg,phi_deg,u` for one reference, grid order
    void write_uncertainty_vector_csv(const UncertaintyMatrix &U, const DoAGrid &grid, Index reference,
                                      const std::filesystem::path &path);

} // namespace dfeval
