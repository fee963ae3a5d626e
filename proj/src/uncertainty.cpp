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

#include "dfeval/uncertainty.hpp"
#include "dfeval/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace dfeval
{
    std::string_view to_string(MeasurementKind kind)
    {
        switch (kind)
        {
        case MeasurementKind::port:
            return "port";
        case MeasurementKind::cm_directivity:
            return "cm-directivity";
        case MeasurementKind::cm_realized:
            return "cm-realized";
        }
        return "port";
    }

    MeasurementKind measurement_kind_from_string(std::string_view s)
    {
        if (s == "port")
            return MeasurementKind::port;
        if (s == "cm-directivity" || s == "directivity")
            return MeasurementKind::cm_directivity;
        if (s == "cm-realized" || s == "realized")
            return MeasurementKind::cm_realized;
        throw std::invalid_argument("unknown matrix kind '" + std::string(s) + "'");
    }

    MeasurementMatrix MeasurementMatrix::select_rows(std::span<const Index> rows) const
    {
        MeasurementMatrix out;
        out.values.resize(static_cast<Index>(rows.size()), values.cols());
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            if (rows[i] < 0 || rows[i] >= ports())
                throw std::out_of_range("row index " + std::to_string(rows[i]) + " out of range");
            out.values.row(static_cast<Index>(i)) = values.row(rows[i]);
            out.entry_names.push_back(entry_names[static_cast<std::size_t>(rows[i])]);
        }
        out.grid = grid;
        out.polarization = polarization;
        out.kind = kind;
        return out;
    }

    MeasurementMatrix MeasurementMatrix::scaled(cd factor) const
    {
        MeasurementMatrix out = *this;
        out.values *= factor;
        return out;
    }

    MeasurementMatrix assemble_measurement_matrix(const FarFieldSet &set, const DoAGrid &grid, Polarization pol,
                                                  MeasurementKind kind)
    {
        if (kind == MeasurementKind::cm_realized)
            for (const auto &e : set.entries())
                if (!e.eigenvalue)
                    throw std::invalid_argument("realized matrix requested but entry '" + e.name +
                                                "' carries no eigenvalue");

        MeasurementMatrix X;
        X.grid = grid;
        X.polarization = pol;
        X.kind = kind;
        X.values.resize(set.size(), grid.size());
        for (Index p = 0; p < set.size(); ++p)
        {
            X.entry_names.push_back(set.entry(p).name);
            const cd scale = kind == MeasurementKind::cm_realized ? 1.0 / cd(1.0, *set.entry(p).eigenvalue) : cd(1.0);
            for (Index k = 0; k < grid.size(); ++k)
            {
                const cd v = set.sample(p, grid[k], pol);
                X.values(p, k) = kind == MeasurementKind::cm_realized ? v * scale : v;
            }
        }
        return X;
    }

    // ------------------------------------------------------------------------------------

    RealMatrix UncertaintyMatrix::unsorted() const
    {
        const Index K = size();
        RealMatrix out(K, K);
        for (Index c = 0; c < K; ++c)
        {
            const Index ref = column_reference_perm[static_cast<std::size_t>(c)];
            for (Index r = 0; r < K; ++r)
                out(row_perms(r, c), ref) = values(r, c);
        }
        return out;
    }

    RealVector UncertaintyMatrix::column_for(Index reference) const
    {
        const auto it = std::find(column_reference_perm.begin(), column_reference_perm.end(), reference);
        if (it == column_reference_perm.end())
            throw std::out_of_range("reference index " + std::to_string(reference) + " not in matrix");
        const Index c = it - column_reference_perm.begin();
        RealVector out(size());
        for (Index r = 0; r < size(); ++r)
            out(row_perms(r, c)) = values(r, c);
        return out;
    }

    UncertaintyMatrix sort_uncertainty(const RealMatrix &unsorted, const GridMetric &metric)
    {
        const Index K = metric.size();
        if (unsorted.rows() != K || unsorted.cols() != K)
            throw std::invalid_argument("uncertainty matrix and grid sizes differ");
        UncertaintyMatrix U;
        U.column_reference_perm = metric.column_order();
        U.row_perms = metric.row_order();
        U.values.resize(K, K);
        for (Index c = 0; c < K; ++c)
        {
            const Index ref = U.column_reference_perm[static_cast<std::size_t>(c)];
            for (Index r = 0; r < K; ++r)
                U.values(r, c) = unsorted(U.row_perms(r, c), ref);
        }
        U.self_terms = unsorted.diagonal();
        return U;
    }

    UncertaintyMatrix uncertainty_matrix(const MeasurementMatrix &X, const GridMetric &metric, unsigned workers)
    {
        if (X.doas() != metric.size())
            throw std::invalid_argument("measurement matrix and grid sizes differ");
        RealMatrix raw;
        try
        {
            raw = uncertainty_values(X.values, workers);
        }
        catch (const DegeneracyError &e)
        {
            const auto &d = metric.grid()[e.index()];
            char buf[160];
            std::snprintf(buf, sizeof(buf), "zero-norm measurement column at DoA %lld (theta %.6g deg, phi %.6g deg)",
                          e.index(), d.theta_deg(), d.phi_deg());
            throw DegeneracyError(buf, e.index());
        }
        return sort_uncertainty(raw, metric);
    }

    UncertaintyMatrix uncertainty_matrix(const MeasurementMatrix &X, unsigned workers)
    {
        return uncertainty_matrix(X, GridMetric(X.grid), workers);
    }

    RealMatrix weight_matrix(const UncertaintyMatrix &U, const GridMetric &metric)
    {
        const Index K = U.size();
        if (metric.size() != K)
            throw std::invalid_argument("uncertainty matrix and grid sizes differ");
        RealMatrix W(K, K);
        for (Index c = 0; c < K; ++c)
        {
            const Index ref = U.column_reference_perm[static_cast<std::size_t>(c)];
            for (Index r = 0; r < K; ++r)
                W(r, c) = linear_weight(metric.distances()(U.row_perms(r, c), ref));
        }
        return W;
    }

    RealMatrix weight_matrix(const GridMetric &metric)
    {
        const Index K = metric.size();
        RealMatrix W(K, K);
        for (Index c = 0; c < K; ++c)
        {
            const Index ref = metric.column_order()[static_cast<std::size_t>(c)];
            for (Index r = 0; r < K; ++r)
                W(r, c) = linear_weight(metric.distances()(metric.row_order()(r, c), ref));
        }
        return W;
    }

    RealMatrix weight_matrix(const UncertaintyMatrix &U, const DoAGrid &grid)
    {
        const Index K = U.size();
        if (grid.size() != K)
            throw std::invalid_argument("uncertainty matrix and grid sizes differ");
        RealMatrix W(K, K);
        for (Index c = 0; c < K; ++c)
        {
            const auto &ref = grid[U.column_reference_perm[static_cast<std::size_t>(c)]];
            for (Index r = 0; r < K; ++r)
                W(r, c) = linear_weight(great_circle_distance(grid[U.row_perms(r, c)], ref));
        }
        return W;
    }

    Kpi kpi(const UncertaintyMatrix &U, const RealMatrix &W)
    {
        const Index K = U.size();
        if (W.rows() != K || W.cols() != K)
            throw std::invalid_argument("weight matrix dimensions differ from the uncertainty matrix");
        double sum = 0.0;
        for (Index c = 0; c < K; ++c)
            for (Index r = 0; r < K; ++r)
                sum += std::abs(U.values(r, c)) * W(r, c);
        if (!(sum > 0.0))
            throw DegeneracyError("weighted uncertainty sum vanishes; the KPI is undefined");
        const double mean = sum / (static_cast<double>(K) * static_cast<double>(K));
        Kpi out;
        out.linear = 1.0 / mean;
        out.db = 10.0 * std::log10(out.linear);
        return out;
    }

    // ------------------------------------------------------------------------------------

    Index AmbiguityReport::total() const noexcept
    {
        Index n = 0;
        for (const auto &r : per_reference)
            n += static_cast<Index>(r.size());
        return n;
    }

    Index AmbiguityReport::references_affected() const noexcept
    {
        Index n = 0;
        for (const auto &r : per_reference)
            n += r.empty() ? 0 : 1;
        return n;
    }

    AmbiguityReport detect_ambiguities(const UncertaintyMatrix &U, const GridMetric &metric,
                                       const AmbiguityOptions &options)
    {
        if (!(options.exclusion_radius > 0.0))
            throw std::invalid_argument("exclusion radius must be positive");
        if (!(options.relative_threshold > 0.0) || options.relative_threshold > 1.0)
            throw std::invalid_argument("relative threshold must lie in (0, 1]");
        const Index K = U.size();
        if (metric.size() != K)
            throw std::invalid_argument("uncertainty matrix and grid sizes differ");

        const RealMatrix raw = U.unsorted();
        const RealVector root_self = raw.diagonal().cwiseSqrt();
        const auto &D = metric.distances();
        const auto &nbrs = metric.neighbors();

        AmbiguityReport report;
        report.per_reference.resize(static_cast<std::size_t>(K));
        RealVector normalized(K);
        for (Index a = 0; a < K; ++a)
        {
            for (Index b = 0; b < K; ++b)
                normalized(b) = raw(a, b) / (root_self(a) * root_self(b));
            auto &found = report.per_reference[static_cast<std::size_t>(a)];
            for (Index b = 0; b < K; ++b)
            {
                if (!(D(a, b) > options.exclusion_radius) || normalized(b) < options.relative_threshold)
                    continue;
                bool is_max = true;
                for (Index n : nbrs[static_cast<std::size_t>(b)])
                    if (normalized(n) > normalized(b))
                    {
                        is_max = false;
                        break;
                    }
                if (is_max)
                    found.push_back({a, b, raw(a, b), normalized(b), D(a, b)});
            }
        }
        return report;
    }

    // ------------------------------------------------------------------------------------

    namespace
    {
        std::string index_header(Index K)
        {
            std::string h;
            for (Index c = 0; c < K; ++c)
            {
                if (c)
                    h += ',';
                h += "c" + std::to_string(c);
            }
            return h;
        }

        template <typename Matrix>
        void write_square(const Matrix &M, const std::filesystem::path &path)
        {
            csv::Writer w(path);
            w.header(index_header(M.cols()));
            std::vector<double> row(static_cast<std::size_t>(M.cols()));
            for (Index r = 0; r < M.rows(); ++r)
            {
                for (Index c = 0; c < M.cols(); ++c)
                    row[static_cast<std::size_t>(c)] = static_cast<double>(M(r, c));
                w.row(row);
            }
        }

        RealMatrix read_square(const std::filesystem::path &path)
        {
            const auto t = csv::read(path);
            const auto K = static_cast<Index>(t.header.size());
            if (static_cast<Index>(t.rows.size()) != K)
                throw ValidationError(path.string() + ": expected a square " + std::to_string(K) + " x " +
                                      std::to_string(K) + " table");
            RealMatrix M(K, K);
            for (Index r = 0; r < K; ++r)
                for (Index c = 0; c < K; ++c)
                    M(r, c) = t.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            return M;
        }

        Index to_index(double v, Index K, const std::filesystem::path &path)
        {
            const auto i = static_cast<Index>(v);
            if (static_cast<double>(i) != v || i < 0 || i >= K)
                throw ValidationError(path.string() + ": invalid index " + csv::format(v));
            return i;
        }
    } // namespace

    void write_uncertainty_csv(const UncertaintyMatrix &U, const std::filesystem::path &values_path,
                               const std::filesystem::path &column_perm_path,
                               const std::filesystem::path &row_perms_path)
    {
        write_square(U.values, values_path);
        csv::Writer w(column_perm_path);
        w.header("sorted_column,grid_index");
        for (std::size_t c = 0; c < U.column_reference_perm.size(); ++c)
            w.row({static_cast<double>(c), static_cast<double>(U.column_reference_perm[c])});
        write_square(U.row_perms, row_perms_path);
    }

    UncertaintyMatrix read_uncertainty_csv(const std::filesystem::path &values_path,
                                           const std::filesystem::path &column_perm_path,
                                           const std::filesystem::path &row_perms_path)
    {
        UncertaintyMatrix U;
        U.values = read_square(values_path);
        const Index K = U.values.rows();

        const auto cols = csv::read(column_perm_path, "sorted_column,grid_index");
        if (static_cast<Index>(cols.rows.size()) != K)
            throw ValidationError(column_perm_path.string() + ": expected " + std::to_string(K) + " rows");
        for (const auto &r : cols.rows)
            U.column_reference_perm.push_back(to_index(r[1], K, column_perm_path));

        const RealMatrix rows = read_square(row_perms_path);
        if (rows.rows() != K)
            throw ValidationError(row_perms_path.string() + ": size differs from the value matrix");
        U.row_perms.resize(K, K);
        for (Index r = 0; r < K; ++r)
            for (Index c = 0; c < K; ++c)
                U.row_perms(r, c) = to_index(rows(r, c), K, row_perms_path);

        U.self_terms = U.unsorted().diagonal();
        return U;
    }

    void write_uncertainty_vector_csv(const UncertaintyMatrix &U, const DoAGrid &grid, Index reference,
                                      const std::filesystem::path &path)
    {
        const RealVector u = U.column_for(reference);
        csv::Writer w(path);
        w.header("theta_deg,phi_deg,u");
        for (Index k = 0; k < grid.size(); ++k)
            w.row({grid[k].theta_deg(), grid[k].phi_deg(), u(k)});
    }

} // namespace dfeval
