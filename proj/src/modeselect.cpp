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

#include "dfeval/modeselect.hpp"
#include "dfeval/csv.hpp"
#include "dfeval/errors.hpp"
#include "dfeval/parallel.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace dfeval
{
    namespace
    {
        void combinations(Index n, Index k, Index start, IndexSet &current, std::vector<IndexSet> &out)
        {
            if (static_cast<Index>(current.size()) == k)
            {
                out.push_back(current);
                return;
            }
            for (Index i = start; i < n; ++i)
            {
                current.push_back(i);
                combinations(n, k, i + 1, current, out);
                current.pop_back();
            }
        }

        std::string join_indices(const IndexSet &s)
        {
            std::string out;
            for (std::size_t i = 0; i < s.size(); ++i)
            {
                if (i)
                    out += ' ';
                out += std::to_string(s[i]);
            }
            return out;
        }
    } // namespace

    Enumeration enumerate_subsets(const MeasurementMatrix &full, const GridMetric &metric,
                                  const EnumerationOptions &options)
    {
        const Index N = full.ports();
        if (N > max_enumerated_entries)
            throw std::invalid_argument("exhaustive enumeration is limited to " +
                                        std::to_string(max_enumerated_entries) + " entries");
        const Index max_size = options.max_size == 0 ? N : options.max_size;
        if (options.min_size < 1 || options.min_size > max_size || max_size > N)
            throw std::invalid_argument("subset sizes must satisfy 1 <= min <= max <= " + std::to_string(N));
        if (metric.size() != full.doas())
            throw std::invalid_argument("grid metric and measurement matrix sizes differ");

        std::vector<IndexSet> subsets;
        IndexSet current;
        for (Index k = options.min_size; k <= max_size; ++k)
            combinations(N, k, 0, current, subsets);
        std::sort(subsets.begin(), subsets.end());

        const RealMatrix W = weight_matrix(metric);
        std::vector<std::optional<SubsetResult>> ok(subsets.size());
        std::vector<std::optional<SubsetFailure>> failed(subsets.size());

        parallel_for(static_cast<Index>(subsets.size()), options.workers, [&](Index i)
                     {
                         const auto &s = subsets[static_cast<std::size_t>(i)];
                         const MeasurementMatrix X = full.select_rows(s);
                         try
                         {
                             const auto U = sort_uncertainty(uncertainty_values(X.values), metric);
                             const auto k = kpi(U, W);
                             const auto amb = detect_ambiguities(U, metric, options.ambiguity);
                             ok[static_cast<std::size_t>(i)] = SubsetResult{s, k.linear, k.db, full.kind, amb.total()};
                         }
                         catch (const DegeneracyError &e)
                         {
                             failed[static_cast<std::size_t>(i)] = SubsetFailure{s, static_cast<Index>(e.index()), e.what()};
                         } });

        Enumeration out;
        out.entry_names = full.entry_names;
        for (std::size_t i = 0; i < subsets.size(); ++i)
        {
            if (ok[i])
                out.results.push_back(std::move(*ok[i]));
            if (failed[i])
                out.failures.push_back(std::move(*failed[i]));
        }
        return out;
    }

    Enumeration enumerate_subsets(const FarFieldSet &set, const DoAGrid &grid, Polarization pol,
                                  MeasurementKind kind, Index min_size, Index max_size, unsigned workers)
    {
        const auto X = assemble_measurement_matrix(set, grid, pol, kind);
        EnumerationOptions o;
        o.min_size = min_size;
        o.max_size = max_size;
        o.workers = workers;
        return enumerate_subsets(X, GridMetric(grid), o);
    }

    std::vector<BestSets> best_per_cardinality(const std::vector<SubsetResult> &results, double tolerance_db)
    {
        std::map<Index, std::vector<const SubsetResult *>> by_size;
        for (const auto &r : results)
            by_size[static_cast<Index>(r.entry_indices.size())].push_back(&r);

        std::vector<BestSets> out;
        for (auto &[size, group] : by_size)
        {
            std::stable_sort(group.begin(), group.end(), [](const SubsetResult *a, const SubsetResult *b)
                             { return a->kpi_db > b->kpi_db; });
            BestSets b;
            b.size = size;
            b.kpi_db = group.front()->kpi_db;
            for (const auto *r : group)
                if (b.kpi_db - r->kpi_db <= tolerance_db)
                    b.subsets.push_back(r->entry_indices);
            out.push_back(std::move(b));
        }
        return out;
    }

    namespace
    {
        bool one_swap_apart(const IndexSet &a, const IndexSet &b)
        {
            if (a.size() != b.size())
                return false;
            IndexSet diff;
            std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
            return diff.size() == 2;
        }

        Index find_root(std::vector<Index> &parent, Index i)
        {
            while (parent[static_cast<std::size_t>(i)] != i)
            {
                parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
                i = parent[static_cast<std::size_t>(i)];
            }
            return i;
        }
    } // namespace

    std::vector<std::vector<IndexSet>> detect_degenerate_sets(const std::vector<SubsetResult> &results,
                                                              double tolerance_db)
    {
        if (!(tolerance_db >= 0.0))
            throw std::invalid_argument("degeneracy tolerance must be nonnegative");
        const auto n = static_cast<Index>(results.size());
        std::vector<Index> parent(results.size());
        std::iota(parent.begin(), parent.end(), Index{0});
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j)
            {
                const auto &a = results[static_cast<std::size_t>(i)];
                const auto &b = results[static_cast<std::size_t>(j)];
                if (std::abs(a.kpi_db - b.kpi_db) <= tolerance_db && one_swap_apart(a.entry_indices, b.entry_indices))
                    parent[static_cast<std::size_t>(find_root(parent, j))] = find_root(parent, i);
            }

        std::map<Index, std::vector<IndexSet>> groups;
        for (Index i = 0; i < n; ++i)
            groups[find_root(parent, i)].push_back(results[static_cast<std::size_t>(i)].entry_indices);

        std::vector<std::vector<IndexSet>> out;
        for (auto &[root, members] : groups)
            if (members.size() > 1)
            {
                std::sort(members.begin(), members.end());
                out.push_back(std::move(members));
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    void write_subset_results_csv(const std::vector<SubsetResult> &results, const std::filesystem::path &path)
    {
        csv::Writer w(path);
        w.header("size,indices,kpi_db,ambiguities");
        for (const auto &r : results)
            w.raw(std::to_string(r.entry_indices.size()) + "," + join_indices(r.entry_indices) + "," +
                  csv::format(r.kpi_db) + "," + std::to_string(r.ambiguity_count));
    }

    std::vector<SubsetResult> read_subset_results_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ValidationError("missing file: " + path.string());
        std::string line;
        if (!std::getline(in, line) || line != "size,indices,kpi_db,ambiguities")
            throw ValidationError(path.string() + ": unexpected header");
        std::vector<SubsetResult> out;
        while (std::getline(in, line))
        {
            if (line.empty())
                continue;
            std::stringstream ss(line);
            std::string size, indices, kpi_db, amb;
            if (!std::getline(ss, size, ',') || !std::getline(ss, indices, ',') || !std::getline(ss, kpi_db, ',') ||
                !std::getline(ss, amb))
                throw ValidationError(path.string() + ": malformed row '" + line + "'");
            SubsetResult r;
            std::stringstream is(indices);
            std::string tok;
            while (is >> tok)
                r.entry_indices.push_back(static_cast<Index>(csv::parse_double(tok)));
            if (static_cast<double>(r.entry_indices.size()) != csv::parse_double(size))
                throw ValidationError(path.string() + ": size column disagrees with indices in '" + line + "'");
            r.kpi_db = csv::parse_double(kpi_db);
            r.kpi_linear = std::pow(10.0, r.kpi_db / 10.0);
            r.ambiguity_count = static_cast<Index>(csv::parse_double(amb));
            out.push_back(std::move(r));
        }
        return out;
    }

    void write_subset_scatter_csv(const std::vector<SubsetResult> &results, const std::filesystem::path &path)
    {
        std::vector<const SubsetResult *> sorted;
        for (const auto &r : results)
            sorted.push_back(&r);
        std::stable_sort(sorted.begin(), sorted.end(), [](const SubsetResult *a, const SubsetResult *b)
                         { return a->entry_indices.size() < b->entry_indices.size(); });
        csv::Writer w(path);
        w.header("size,kpi_db");
        for (const auto *r : sorted)
            w.row({static_cast<double>(r->entry_indices.size()), r->kpi_db});
    }

    std::string best_sets_json(const Enumeration &enumeration, const std::vector<BestSets> &best,
                               const std::vector<std::vector<IndexSet>> &degenerate)
    {
        using nlohmann::ordered_json;
        const auto names = [&](const IndexSet &s)
        {
            ordered_json a = ordered_json::array();
            for (Index i : s)
                a.push_back(enumeration.entry_names[static_cast<std::size_t>(i)]);
            return a;
        };

        ordered_json j;
        j["entries"] = enumeration.entry_names;
        j["best"] = ordered_json::array();
        for (const auto &b : best)
        {
            ordered_json row;
            row["size"] = b.size;
            row["kpi_db"] = b.kpi_db;
            row["sets"] = ordered_json::array();
            row["indices"] = ordered_json::array();
            for (const auto &s : b.subsets)
            {
                row["sets"].push_back(names(s));
                row["indices"].push_back(s);
            }
            j["best"].push_back(std::move(row));
        }
        j["degenerate_groups"] = ordered_json::array();
        for (const auto &g : degenerate)
        {
            ordered_json group = ordered_json::array();
            for (const auto &s : g)
                group.push_back(names(s));
            j["degenerate_groups"].push_back(std::move(group));
        }
        j["failures"] = ordered_json::array();
        for (const auto &f : enumeration.failures)
            j["failures"].push_back({{"sets", names(f.entry_indices)}, {"doa", f.doa}, {"reason", f.reason}});
        return j.dump(2) + "\n";
    }

} // namespace dfeval
