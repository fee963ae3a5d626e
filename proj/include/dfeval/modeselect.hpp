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
#include "dfeval/uncertainty.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dfeval
{
    using IndexSet = std::vector<Index>; // strictly increasing entry indices

    struct SubsetResult
    {
        IndexSet entry_indices;
        double kpi_linear = 0.0;
        double kpi_db = 0.0;
        MeasurementKind kind = MeasurementKind::cm_directivity;
        Index ambiguity_count = 0;
    };

    // Subset whose matrix has a zero column at some grid DoA
    struct SubsetFailure
    {
        IndexSet entry_indices;
        Index doa = -1;
        std::string reason;
    };

    struct Enumeration
    {
        std::vector<std::string> entry_names;
        std::vector<SubsetResult> results;   // lexicographic by index set
        std::vector<SubsetFailure> failures; // same order
    };

    inline constexpr Index max_enumerated_entries = 20;

    struct EnumerationOptions
    {
        Index min_size = 1;
        Index max_size = 0; // 0: all entries
        AmbiguityOptions ambiguity{};
        unsigned workers = 1;
    };

    // Every subset with min_size..max_size entries, evaluated on row subsets of the full
    // matrix. Output is independent of the worker count. Throws std::invalid_argument
    // for invalid size bounds or more than 20 entries.
    Enumeration enumerate_subsets(const MeasurementMatrix &full, const GridMetric &metric,
                                  const EnumerationOptions &options = {});
    Enumeration enumerate_subsets(const FarFieldSet &set, const DoAGrid &grid, Polarization pol,
                                  MeasurementKind kind, Index min_size, Index max_size, unsigned workers = 1);

    struct BestSets
    {
        Index size = 0;
        double kpi_db = 0.0;
        std::vector<IndexSet> subsets; // all within the tolerance of the best, best first
    };

    inline constexpr double default_best_tolerance_db = 0.01;
    inline constexpr double default_degeneracy_tolerance_db = 0.05;

    // Ascending by size
    std::vector<BestSets> best_per_cardinality(const std::vector<SubsetResult> &results,
                                               double tolerance_db = default_best_tolerance_db);

    // Groups of equal-size subsets linked by single-entry swaps whose KPIs differ by at
    // most tolerance_db (transitively closed). Only groups with two or more members.
    std::vector<std::vector<IndexSet>> detect_degenerate_sets(const std::vector<SubsetResult> &results,
                                                              double tolerance_db = default_degeneracy_tolerance_db);

    // `size,indices,kpi_db,ambiguities`; indices are space separated
    void write_subset_results_csv(const std::vector<SubsetResult> &results, const std::filesystem::path &path);
    std::vector<SubsetResult> read_subset_results_csv(const std::filesystem::path &path);

    // `size,kpi_db` per subset for scatter plots grouped by cardinality
    void write_subset_scatter_csv(const std::vector<SubsetResult> &results, const std::filesystem::path &path);

    // Best-set table plus degeneracy groups as JSON text
    std::string best_sets_json(const Enumeration &enumeration, const std::vector<BestSets> &best,
                               const std::vector<std::vector<IndexSet>> &degenerate);

} // namespace dfeval
