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

#include "dfeval/csv.hpp"
#include "dfeval/modeselect.hpp"
#include "dfeval/synth.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <algorithm>

using namespace dfeval;

namespace
{
    const Index VED = 0, MDX = 1, MDY = 2, ZTH = 3;

    const SubsetResult *find(const std::vector<SubsetResult> &results, const IndexSet &s)
    {
        const auto it = std::find_if(results.begin(), results.end(),
                                     [&](const SubsetResult &r) { return r.entry_indices == s; });
        return it == results.end() ? nullptr : &*it;
    }

    SubsetResult fake(IndexSet s, double db)
    {
        SubsetResult r;
        r.entry_indices = std::move(s);
        r.kpi_db = db;
        r.kpi_linear = std::pow(10.0, db / 10.0);
        return r;
    }

    Enumeration canonical_enumeration(Index min_size = 1, Index max_size = 4, unsigned workers = 1)
    {
        return enumerate_subsets(canonical_mode_set(), testing::default_grid(), Polarization::theta,
                                 MeasurementKind::cm_directivity, min_size, max_size, workers);
    }
} // namespace

TEST_CASE("subset counts and order", "[modeselect]")
{
    const auto e23 = canonical_enumeration(2, 3);
    CHECK(e23.results.size() + e23.failures.size() == 10);
    const auto e24 = canonical_enumeration(2, 4);
    CHECK(e24.results.size() + e24.failures.size() == 11);

    const auto all = canonical_enumeration();
    CHECK(all.results.size() + all.failures.size() == 15);
    CHECK(all.entry_names == std::vector<std::string>{"VED", "MDX", "MDY", "ZTH"});
    for (std::size_t i = 1; i < all.results.size(); ++i)
        CHECK(all.results[i - 1].entry_indices < all.results[i].entry_indices);
    for (const auto &r : all.results)
    {
        CHECK(std::isfinite(r.kpi_db));
        CHECK(std::is_sorted(r.entry_indices.begin(), r.entry_indices.end()));
        CHECK(r.kind == MeasurementKind::cm_directivity);
    }
}

TEST_CASE("subsets without theta field somewhere are reported as failures", "[modeselect]")
{
    const auto all = canonical_enumeration();
    const auto failed = [&](const IndexSet &s)
    {
        return std::any_of(all.failures.begin(), all.failures.end(),
                           [&](const SubsetFailure &f) { return f.entry_indices == s; });
    };
    CHECK(failed({ZTH}));
    CHECK(failed({MDY}));
    CHECK(failed({MDY, ZTH}));
    for (const auto &f : all.failures)
    {
        CHECK(f.doa >= 0);
        CHECK_FALSE(f.reason.empty());
        CHECK(find(all.results, f.entry_indices) == nullptr);
    }
}

TEST_CASE("mode without theta field leaves the KPI unchanged", "[modeselect]")
{
    const auto all = canonical_enumeration();
    for (const auto &r : all.results)
    {
        if (std::find(r.entry_indices.begin(), r.entry_indices.end(), ZTH) != r.entry_indices.end())
            continue;
        IndexSet with = r.entry_indices;
        with.push_back(ZTH);
        const auto *w = find(all.results, with);
        REQUIRE(w != nullptr);
        CHECK(w->kpi_db == r.kpi_db);
        CHECK(w->ambiguity_count == r.ambiguity_count);
    }
}

TEST_CASE("best subsets of the canonical modes", "[modeselect]")
{
    const auto all = canonical_enumeration();
    const auto best = best_per_cardinality(all.results);
    REQUIRE(best.size() == 4);
    for (std::size_t i = 0; i < best.size(); ++i)
        CHECK(best[i].size == static_cast<Index>(i + 1));

    const auto &three = best[2];
    CHECK(three.subsets.front() == IndexSet{VED, MDX, MDY});
    for (const auto &r : all.results)
        if (r.entry_indices.size() == 3)
            CHECK(r.kpi_db <= three.kpi_db);

    for (std::size_t i = 1; i < best.size(); ++i)
        CHECK(best[i].kpi_db >= best[i - 1].kpi_db);
    CHECK(best[3].kpi_db == best[2].kpi_db);
}

TEST_CASE("best-set brackets", "[modeselect]")
{
    SECTION("single subset per size")
    {
        const auto best = best_per_cardinality({fake({0}, 1.0), fake({0, 1}, 2.0)});
        REQUIRE(best.size() == 2);
        CHECK(best[0].subsets == std::vector<IndexSet>{{0}});
        CHECK(best[1].subsets == std::vector<IndexSet>{{0, 1}});
    }
    SECTION("co-maximal subsets are listed together, best first")
    {
        const auto best = best_per_cardinality({fake({0, 1}, 4.995), fake({0, 2}, 5.0), fake({1, 2}, 4.9)});
        REQUIRE(best.size() == 1);
        CHECK(best[0].kpi_db == 5.0);
        CHECK(best[0].subsets == std::vector<IndexSet>{{0, 2}, {0, 1}});
    }
}

TEST_CASE("degeneracy groups", "[modeselect]")
{
    SECTION("MDX and MDY swap on a quarter-turn symmetric grid")
    {
        const auto grid = product_grid(deg2rad(45.0), deg2rad(90.0), deg2rad(5.0), deg2rad(10.0));
        const auto e = enumerate_subsets(canonical_mode_set(), grid, Polarization::theta,
                                         MeasurementKind::cm_directivity, 1, 4);
        const auto groups = detect_degenerate_sets(e.results);
        const auto grouped = [&](const IndexSet &a, const IndexSet &b)
        {
            return std::any_of(groups.begin(), groups.end(), [&](const std::vector<IndexSet> &g)
                               { return std::count(g.begin(), g.end(), a) && std::count(g.begin(), g.end(), b); });
        };
        CHECK(grouped({VED, MDX}, {VED, MDY}));
        CHECK(grouped({VED, MDX, ZTH}, {VED, MDY, ZTH}));
        // alone, each dipole has a theta null on a grid azimuth
        CHECK(find(e.results, {MDX}) == nullptr);
        CHECK(find(e.results, {MDY}) == nullptr);
    }
    SECTION("tolerance 0 with distinct KPIs")
    {
        CHECK(detect_degenerate_sets({fake({0}, 1.0), fake({1}, 1.5), fake({2}, 2.0)}, 0.0).empty());
    }
    SECTION("duplicate entries")
    {
        const auto set = canonical_mode_set().select({VED, MDX, MDX});
        const auto e = enumerate_subsets(set, testing::default_grid(), Polarization::theta,
                                         MeasurementKind::cm_directivity, 2, 2);
        const auto groups = detect_degenerate_sets(e.results, 0.0);
        REQUIRE(groups.size() == 1);
        CHECK(groups[0] == std::vector<IndexSet>{{0, 1}, {0, 2}});
    }
    SECTION("transitive closure and swap distance")
    {
        const auto groups = detect_degenerate_sets(
            {fake({0, 1}, 1.0), fake({0, 2}, 1.04), fake({0, 3}, 1.08), fake({2, 3}, 1.0)}, 0.05);
        REQUIRE(groups.size() == 1);
        CHECK(groups[0] == std::vector<IndexSet>{{0, 1}, {0, 2}, {0, 3}, {2, 3}});
        CHECK(detect_degenerate_sets({fake({0, 1}, 1.0), fake({2, 3}, 1.0)}).empty());
    }
    CHECK_THROWS_AS(detect_degenerate_sets({}, -1.0), std::invalid_argument);
}

TEST_CASE("enumeration is reproducible across worker counts", "[modeselect]")
{
    const auto a = canonical_enumeration(1, 4, 1);
    const auto b = canonical_enumeration(1, 4, 5);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i)
    {
        CHECK(a.results[i].entry_indices == b.results[i].entry_indices);
        CHECK(a.results[i].kpi_db == b.results[i].kpi_db);
        CHECK(a.results[i].ambiguity_count == b.results[i].ambiguity_count);
    }
    REQUIRE(a.failures.size() == b.failures.size());
    for (std::size_t i = 0; i < a.failures.size(); ++i)
        CHECK(a.failures[i].entry_indices == b.failures[i].entry_indices);
}

TEST_CASE("size guards", "[modeselect]")
{
    const auto &g = testing::default_grid();
    const auto set = canonical_mode_set();
    const auto run = [&](Index lo, Index hi)
    { return enumerate_subsets(set, g, Polarization::theta, MeasurementKind::cm_directivity, lo, hi); };
    CHECK_THROWS_AS(run(0, 2), std::invalid_argument);
    CHECK_THROWS_AS(run(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(run(1, 5), std::invalid_argument);

    MeasurementMatrix big;
    big.grid = g;
    big.values = ComplexMatrix::Ones(21, g.size());
    big.entry_names.assign(21, "e");
    CHECK_THROWS_AS(enumerate_subsets(big, GridMetric(g)), std::invalid_argument);
}

TEST_CASE("subset exports", "[modeselect]")
{
    const auto dir = testing::scratch_dir("modeselect");
    const auto all = canonical_enumeration();
    write_subset_results_csv(all.results, dir / "s.csv");
    const auto back = read_subset_results_csv(dir / "s.csv");
    REQUIRE(back.size() == all.results.size());
    for (std::size_t i = 0; i < back.size(); ++i)
    {
        CHECK(back[i].entry_indices == all.results[i].entry_indices);
        CHECK(back[i].kpi_db == all.results[i].kpi_db);
        CHECK(back[i].ambiguity_count == all.results[i].ambiguity_count);
    }

    write_subset_scatter_csv(all.results, dir / "scatter.csv");
    const auto scatter = csv::read(dir / "scatter.csv", "size,kpi_db");
    CHECK(scatter.rows.size() == all.results.size());

    const auto best = best_per_cardinality(all.results);
    const auto j = nlohmann::json::parse(best_sets_json(all, best, detect_degenerate_sets(all.results)));
    CHECK(j.at("entries") == nlohmann::json{"VED", "MDX", "MDY", "ZTH"});
    REQUIRE(j.at("best").size() == 4);
    CHECK(j.at("best")[2].at("sets")[0] == nlohmann::json{"VED", "MDX", "MDY"});
    CHECK(j.at("best")[2].at("indices")[0] == nlohmann::json{0, 1, 2});
    CHECK(j.at("failures").size() == all.failures.size());
    CHECK(j.contains("degenerate_groups"));
}
