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
#include "dfeval/errors.hpp"
#include "dfeval/synth.hpp"
#include "dfeval/uncertainty.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace dfeval;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    MeasurementMatrix uca_matrix(double spacing)
    {
        UcaSpec spec;
        spec.spacing_over_lambda = spacing;
        return assemble_measurement_matrix(synth_uca(spec), testing::default_grid(), Polarization::theta,
                                           MeasurementKind::port);
    }

    MeasurementMatrix canonical_matrix(const DoAGrid &grid, MeasurementKind kind = MeasurementKind::cm_directivity,
                                       const std::map<std::string, double> &eigenvalues = {})
    {
        return assemble_measurement_matrix(canonical_mode_set({}, eigenvalues), grid, Polarization::theta, kind);
    }

    MeasurementMatrix wrap(const ComplexMatrix &values, const DoAGrid &grid)
    {
        MeasurementMatrix X;
        X.values = values;
        X.grid = grid;
        for (Index p = 0; p < values.rows(); ++p)
            X.entry_names.push_back("r" + std::to_string(p));
        return X;
    }

    double kpi_db(const MeasurementMatrix &X)
    {
        const GridMetric m(X.grid);
        const auto U = uncertainty_matrix(X, m);
        return kpi(U, weight_matrix(U, m)).db;
    }

    const GridMetric &default_metric()
    {
        static const GridMetric m(testing::default_grid());
        return m;
    }
} // namespace

TEST_CASE("measurement matrix kinds", "[uncertainty]")
{
    const auto &g = testing::default_grid();
    const auto dir = canonical_matrix(g);
    const auto zero_ev = canonical_matrix(g, MeasurementKind::cm_realized);
    CHECK(zero_ev.values == dir.values);

    const auto unit_ev = canonical_matrix(g, MeasurementKind::cm_realized, {{"VED", 1.0}, {"MDX", 1.0}, {"MDY", 1.0}});
    for (Index p = 0; p < 3; ++p)
        for (Index k = 0; k < g.size(); k += 13)
            CHECK_THAT(std::abs(unit_ev.values(p, k)), WithinAbs(std::abs(dir.values(p, k)) / std::sqrt(2.0), 1e-15));

    const auto ports = synth_uca(UcaSpec{});
    CHECK_THROWS_AS(assemble_measurement_matrix(ports, g, Polarization::theta, MeasurementKind::cm_realized),
                    std::invalid_argument);

    // closed forms at the grid DoAs, bypassing interpolation
    for (Index k = 0; k < g.size(); ++k)
    {
        const double t = g[k].theta(), p = g[k].phi();
        CHECK(std::abs(dir.values(0, k) - std::sin(t)) < 1e-4);
        CHECK(std::abs(dir.values(1, k) - std::sin(p)) < 1e-4);
        CHECK(std::abs(dir.values(2, k) - std::cos(p)) < 1e-4);
        CHECK(dir.values(3, k) == 0.0);
    }
}

TEST_CASE("assembly outside the sampled theta range fails", "[uncertainty]")
{
    const UniformAxis theta{0.0, deg2rad(10.0), 7}; // up to 60 deg
    const UniformAxis phi{0.0, deg2rad(30.0), 12};
    PatternEntry e{"e", ComplexMatrix::Ones(7, 12), ComplexMatrix::Zero(7, 12), {}};
    const FarFieldSet set(theta, phi, Normalization::gain, 1e9, {e});
    CHECK_THROWS_AS(assemble_measurement_matrix(set, testing::default_grid(), Polarization::theta,
                                                MeasurementKind::port),
                    std::out_of_range);
}

TEST_CASE("correlation and uncertainty on small matrices", "[uncertainty]")
{
    ComplexMatrix X(2, 4);
    X << 1, 0, 1, 1,
        0, 1, 1, -1;
    CHECK(correlation(X, 0, 0) == 1.0);
    CHECK(correlation(X, 0, 1) == 0.0);
    CHECK(correlation(X, 2, 3) == 0.0);
    CHECK_THAT(std::abs(correlation(X, 0, 2)), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));

    ComplexMatrix Y(2, 2);
    Y << 2, 0,
        0, 3;
    CHECK(uncertainty(Y, 0, 0) == 0.25);
    CHECK(uncertainty(Y, 0, 1) == 0.0);

    ComplexMatrix Z = ComplexMatrix::Zero(2, 2);
    Z(0, 0) = 1.0;
    CHECK_THROWS_AS(correlation(Z, 0, 1), DegeneracyError);
    CHECK_THROWS_AS(uncertainty(Z, 1, 1), DegeneracyError);
}

TEST_CASE("uncertainty scales with the inverse squared field magnitude", "[uncertainty]")
{
    std::mt19937_64 rng(21);
    const ComplexMatrix X = testing::random_complex(4, 6, rng);
    for (const cd c : {cd(2.0, 0.0), cd(0.0, 1.0)})
    {
        const ComplexMatrix Xc = c * X;
        for (Index a = 0; a < 6; ++a)
            for (Index b = 0; b < 6; ++b)
                CHECK_THAT(uncertainty(Xc, a, b), WithinRel(uncertainty(X, a, b) / std::norm(c), 1e-13));
    }
}

TEST_CASE("sorted uncertainty matrix structure", "[uncertainty]")
{
    DoAGrid two;
    two.directions = {Direction::from_degrees(50, 0), Direction::from_degrees(80, 90)};
    two.cell_weights = RealVector::Ones(2);
    ComplexMatrix X(2, 2);
    X << 1, 0,
        0, 1;
    const auto U = uncertainty_matrix(wrap(X, two));
    CHECK(U.values(0, 0) == 1.0);
    CHECK(U.values(0, 1) == 1.0);
    CHECK(U.values(1, 0) == 0.0);
    CHECK(U.values(1, 1) == 0.0);

    const auto Uu = uncertainty_matrix(uca_matrix(0.6), default_metric());
    for (Index c = 0; c < Uu.size(); ++c)
    {
        const Index ref = Uu.column_reference_perm[static_cast<std::size_t>(c)];
        CHECK(Uu.values(0, c) == Uu.self_terms(ref));
        CHECK(Uu.row_perms(0, c) == ref);
    }
    CHECK((Uu.values.array() >= 0.0).all());
    CHECK(Uu.values.allFinite());
}

TEST_CASE("zero-norm column is named", "[uncertainty]")
{
    const auto &g = testing::default_grid();
    ComplexMatrix X = ComplexMatrix::Ones(2, g.size());
    X.col(17).setZero();
    try
    {
        uncertainty_matrix(wrap(X, g), default_metric());
        FAIL("expected a degeneracy error");
    }
    catch (const DegeneracyError &e)
    {
        CHECK(e.index() == 17);
        CHECK_THAT(std::string(e.what()), ContainsSubstring("DoA 17"));
    }
}

TEST_CASE("0.6 lambda UCA column shows a far secondary maximum", "[uncertainty][reference]")
{
    const auto &m = default_metric();
    const auto U = uncertainty_matrix(uca_matrix(0.6), m);
    const Index ref = m.grid().nearest(Direction::from_degrees(80, 90));
    const RealVector u = U.column_for(ref);
    const auto it = std::find(U.column_reference_perm.begin(), U.column_reference_perm.end(), ref);
    const Index c = it - U.column_reference_perm.begin();

    bool found = false;
    for (Index r = U.size() / 2 + 1; r < U.size(); ++r)
    {
        const Index test = U.row_perms(r, c);
        bool local_max = true;
        for (Index n : m.neighbors()[static_cast<std::size_t>(test)])
            local_max = local_max && u(test) >= u(n);
        if (local_max && U.values(r, c) > 0.5 * U.self_terms(ref))
            found = true;
    }
    CHECK(found);
}

TEST_CASE("linear weighting", "[uncertainty]")
{
    CHECK(linear_weight(0.0) == 0.0);
    CHECK(linear_weight(pi) == 1.0);
    CHECK(linear_weight(pi / 2) == 0.5);

    const auto &m = default_metric();
    const auto U = uncertainty_matrix(uca_matrix(0.3), m);
    const RealMatrix W = weight_matrix(U, m);
    CHECK(W == weight_matrix(U, m.grid()));
    CHECK(W == weight_matrix(m));
    CHECK(W.row(0).isZero(0.0));
    CHECK((W.array() >= 0.0).all());
    CHECK((W.array() <= 1.0).all());
    for (Index c = 0; c < W.cols(); ++c)
        for (Index r = 1; r < W.rows(); ++r)
            CHECK(W(r - 1, c) <= W(r, c));
}

TEST_CASE("KPI on constant inputs", "[uncertainty]")
{
    UncertaintyMatrix U;
    U.values = RealMatrix::Constant(3, 3, 0.2);
    U.column_reference_perm = {0, 1, 2};
    U.row_perms = IndexMatrix(3, 3);
    U.self_terms = RealVector::Constant(3, 0.2);
    RealMatrix W(3, 3);
    W << 0, 0.5, 1,
        0.25, 0, 0.5,
        1, 0.75, 0;
    const double mean_w = W.sum() / 9.0;
    const auto k = kpi(U, W);
    CHECK_THAT(k.linear, WithinRel(1.0 / (0.2 * mean_w), 1e-15));
    CHECK_THAT(k.db, WithinRel(10.0 * std::log10(k.linear), 1e-15));
    CHECK_THROWS_AS(kpi(U, RealMatrix::Zero(3, 3)), DegeneracyError);
    CHECK_THROWS_AS(kpi(U, RealMatrix::Zero(2, 2)), std::invalid_argument);

    const auto single = generate_cap_grid(deg2rad(45.0), deg2rad(90.0), 1);
    const auto X = canonical_matrix(single);
    CHECK_THROWS_AS(kpi_db(X), DegeneracyError);
}

TEST_CASE("KPI rises by 10 dB when the fields grow by sqrt(10)", "[uncertainty]")
{
    for (double spacing : {0.3, 0.6})
    {
        const auto X = uca_matrix(spacing);
        CHECK_THAT(kpi_db(X.scaled(std::sqrt(10.0))) - kpi_db(X), WithinAbs(10.0, 1e-9));
    }
}

TEST_CASE("KPI does not depend on entry order", "[uncertainty]")
{
    const auto &g = testing::default_grid();
    const auto set = canonical_mode_set();
    const auto a = assemble_measurement_matrix(set.select({0, 1, 2}), g, Polarization::theta,
                                               MeasurementKind::cm_directivity);
    const auto b = assemble_measurement_matrix(set.select({2, 0, 1}), g, Polarization::theta,
                                               MeasurementKind::cm_directivity);
    CHECK(kpi_db(a) == kpi_db(b));
}

TEST_CASE("KPI agrees with the closed-form oracle", "[uncertainty]")
{
    // Closed-form patterns at the grid DoAs, evaluated independently in double precision;
    // the difference is the 1 degree interpolation error.
    const auto &g = testing::default_grid();
    CHECK_THAT(kpi_db(canonical_matrix(g).select_rows(std::vector<Index>{0, 1, 2})),
               WithinAbs(11.232072041296055, 5e-3));
    CHECK_THAT(kpi_db(uca_matrix(0.6)), WithinAbs(14.456560118254579, 5e-3));
    CHECK_THAT(kpi_db(uca_matrix(0.3)), WithinAbs(14.9800712343251, 5e-3));
}

TEST_CASE("KPI is insensitive to the DoA resolution", "[uncertainty]")
{
    const auto coarse = testing::default_grid();
    const auto fine = generate_cap_grid(deg2rad(45.0), deg2rad(90.0), 1000);
    const std::vector<Index> smooth{0, 1, 2};
    const double a = kpi_db(canonical_matrix(coarse).select_rows(smooth));
    const double b = kpi_db(canonical_matrix(fine).select_rows(smooth));
    CHECK(std::abs(a - b) < 0.5);
}

TEST_CASE("ambiguity detection", "[uncertainty][reference]")
{
    const auto &m = default_metric();
    SECTION("orthogonal toy matrix")
    {
        DoAGrid g3;
        g3.directions = {Direction::from_degrees(45, 0), Direction::from_degrees(90, 120),
                         Direction::from_degrees(90, 240)};
        g3.cell_weights = RealVector::Ones(3);
        const ComplexMatrix I = ComplexMatrix::Identity(3, 3);
        const GridMetric m3(g3);
        const auto U = uncertainty_matrix(wrap(I, g3), m3);
        CHECK(detect_ambiguities(U, m3).total() == 0);
    }
    SECTION("0.6 lambda spacing is ambiguous everywhere")
    {
        const auto U = uncertainty_matrix(uca_matrix(0.6), m);
        const auto report = detect_ambiguities(U, m, {deg2rad(30.0), 0.5});
        CHECK(report.references_affected() == m.size());
        const Index ref = m.grid().nearest(Direction::from_degrees(80, 90));
        bool near_270 = false;
        for (const auto &f : report.per_reference[static_cast<std::size_t>(ref)])
        {
            CHECK(f.distance > deg2rad(30.0));
            near_270 = near_270 || std::abs(m.grid()[f.test].phi_deg() - 270.0) <= 10.0;
        }
        CHECK(near_270);
    }
    SECTION("0.3 lambda spacing is unambiguous")
    {
        const auto U = uncertainty_matrix(uca_matrix(0.3), m);
        CHECK(detect_ambiguities(U, m, {deg2rad(30.0), 0.5}).total() == 0);
    }
    SECTION("invalid options")
    {
        const auto U = uncertainty_matrix(uca_matrix(0.3), m);
        CHECK_THROWS_AS(detect_ambiguities(U, m, {0.0, 0.5}), std::invalid_argument);
        CHECK_THROWS_AS(detect_ambiguities(U, m, {0.5, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(detect_ambiguities(U, m, {0.5, 1.5}), std::invalid_argument);
    }
}

TEST_CASE("uncertainty CSV exports parse back", "[uncertainty]")
{
    const auto dir = testing::scratch_dir("ucsv");
    const auto &m = default_metric();
    const auto U = uncertainty_matrix(uca_matrix(0.6), m);
    write_uncertainty_csv(U, dir / "u.csv", dir / "cols.csv", dir / "rows.csv");
    const auto back = read_uncertainty_csv(dir / "u.csv", dir / "cols.csv", dir / "rows.csv");
    CHECK(back.values == U.values);
    CHECK(back.column_reference_perm == U.column_reference_perm);
    CHECK(back.row_perms == U.row_perms);
    CHECK(back.self_terms == U.self_terms);

    write_uncertainty_vector_csv(U, m.grid(), 5, dir / "v.csv");
    const auto t = csv::read(dir / "v.csv", "theta_deg,phi_deg,u");
    REQUIRE(static_cast<Index>(t.rows.size()) == m.size());
    const RealVector u = U.column_for(5);
    for (Index k = 0; k < m.size(); ++k)
        CHECK(t.rows[static_cast<std::size_t>(k)][2] == u(k));
}

// ----------------------------------------------------------------------------------------
// Randomized property suite
// ----------------------------------------------------------------------------------------

TEST_CASE("randomized properties of correlation and uncertainty", "[uncertainty][property]")
{
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<int> ports(2, 6), doas(8, 30);
    for (int trial = 0; trial < 200; ++trial)
    {
        const Index P = ports(rng), K = doas(rng);
        const auto grid = generate_cap_grid(deg2rad(30.0), deg2rad(90.0), K);
        const ComplexMatrix X = testing::random_complex(P, grid.size(), rng);
        const ComplexMatrix Q = testing::random_unitary(P, rng);
        const RealMatrix u = uncertainty_values(X);
        const RealMatrix uq = uncertainty_values((Q * X).eval());
        for (Index a = 0; a < grid.size(); ++a)
            for (Index b = 0; b < grid.size(); ++b)
            {
                const cd rab = correlation(X, a, b);
                CHECK(std::abs(rab) <= 1.0 + 1e-12);
                CHECK(rab == std::conj(correlation(X, b, a)));
                CHECK(u(a, b) == u(b, a));
                CHECK_THAT(uq(a, b), WithinRel(u(a, b), 1e-10) || WithinAbs(u(a, b), 1e-14));
            }

        const GridMetric metric(grid);
        const auto U = sort_uncertainty(u, metric);
        CHECK(U.unsorted() == u);

        const auto U1 = uncertainty_matrix(wrap(X, grid), metric, 1);
        const auto U3 = uncertainty_matrix(wrap(X, grid), metric, 3);
        CHECK(U1.values == U3.values);
        CHECK(U1.values == U.values);
    }
}

TEST_CASE("randomized row operations leave u and the KPI unchanged", "[uncertainty][property]")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial)
    {
        const Index P = 2 + trial % 4;
        const auto grid = generate_cap_grid(deg2rad(40.0), deg2rad(90.0), 12 + trial % 17);
        const ComplexMatrix X = testing::random_complex(P, grid.size(), rng);

        // insert a zero row at a random position
        ComplexMatrix Z(P + 1, grid.size());
        const Index at = static_cast<Index>(rng() % static_cast<std::uint64_t>(P + 1));
        for (Index r = 0, s = 0; r <= P; ++r)
            if (r == at)
                Z.row(r).setZero();
            else
                Z.row(r) = X.row(s++);

        std::vector<Index> perm(static_cast<std::size_t>(P));
        std::iota(perm.begin(), perm.end(), Index{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        ComplexMatrix Xp(P, grid.size());
        for (Index r = 0; r < P; ++r)
            Xp.row(r) = X.row(perm[static_cast<std::size_t>(r)]);

        const RealMatrix u = uncertainty_values(X);
        CHECK(uncertainty_values(Z) == u);
        CHECK(uncertainty_values(Xp) == u);
        const double k = kpi_db(wrap(X, grid));
        CHECK(kpi_db(wrap(Z, grid)) == k);
        CHECK(kpi_db(wrap(Xp, grid)) == k);
    }
}

TEST_CASE("kernels accept single-precision matrices", "[uncertainty]")
{
    Eigen::MatrixXcf X(2, 3);
    X << 1.0f, 0.0f, 1.0f,
        0.0f, 1.0f, 1.0f;
    const Eigen::MatrixXf u = uncertainty_values(X);
    CHECK(u(0, 0) == 1.0f);
    CHECK(u(0, 1) == 0.0f);
    CHECK(u(0, 2) == 0.5f);
    CHECK(correlation(X, 0, 1) == std::complex<float>(0.0f));
}
