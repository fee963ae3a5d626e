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
#include "dfeval/synth.hpp"

#include <catch_amalgamated.hpp>

using namespace dfeval;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("monopole element pattern", "[synth]")
{
    CHECK_THAT(monopole_element_pattern(0.25, pi / 2), WithinAbs(1.0, 1e-15));
    CHECK(monopole_element_pattern(0.25, 0.0) == 0.0);
    CHECK(monopole_element_pattern(0.4, 0.0) == 0.0);
    // 64.3 mm at 1060 MHz; closed form evaluated at 40 digits
    const double length = 0.0643 * 1.06e9 / 299792458.0;
    CHECK_THAT(length, WithinRel(0.22735061600515647395, 1e-15));
    CHECK_THAT(monopole_element_pattern(length, deg2rad(60.0)), WithinRel(0.70870772950598961554, 1e-13));
    for (int deg = 0; deg <= 90; ++deg)
        CHECK(monopole_element_pattern(0.25, deg2rad(deg)) >= 0.0);
}

TEST_CASE("UCA geometry and phases", "[synth]")
{
    UcaSpec spec;
    CHECK_THAT(spec.circumradius_over_lambda(), WithinRel(0.6, 1e-15));
    const auto pos = uca_element_positions(spec);
    CHECK(pos.cols() == 6);
    CHECK_THAT(pos(0, 0), WithinRel(0.6, 1e-15));
    CHECK(pos(1, 0) == 0.0);

    const auto set = synth_uca(spec);
    REQUIRE(set.size() == 6);
    CHECK(set.normalization() == Normalization::directivity);
    for (Index p = 0; p < 6; ++p)
    {
        CHECK(set.sample(p, Direction::from_degrees(0, 33), Polarization::theta) == 0.0);
        CHECK(set.entry(p).e_phi.isZero(0.0));
        CHECK(set.entry(p).e_theta.allFinite());
    }

    // exp(j 2 pi 0.6 cos(60 p deg)), 40-digit values
    const double re[] = {-0.8090169943749474241, -0.3090169943749474241, -0.3090169943749474241,
                         -0.8090169943749474241, -0.3090169943749474241, -0.3090169943749474241};
    const double im[] = {-0.58778525229247312917, 0.95105651629515357212, -0.95105651629515357212,
                         0.58778525229247312917, -0.95105651629515357212, 0.95105651629515357212};
    for (Index p = 0; p < 6; ++p)
    {
        const cd v = set.sample(p, Direction::from_degrees(90, 0), Polarization::theta);
        CHECK_THAT(v.real(), WithinAbs(re[p], 1e-13));
        CHECK_THAT(v.imag(), WithinAbs(im[p], 1e-13));
    }
    CHECK_THROWS_AS(synth_uca(UcaSpec{1}), std::invalid_argument);
    UcaSpec bad;
    bad.spacing_over_lambda = 0.0;
    CHECK_THROWS_AS(synth_uca(bad), std::invalid_argument);
}

TEST_CASE("UCA is invariant under ring relabeling by rotation", "[synth][property]")
{
    for (double spacing : {0.3, 0.6})
    {
        UcaSpec spec;
        spec.spacing_over_lambda = spacing;
        const auto set = synth_uca(spec);
        // port p rotated by 60 deg sits where port p+1 was
        const auto r = rotate_about_z(set, 60);
        for (Index p = 0; p < 6; ++p)
        {
            CHECK(r.entry(p).e_theta == set.entry((p + 1) % 6).e_theta);
        }
    }
}

TEST_CASE("canonical modes", "[synth]")
{
    const auto set = canonical_mode_set();
    REQUIRE(set.size() == 4);
    CHECK(set.entry(0).name == "VED");
    CHECK(set.entry(3).name == "ZTH");
    CHECK(set.normalization() == Normalization::cm_directivity);
    for (const auto &e : set.entries())
        CHECK(e.eigenvalue == 0.0);
    for (int phi = 0; phi < 360; phi += 7)
        CHECK(set.sample(0, Direction::from_degrees(90, phi), Polarization::theta) == 1.0);
    CHECK(set.entry(3).e_theta.isZero(0.0));
    CHECK(set.sample(2, Direction::from_degrees(60, 90), Polarization::theta) == 0.0);

    const auto with = canonical_mode_set({}, {{"MDY", -3.0}});
    CHECK(with.entry(2).eigenvalue == -3.0);
    CHECK_THROWS_AS(canonical_mode_set({}, {{"XYZ", 1.0}}), std::invalid_argument);
}

TEST_CASE("magnetic dipole modes are orthogonal over the full sphere", "[synth]")
{
    GridResolution res;
    res.full_sphere = true;
    res.theta_step_deg = 0.5;
    res.phi_step_deg = 0.5;
    const auto set = canonical_mode_set(res);
    const auto quad = product_grid(0.0, pi, deg2rad(0.5), deg2rad(0.5));
    cd inner = 0.0;
    double norm_x = 0.0;
    for (Index k = 0; k < quad.size(); ++k)
    {
        const auto [xt, xp] = set.sample_vector(1, quad[k]);
        const auto [yt, yp] = set.sample_vector(2, quad[k]);
        inner += quad.cell_weights(k) * (std::conj(xt) * yt + std::conj(xp) * yp);
        norm_x += quad.cell_weights(k) * (std::norm(xt) + std::norm(xp));
    }
    CHECK(std::abs(inner) < 1e-10);
    CHECK_THAT(norm_x, WithinRel(8.0 * pi / 3.0, 1e-4));
}

TEST_CASE("magnetic dipoles swap under a quarter turn", "[synth]")
{
    const auto set = canonical_mode_set();
    const auto r = rotate_about_z(set, 90); // new(phi) = old(phi - 90 deg)
    // MDX(phi - 90) = (-cos phi, cos theta sin phi) = -MDY(phi)
    CHECK(r.entry(1).e_theta == -set.entry(2).e_theta);
    CHECK(r.entry(1).e_phi == -set.entry(2).e_phi);
}

TEST_CASE("synthesized patterns are finite including the zenith", "[synth]")
{
    GridResolution res;
    res.full_sphere = true;
    for (const auto &set : {synth_uca(UcaSpec{}), canonical_mode_set(res)})
        for (const auto &e : set.entries())
        {
            CHECK(e.e_theta.allFinite());
            CHECK(e.e_phi.allFinite());
        }
}
