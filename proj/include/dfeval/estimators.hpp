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
#include "dfeval/types.hpp"
#include "dfeval/uncertainty.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>

namespace dfeval
{
    struct SourceScenario
    {
        Direction source_doa = Direction::from_degrees(80.0, 90.0);
        Polarization polarization = Polarization::theta;
        double snr_db = 0.0;
        Index snapshot_count = 1;
        double signal_power = 1.0;

        void validate() const; // throws std::invalid_argument
    };

    // Noise power for a given SNR. The reference is the mean over grid DoAs of the per-port
    // received power ||x_k||^2 / P; it does not depend on the scenario's signal power.
    // Returns 0 for snr_db = +inf.
    double noise_power(const MeasurementMatrix &X, double snr_db);

    // R = signal_power a a^H + noise_power I
    ComplexMatrix expected_covariance(const ComplexVector &steering, double signal_power, double noise_power);

    // Steering column of the grid DoA nearest the source; throws DegeneracyError if it is zero
    ComplexMatrix expected_covariance(const MeasurementMatrix &X, const SourceScenario &scenario);

    // Sample covariance of `snapshot_count` snapshots a s_t + n_t with circular Gaussian
    // signal and noise, drawn from a std::mt19937_64 seeded with `seed`
    ComplexMatrix snapshot_covariance(const MeasurementMatrix &X, const SourceScenario &scenario, std::uint64_t seed);

    struct MusicSpectrum
    {
        RealVector value;          // normalized to a peak of 1
        RealVector db;             // 10 log10(value), peak 0 dB
        std::vector<Index> peaks;  // local maxima over the grid neighbours, strongest first
    };

    inline constexpr double music_regularizer = 1e-12;

    // Pseudo-spectrum 1 / (a^H E_n E_n^H a + eps) with unit-norm steering columns. Throws
    // std::invalid_argument unless P > model_order, DegeneracyError if the eigenvalue gap
    // between signal and noise subspaces is below 1e-12 of the largest eigenvalue.
    MusicSpectrum music_spectrum(const MeasurementMatrix &X, const ComplexMatrix &R, const GridMetric &metric,
                                 Index model_order = 1, unsigned workers = 1);
    MusicSpectrum music_spectrum(const MeasurementMatrix &X, const SourceScenario &scenario, const GridMetric &metric,
                                 unsigned workers = 1);

    // Strongest spectrum peak farther than `radius` from grid point `center`
    std::optional<Index> strongest_peak_outside(const MusicSpectrum &spectrum, const GridMetric &metric,
                                                Index center, double radius);

    // Deterministic single-source CRB on the azimuth in deg^2:
    //   noise_power / (2 N signal_power d^H P_perp d)
    // with d = da/dphi (per degree) from central differences of the interpolated steering
    // field. Throws DegeneracyError when d^H P_perp d < 1e-15 ||a||^2.
    inline constexpr double crb_default_step_deg = 0.1;

    double crb_phi(const FarFieldSet &set, const SourceScenario &scenario, double noise_power,
                   double step_deg = crb_default_step_deg);

    // CRB at every DoA of X's grid with the scenario's SNR, snapshots and signal power
    RealVector crb_map(const FarFieldSet &set, const MeasurementMatrix &X, const SourceScenario &scenario,
                       double step_deg = crb_default_step_deg, unsigned workers = 1);

    // Standard deviation in hundredths of a degree: 100 sqrt(crb)
    inline double crb_deg_over_100(double crb_deg2) { return 100.0 * std::sqrt(crb_deg2); }

    // `theta_deg,phi_deg,value`
    void write_grid_values_csv(const DoAGrid &grid, const RealVector &values, const std::filesystem::path &path);

} // namespace dfeval
