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

#include "dfeval/estimators.hpp"
#include "dfeval/csv.hpp"
#include "dfeval/errors.hpp"
#include "dfeval/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <stdexcept>

namespace dfeval
{
    void SourceScenario::validate() const
    {
        if (snapshot_count < 1)
            throw std::invalid_argument("snapshot count must be at least 1");
        if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
            throw std::invalid_argument("SNR must be a number below +inf dB or exactly +inf");
        if (!(signal_power >= 0.0) || !std::isfinite(signal_power))
            throw std::invalid_argument("signal power must be finite and nonnegative");
    }

    double noise_power(const MeasurementMatrix &X, double snr_db)
    {
        if (X.doas() == 0 || X.ports() == 0)
            throw std::invalid_argument("empty measurement matrix");
        if (snr_db == std::numeric_limits<double>::infinity())
            return 0.0;
        double sum = 0.0;
        for (Index k = 0; k < X.doas(); ++k)
            sum += column_squared_norm(X.values, k);
        const double reference = sum / static_cast<double>(X.doas()) / static_cast<double>(X.ports());
        return reference / std::pow(10.0, snr_db / 10.0);
    }

    ComplexMatrix expected_covariance(const ComplexVector &steering, double signal_power, double noise_power)
    {
        if (!(signal_power >= 0.0) || !(noise_power >= 0.0))
            throw std::invalid_argument("signal and noise power must be non-negative");
        const Index P = steering.size();
        ComplexMatrix R = signal_power * steering * steering.adjoint();
        R.diagonal().array() += noise_power;
        // exact Hermitian symmetry
        for (Index i = 0; i < P; ++i)
        {
            R(i, i) = R(i, i).real();
            for (Index j = 0; j < i; ++j)
                R(i, j) = std::conj(R(j, i));
        }
        return R;
    }

    namespace
    {
        ComplexVector source_steering(const MeasurementMatrix &X, const SourceScenario &scenario)
        {
            scenario.validate();
            const Index k = X.grid.nearest(scenario.source_doa);
            const ComplexVector a = X.values.col(k);
            if (a.squaredNorm() == 0.0)
                throw DegeneracyError("steering vector at the source DoA is zero", k);
            return a;
        }
    } // namespace

    ComplexMatrix expected_covariance(const MeasurementMatrix &X, const SourceScenario &scenario)
    {
        return expected_covariance(source_steering(X, scenario), scenario.signal_power,
                                   noise_power(X, scenario.snr_db));
    }

    ComplexMatrix snapshot_covariance(const MeasurementMatrix &X, const SourceScenario &scenario, std::uint64_t seed)
    {
        const ComplexVector a = source_steering(X, scenario);
        const double sigma_n = std::sqrt(noise_power(X, scenario.snr_db) / 2.0);
        const double sigma_s = std::sqrt(scenario.signal_power / 2.0);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        const Index P = a.size();
        ComplexMatrix R = ComplexMatrix::Zero(P, P);
        ComplexVector x(P);
        for (Index t = 0; t < scenario.snapshot_count; ++t)
        {
            const double sr = normal(rng), si = normal(rng);
            const cd s(sigma_s * sr, sigma_s * si);
            for (Index p = 0; p < P; ++p)
            {
                const double nr = normal(rng), ni = normal(rng);
                x(p) = a(p) * s + cd(sigma_n * nr, sigma_n * ni);
            }
            R += x * x.adjoint();
        }
        R /= static_cast<double>(scenario.snapshot_count);
        return R;
    }

    MusicSpectrum music_spectrum(const MeasurementMatrix &X, const ComplexMatrix &R, const GridMetric &metric,
                                 Index model_order, unsigned workers)
    {
        const Index P = X.ports();
        if (model_order != 1)
            throw std::invalid_argument("only model order 1 is supported");
        if (P <= model_order)
            throw std::invalid_argument("MUSIC needs more entries than sources");
        if (R.rows() != P || R.cols() != P)
            throw std::invalid_argument("covariance dimensions differ from the entry count");
        if (metric.size() != X.doas())
            throw std::invalid_argument("grid metric and measurement matrix sizes differ");

        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(R);
        if (es.info() != Eigen::Success)
            throw DegeneracyError("covariance eigendecomposition failed");
        const auto &ev = es.eigenvalues(); // ascending
        const Index noise_dim = P - model_order;
        const double gap = ev(noise_dim) - ev(noise_dim - 1);
        if (!(gap >= 1e-12 * std::abs(ev(P - 1))) || ev(P - 1) <= 0.0)
            throw DegeneracyError("signal and noise subspaces are not separated");
        const ComplexMatrix En = es.eigenvectors().leftCols(noise_dim);

        const Index K = X.doas();
        RealVector raw(K);
        parallel_for(K, workers, [&](Index k)
                     {
                         const double n2 = column_squared_norm(X.values, k);
                         if (n2 == 0.0)
                             throw DegeneracyError("zero steering column in MUSIC scan", k);
                         const ComplexVector a = X.values.col(k) / std::sqrt(n2);
                         const double proj = (En.adjoint() * a).squaredNorm();
                         raw(k) = 1.0 / (proj + music_regularizer); });

        MusicSpectrum out;
        out.value = raw / raw.maxCoeff();
        out.db = out.value.unaryExpr([](double v)
                                     { return 10.0 * std::log10(v); });
        const auto &nbrs = metric.neighbors();
        for (Index k = 0; k < K; ++k)
        {
            bool is_max = true;
            for (Index n : nbrs[static_cast<std::size_t>(k)])
                if (out.value(n) > out.value(k))
                {
                    is_max = false;
                    break;
                }
            if (is_max)
                out.peaks.push_back(k);
        }
        std::stable_sort(out.peaks.begin(), out.peaks.end(), [&](Index a, Index b)
                         { return out.value(a) > out.value(b); });
        return out;
    }

    MusicSpectrum music_spectrum(const MeasurementMatrix &X, const SourceScenario &scenario, const GridMetric &metric,
                                 unsigned workers)
    {
        return music_spectrum(X, expected_covariance(X, scenario), metric, 1, workers);
    }

    std::optional<Index> strongest_peak_outside(const MusicSpectrum &spectrum, const GridMetric &metric, Index center,
                                                double radius)
    {
        for (Index k : spectrum.peaks)
            if (metric.distances()(center, k) > radius)
                return k;
        return std::nullopt;
    }

    namespace
    {
        ComplexVector steering_at(const FarFieldSet &set, const Direction &d, Polarization pol)
        {
            ComplexVector a(set.size());
            for (Index n = 0; n < set.size(); ++n)
                a(n) = set.sample(n, d, pol);
            return a;
        }
    } // namespace

    double crb_phi(const FarFieldSet &set, const SourceScenario &scenario, double noise_power, double step_deg)
    {
        scenario.validate();
        if (!(step_deg > 0.0))
            throw std::invalid_argument("finite-difference step must be positive");
        const auto &src = scenario.source_doa;
        const ComplexVector a = steering_at(set, src, scenario.polarization);
        const double a2 = a.squaredNorm();
        if (a2 == 0.0)
            throw DegeneracyError("steering vector at the source DoA is zero");

        const double h = deg2rad(step_deg);
        const ComplexVector ap = steering_at(set, Direction(src.theta(), src.phi() + h), scenario.polarization);
        const ComplexVector am = steering_at(set, Direction(src.theta(), src.phi() - h), scenario.polarization);
        const ComplexVector d = (ap - am) / (2.0 * step_deg);

        const cd ad = a.dot(d); // a^H d
        const double info = d.squaredNorm() - std::norm(ad) / a2;
        if (!(info >= 1e-15 * a2))
            throw DegeneracyError("azimuth is not identifiable at the source DoA");
        if (scenario.signal_power == 0.0)
            throw DegeneracyError("zero signal power gives an unbounded CRB");
        return noise_power / (2.0 * static_cast<double>(scenario.snapshot_count) * scenario.signal_power * info);
    }

    RealVector crb_map(const FarFieldSet &set, const MeasurementMatrix &X, const SourceScenario &scenario,
                       double step_deg, unsigned workers)
    {
        const double sigma_n2 = noise_power(X, scenario.snr_db);
        RealVector out(X.doas());
        parallel_for(X.doas(), workers, [&](Index k)
                     {
                         SourceScenario s = scenario;
                         s.source_doa = X.grid[k];
                         out(k) = crb_phi(set, s, sigma_n2, step_deg); });
        return out;
    }

    void write_grid_values_csv(const DoAGrid &grid, const RealVector &values, const std::filesystem::path &path)
    {
        if (values.size() != grid.size())
            throw std::invalid_argument("value count differs from the grid size");
        csv::Writer w(path);
        w.header("theta_deg,phi_deg,value");
        for (Index k = 0; k < grid.size(); ++k)
            w.row({grid[k].theta_deg(), grid[k].phi_deg(), values(k)});
    }

} // namespace dfeval
