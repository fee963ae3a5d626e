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
#include "dfeval/farfield.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace dfeval
{
    namespace
    {
        constexpr std::string_view entry_header = "theta_deg,phi_deg,re_etheta,im_etheta,re_ephi,im_ephi";

        double number(const nlohmann::json &j, const char *key, const std::string &where)
        {
            if (!j.contains(key) || !j.at(key).is_number())
                throw ValidationError("manifest: missing numeric field '" + where + key + "'");
            return j.at(key).get<double>();
        }

        std::string file_stem(Index n, const std::string &name)
        {
            std::string clean;
            for (char c : name)
                clean += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
            char prefix[32];
            std::snprintf(prefix, sizeof(prefix), "entry_%02lld_", static_cast<long long>(n));
            return prefix + clean;
        }

        bool near_node(double value_deg, double expected_deg, double step_deg)
        {
            return std::abs(value_deg - expected_deg) <= 1e-9 * std::max(1.0, std::abs(step_deg));
        }
    } // namespace

    FarFieldSet load_farfield_set(const std::filesystem::path &path)
    {
        const auto manifest_path = std::filesystem::is_directory(path) ? path / "manifest.json" : path;
        std::ifstream in(manifest_path);
        if (!in)
            throw ValidationError("missing file: " + manifest_path.string());

        nlohmann::json m;
        try
        {
            in >> m;
        }
        catch (const nlohmann::json::exception &e)
        {
            throw ValidationError("manifest " + manifest_path.string() + ": " + e.what());
        }
        if (!m.is_object())
            throw ValidationError("manifest must be a JSON object");

        const double frequency = number(m, "frequency_hz", "");
        if (!m.contains("normalization") || !m["normalization"].is_string())
            throw ValidationError("manifest: missing string field 'normalization'");
        const auto normalization = normalization_from_string(m["normalization"].get<std::string>());

        if (!m.contains("theta_deg") || !m.contains("phi_deg"))
            throw ValidationError("manifest: missing 'theta_deg' or 'phi_deg'");
        const auto &tj = m["theta_deg"];
        const auto &pj = m["phi_deg"];
        const double t_start = number(tj, "start", "theta_deg.");
        const double t_stop = number(tj, "stop", "theta_deg.");
        const double t_step = number(tj, "step", "theta_deg.");
        const double p_start = number(pj, "start", "phi_deg.");
        const double p_step = number(pj, "step", "phi_deg.");
        const double p_count = number(pj, "count", "phi_deg.");

        if (!(t_step > 0.0) || !(t_stop > t_start))
            throw ValidationError("manifest: theta_deg needs stop > start and a positive step");
        const double t_span = t_stop - t_start;
        const Index n_theta = static_cast<Index>(std::llround(t_span / t_step)) + 1;
        if (std::abs(static_cast<double>(n_theta - 1) * t_step - t_span) > 1e-9 * t_span)
            throw ValidationError("manifest: non-uniform theta sample spacing (step does not divide range)");
        if (!(p_step > 0.0) || p_count < 2 || p_count != std::floor(p_count))
            throw ValidationError("manifest: phi_deg needs a positive step and an integer count >= 2");
        const Index n_phi = static_cast<Index>(p_count);

        UniformAxis theta{deg2rad(t_start), deg2rad(t_step), n_theta};
        UniformAxis phi{deg2rad(p_start), deg2rad(p_step), n_phi};

        if (!m.contains("entries") || !m["entries"].is_array() || m["entries"].empty())
            throw ValidationError("manifest: 'entries' must be a non-empty array");

        const auto base = manifest_path.parent_path();
        std::vector<PatternEntry> entries;
        for (const auto &ej : m["entries"])
        {
            if (!ej.contains("name") || !ej.contains("file"))
                throw ValidationError("manifest: every entry needs 'name' and 'file'");
            PatternEntry e;
            e.name = ej["name"].get<std::string>();
            if (ej.contains("eigenvalue") && !ej["eigenvalue"].is_null())
            {
                if (!ej["eigenvalue"].is_number())
                    throw ValidationError("entry '" + e.name + "': eigenvalue must be a number");
                e.eigenvalue = ej["eigenvalue"].get<double>();
            }

            const auto table = csv::read(base / ej["file"].get<std::string>(), entry_header);
            const auto expected_rows = static_cast<std::size_t>(n_theta * n_phi);
            if (table.rows.size() != expected_rows)
                throw ValidationError("entry '" + e.name + "': dimension mismatch, " + std::to_string(table.rows.size()) +
                                      " rows for a " + std::to_string(n_theta) + "x" + std::to_string(n_phi) + " grid");
            e.e_theta.resize(n_theta, n_phi);
            e.e_phi.resize(n_theta, n_phi);
            for (std::size_t r = 0; r < table.rows.size(); ++r)
            {
                const auto &row = table.rows[r];
                const Index i = static_cast<Index>(r) / n_phi;
                const Index j = static_cast<Index>(r) % n_phi;
                if (!near_node(row[0], t_start + static_cast<double>(i) * t_step, t_step) ||
                    !near_node(row[1], p_start + static_cast<double>(j) * p_step, p_step))
                    throw ValidationError("entry '" + e.name + "': row " + std::to_string(r + 1) +
                                          " is off the uniform theta/phi grid (non-uniform spacing or wrong order)");
                e.e_theta(i, j) = {row[2], row[3]};
                e.e_phi(i, j) = {row[4], row[5]};
            }
            entries.push_back(std::move(e));
        }
        return FarFieldSet(theta, phi, normalization, frequency, std::move(entries));
    }

    void save_farfield_set(const FarFieldSet &set, const std::filesystem::path &dir, const std::string &manifest_name)
    {
        std::filesystem::create_directories(dir);
        const auto &ta = set.theta_axis();
        const auto &pa = set.phi_axis();

        nlohmann::ordered_json m;
        m["frequency_hz"] = set.frequency_hz();
        m["normalization"] = std::string(to_string(set.normalization()));
        m["theta_deg"] = {{"start", rad2deg(ta.start)}, {"stop", rad2deg(ta.stop())}, {"step", rad2deg(ta.step)}};
        m["phi_deg"] = {{"start", rad2deg(pa.start)}, {"step", rad2deg(pa.step)}, {"count", pa.count}};
        m["entries"] = nlohmann::ordered_json::array();

        for (Index n = 0; n < set.size(); ++n)
        {
            const auto &e = set.entry(n);
            const std::string file = file_stem(n, e.name) + ".csv";
            nlohmann::ordered_json ej = {{"name", e.name}, {"file", file}};
            if (e.eigenvalue)
                ej["eigenvalue"] = *e.eigenvalue;
            m["entries"].push_back(ej);

            csv::Writer w(dir / file);
            w.header(entry_header);
            for (Index i = 0; i < ta.count; ++i)
                for (Index j = 0; j < pa.count; ++j)
                    w.row({rad2deg(ta[i]), rad2deg(pa[j]), e.e_theta(i, j).real(), e.e_theta(i, j).imag(),
                           e.e_phi(i, j).real(), e.e_phi(i, j).imag()});
        }

        std::ofstream out(dir / manifest_name);
        if (!out)
            throw std::runtime_error("cannot write manifest in " + dir.string());
        out << m.dump(2) << '\n';
    }

} // namespace dfeval
