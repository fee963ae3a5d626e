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

#include "dfeval/run_config.hpp"
#include "dfeval/errors.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace dfeval
{
    namespace
    {
        using nlohmann::json;
        using nlohmann::ordered_json;

        template <typename T>
        void take(const json &obj, const char *key, T &target, const std::string &path)
        {
            if (!obj.contains(key))
                return;
            try
            {
                target = obj.at(key).get<T>();
            }
            catch (const json::exception &)
            {
                throw std::invalid_argument("config key '" + path + key + "' has the wrong type");
            }
        }

        void check_keys(const json &obj, std::initializer_list<const char *> known, const std::string &path)
        {
            if (!obj.is_object())
                throw std::invalid_argument("config section '" + path + "' must be an object");
            for (const auto &[key, value] : obj.items())
            {
                bool ok = false;
                for (const char *k : known)
                    ok = ok || key == k;
                if (!ok)
                    throw std::invalid_argument("unknown config key '" + path + key + "'");
            }
        }

        const json &section(const json &obj, const char *key)
        {
            static const json empty = json::object();
            return obj.contains(key) ? obj.at(key) : empty;
        }
    } // namespace

    void RunConfig::validate() const
    {
        if (!(grid.theta_min_deg >= 0.0 && grid.theta_min_deg < grid.theta_max_deg && grid.theta_max_deg <= 90.0))
            throw std::invalid_argument("grid: need 0 <= theta_min_deg < theta_max_deg <= 90");
        if (grid.count < 1)
            throw std::invalid_argument("grid.count must be at least 1");
        polarization_from_string(polarization);
        if (kind != "auto")
            measurement_kind_from_string(kind);
        if (weighting != "linear")
            throw std::invalid_argument("weighting: only 'linear' is available");
        if (!(ambiguity.radius_deg > 0.0))
            throw std::invalid_argument("ambiguity.radius_deg must be positive");
        if (!(ambiguity.threshold > 0.0 && ambiguity.threshold <= 1.0))
            throw std::invalid_argument("ambiguity.threshold must lie in (0, 1]");
        if (scenario.snapshots < 1)
            throw std::invalid_argument("scenario.snapshots must be at least 1");
        if (scenario.covariance != "expected" && scenario.covariance != "snapshots")
            throw std::invalid_argument("scenario.covariance must be 'expected' or 'snapshots'");
        if (!(scenario.signal_power >= 0.0))
            throw std::invalid_argument("scenario.signal_power must be nonnegative");
        if (modeselect.min_size < 1 || modeselect.max_size < 0 ||
            (modeselect.max_size != 0 && modeselect.max_size < modeselect.min_size))
            throw std::invalid_argument("modeselect: need 1 <= min_size <= max_size (0 = all)");
        if (!(modeselect.tolerance_db >= 0.0) || !(modeselect.best_tolerance_db >= 0.0))
            throw std::invalid_argument("modeselect tolerances must be nonnegative");
        if (!(crb.step_deg > 0.0))
            throw std::invalid_argument("crb.step_deg must be positive");
        if (crb.unit != "deg2" && crb.unit != "deg/100")
            throw std::invalid_argument("crb.unit must be 'deg2' or 'deg/100'");
        if (!(incident.theta_step_deg > 0.0) || !(incident.phi_step_deg > 0.0))
            throw std::invalid_argument("incident grid steps must be positive");
        if (output_dir.empty())
            throw std::invalid_argument("output_dir must not be empty");
    }

    Polarization RunConfig::polarization_value() const { return polarization_from_string(polarization); }

    MeasurementKind RunConfig::kind_value(Normalization normalization) const
    {
        if (kind == "auto")
            return normalization == Normalization::cm_directivity ? MeasurementKind::cm_directivity
                                                                  : MeasurementKind::port;
        return measurement_kind_from_string(kind);
    }

    AmbiguityOptions RunConfig::ambiguity_options() const
    {
        return {deg2rad(ambiguity.radius_deg), ambiguity.threshold};
    }

    SourceScenario RunConfig::source_scenario() const
    {
        SourceScenario s;
        s.source_doa = Direction::from_degrees(scenario.source_deg[0], scenario.source_deg[1]);
        s.polarization = polarization_value();
        s.snr_db = scenario.snr_db;
        s.snapshot_count = scenario.snapshots;
        s.signal_power = scenario.signal_power;
        return s;
    }

    DoAGrid RunConfig::make_grid() const
    {
        return generate_cap_grid(deg2rad(grid.theta_min_deg), deg2rad(grid.theta_max_deg), grid.count);
    }

    ordered_json to_json(const RunConfig &c)
    {
        ordered_json j;
        j["grid"] = {{"theta_min_deg", c.grid.theta_min_deg},
                     {"theta_max_deg", c.grid.theta_max_deg},
                     {"count", c.grid.count}};
        j["polarization"] = c.polarization;
        j["kind"] = c.kind;
        j["weighting"] = c.weighting;
        j["ambiguity"] = {{"radius_deg", c.ambiguity.radius_deg}, {"threshold", c.ambiguity.threshold}};
        j["references"] = c.references;
        j["scenario"] = {{"source_deg", c.scenario.source_deg},
                         {"snr_db", c.scenario.snr_db},
                         {"snr_reference", "mean over grid DoAs of |x_k|^2 / P"},
                         {"snapshots", c.scenario.snapshots},
                         {"signal_power", c.scenario.signal_power},
                         {"covariance", c.scenario.covariance},
                         {"seed", c.scenario.seed}};
        j["modeselect"] = {{"min_size", c.modeselect.min_size},
                           {"max_size", c.modeselect.max_size},
                           {"best_tolerance_db", c.modeselect.best_tolerance_db},
                           {"tolerance_db", c.modeselect.tolerance_db}};
        j["crb"] = {{"step_deg", c.crb.step_deg}, {"unit", c.crb.unit}, {"model", "deterministic single source"}};
        j["incident"] = {{"reference_deg", c.incident.reference_deg},
                         {"theta_step_deg", c.incident.theta_step_deg},
                         {"phi_step_deg", c.incident.phi_step_deg}};
        j["emit"] = {{"grid", c.emit.grid},
                     {"uncertainty_matrix", c.emit.uncertainty_matrix},
                     {"uncertainty_vectors", c.emit.uncertainty_vectors},
                     {"ambiguity_findings", c.emit.ambiguity_findings}};
        j["output_dir"] = c.output_dir;
        return j;
    }

    void apply_json(RunConfig &c, const json &j)
    {
        check_keys(j, {"grid", "polarization", "kind", "weighting", "ambiguity", "references", "scenario",
                       "modeselect", "crb", "incident", "emit", "output_dir"},
                   "");
        const auto &g = section(j, "grid");
        check_keys(g, {"theta_min_deg", "theta_max_deg", "count"}, "grid.");
        take(g, "theta_min_deg", c.grid.theta_min_deg, "grid.");
        take(g, "theta_max_deg", c.grid.theta_max_deg, "grid.");
        take(g, "count", c.grid.count, "grid.");
        take(j, "polarization", c.polarization, "");
        take(j, "kind", c.kind, "");
        take(j, "weighting", c.weighting, "");
        const auto &a = section(j, "ambiguity");
        check_keys(a, {"radius_deg", "threshold"}, "ambiguity.");
        take(a, "radius_deg", c.ambiguity.radius_deg, "ambiguity.");
        take(a, "threshold", c.ambiguity.threshold, "ambiguity.");
        take(j, "references", c.references, "");
        const auto &s = section(j, "scenario");
        check_keys(s, {"source_deg", "snr_db", "snr_reference", "snapshots", "signal_power", "covariance", "seed"},
                   "scenario.");
        take(s, "source_deg", c.scenario.source_deg, "scenario.");
        take(s, "snr_db", c.scenario.snr_db, "scenario.");
        take(s, "snapshots", c.scenario.snapshots, "scenario.");
        take(s, "signal_power", c.scenario.signal_power, "scenario.");
        take(s, "covariance", c.scenario.covariance, "scenario.");
        take(s, "seed", c.scenario.seed, "scenario.");
        const auto &m = section(j, "modeselect");
        check_keys(m, {"min_size", "max_size", "best_tolerance_db", "tolerance_db"}, "modeselect.");
        take(m, "min_size", c.modeselect.min_size, "modeselect.");
        take(m, "max_size", c.modeselect.max_size, "modeselect.");
        take(m, "best_tolerance_db", c.modeselect.best_tolerance_db, "modeselect.");
        take(m, "tolerance_db", c.modeselect.tolerance_db, "modeselect.");
        const auto &r = section(j, "crb");
        check_keys(r, {"step_deg", "unit", "model"}, "crb.");
        take(r, "step_deg", c.crb.step_deg, "crb.");
        take(r, "unit", c.crb.unit, "crb.");
        const auto &i = section(j, "incident");
        check_keys(i, {"reference_deg", "theta_step_deg", "phi_step_deg"}, "incident.");
        take(i, "reference_deg", c.incident.reference_deg, "incident.");
        take(i, "theta_step_deg", c.incident.theta_step_deg, "incident.");
        take(i, "phi_step_deg", c.incident.phi_step_deg, "incident.");
        const auto &e = section(j, "emit");
        check_keys(e, {"grid", "uncertainty_matrix", "uncertainty_vectors", "ambiguity_findings"}, "emit.");
        take(e, "grid", c.emit.grid, "emit.");
        take(e, "uncertainty_matrix", c.emit.uncertainty_matrix, "emit.");
        take(e, "uncertainty_vectors", c.emit.uncertainty_vectors, "emit.");
        take(e, "ambiguity_findings", c.emit.ambiguity_findings, "emit.");
        take(j, "output_dir", c.output_dir, "");
    }

    RunConfig load_run_config(const std::optional<std::filesystem::path> &path)
    {
        RunConfig c;
        if (!path)
            return c;
        std::ifstream in(*path);
        if (!in)
            throw std::invalid_argument("cannot read config file '" + path->string() + "'");
        json j;
        try
        {
            in >> j;
        }
        catch (const json::exception &e)
        {
            throw std::invalid_argument("config file '" + path->string() + "' is not valid JSON: " + e.what());
        }
        apply_json(c, j);
        return c;
    }

    void write_run_json(const RunConfig &config, const std::string &command, const ordered_json &inputs,
                        const std::filesystem::path &path)
    {
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm utc{};
        gmtime_r(&now, &utc);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &utc);

        ordered_json j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["config"] = to_json(config);
        j["generated_at"] = stamp;
        std::ofstream out(path);
        out << j.dump(2) << '\n';
        if (!out)
            throw std::runtime_error("cannot write '" + path.string() + "'");
    }

} // namespace dfeval
