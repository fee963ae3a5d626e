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

#include "dfeval/estimators.hpp"
#include "dfeval/modeselect.hpp"
#include "dfeval/geometry.hpp"
#include "dfeval/types.hpp"
#include "dfeval/uncertainty.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dfeval
{
    // Fully materialized configuration of one CLI run. Angles in degrees.
    struct RunConfig
    {
        struct Grid
        {
            double theta_min_deg = 45.0;
            double theta_max_deg = 90.0;
            Index count = 250;
        } grid;

        std::string polarization = "theta";
        std::string kind = "auto"; // auto | port | directivity | realized
        std::string weighting = "linear";

        struct Ambiguity
        {
            double radius_deg = 30.0;
            double threshold = 0.5;
        } ambiguity;

        // Reference DoAs whose uncertainty vectors are exported
        std::vector<std::array<double, 2>> references{{80.0, 90.0}};

        struct Scenario
        {
            std::array<double, 2> source_deg{80.0, 90.0};
            double snr_db = 0.0;
            Index snapshots = 1;
            double signal_power = 1.0;
            std::string covariance = "expected"; // expected | snapshots
            std::uint64_t seed = 1;
        } scenario;

        struct ModeSelect
        {
            Index min_size = 1;
            Index max_size = 0; // 0: all entries
            double best_tolerance_db = default_best_tolerance_db;
            double tolerance_db = default_degeneracy_tolerance_db;
        } modeselect;

        struct Crb
        {
            double step_deg = crb_default_step_deg;
            std::string unit = "deg2"; // deg2 | deg/100
        } crb;

        struct Incident
        {
            std::array<double, 2> reference_deg{90.0, 45.0};
            double theta_step_deg = 1.0;
            double phi_step_deg = 1.0;
        } incident;

        struct Emit
        {
            bool grid = true;
            bool uncertainty_matrix = true;
            bool uncertainty_vectors = true;
            bool ambiguity_findings = true;
        } emit;

        std::string output_dir = "df-eval-out";

        // Throws std::invalid_argument naming the offending key
        void validate() const;

        Polarization polarization_value() const;
        // `auto` resolves to cm-directivity for sets tagged cm-directivity, port otherwise
        MeasurementKind kind_value(Normalization normalization) const;
        AmbiguityOptions ambiguity_options() const;
        SourceScenario source_scenario() const;
        DoAGrid make_grid() const;
    };

    nlohmann::ordered_json to_json(const RunConfig &config);

    // Overlays the keys present in `patch` onto `config`; unknown keys are errors
    void apply_json(RunConfig &config, const nlohmann::json &patch);

    // defaults, then the file (if any)
    RunConfig load_run_config(const std::optional<std::filesystem::path> &path);

    // `run.json`: resolved config, command, inputs; the timestamp sits under `generated_at`
    void write_run_json(const RunConfig &config, const std::string &command, const nlohmann::ordered_json &inputs,
                        const std::filesystem::path &path);

} // namespace dfeval
