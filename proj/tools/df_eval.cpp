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

// df-eval command-line front end. Exit codes: 0 success, 1 I/O failure, 2 configuration
// error, 3 data-validation error, 4 numeric degeneracy.

#include "dfeval/csv.hpp"
#include "dfeval/errors.hpp"
#include "dfeval/estimators.hpp"
#include "dfeval/farfield.hpp"
#include "dfeval/geometry.hpp"
#include "dfeval/incident.hpp"
#include "dfeval/modeselect.hpp"
#include "dfeval/parallel.hpp"
#include "dfeval/run_config.hpp"
#include "dfeval/synth.hpp"
#include "dfeval/uncertainty.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <utility>

namespace fs = std::filesystem;
using namespace dfeval;
using nlohmann::ordered_json;

namespace
{
    // Flags that override config-file values when given
    struct Overrides
    {
        std::string config_path;
        std::string out;
        std::optional<double> theta_min, theta_max;
        std::optional<Index> count;
        std::optional<std::string> pol, kind;
        std::optional<double> radius, threshold;
        std::vector<std::pair<double, double>> refs;
        std::optional<std::pair<double, double>> source, incident_ref;
        std::optional<double> snr, step, theta_step, phi_step, tolerance_db;
        std::optional<Index> snapshots, min_size, max_size;
        std::optional<std::string> unit, covariance;
        std::optional<std::uint64_t> seed;
        std::string farfield;
    };

    void add_common(CLI::App *cmd, Overrides &o, bool needs_farfield = true)
    {
        cmd->add_option("--config", o.config_path, "JSON config file (flags take precedence)");
        cmd->add_option("--out", o.out, "Output directory");
        if (needs_farfield)
            cmd->add_option("--farfield", o.farfield, "Far-field manifest (JSON)")->required();
        cmd->add_option("--theta-min", o.theta_min, "Cap lower theta bound, deg");
        cmd->add_option("--theta-max", o.theta_max, "Cap upper theta bound, deg");
        cmd->add_option("--count", o.count, "Target DoA count");
        cmd->add_option("--pol", o.pol, "Polarization: theta | phi");
        cmd->add_option("--kind", o.kind, "Matrix kind: auto | port | directivity | realized");
    }

    RunConfig resolve(const Overrides &o)
    {
        RunConfig c = load_run_config(o.config_path.empty() ? std::nullopt : std::optional<fs::path>(o.config_path));
        if (!o.out.empty())
            c.output_dir = o.out;
        if (o.theta_min)
            c.grid.theta_min_deg = *o.theta_min;
        if (o.theta_max)
            c.grid.theta_max_deg = *o.theta_max;
        if (o.count)
            c.grid.count = *o.count;
        if (o.pol)
            c.polarization = *o.pol;
        if (o.kind)
            c.kind = *o.kind;
        if (o.radius)
            c.ambiguity.radius_deg = *o.radius;
        if (o.threshold)
            c.ambiguity.threshold = *o.threshold;
        if (!o.refs.empty())
        {
            c.references.clear();
            for (const auto &[t, p] : o.refs)
                c.references.push_back({t, p});
        }
        if (o.source)
            c.scenario.source_deg = {o.source->first, o.source->second};
        if (o.snr)
            c.scenario.snr_db = *o.snr;
        if (o.snapshots)
            c.scenario.snapshots = *o.snapshots;
        if (o.covariance)
            c.scenario.covariance = *o.covariance;
        if (o.seed)
            c.scenario.seed = *o.seed;
        if (o.min_size)
            c.modeselect.min_size = *o.min_size;
        if (o.max_size)
            c.modeselect.max_size = *o.max_size;
        if (o.tolerance_db)
            c.modeselect.tolerance_db = *o.tolerance_db;
        if (o.step)
            c.crb.step_deg = *o.step;
        if (o.unit)
            c.crb.unit = *o.unit;
        if (o.incident_ref)
            c.incident.reference_deg = {o.incident_ref->first, o.incident_ref->second};
        if (o.theta_step)
            c.incident.theta_step_deg = *o.theta_step;
        if (o.phi_step)
            c.incident.phi_step_deg = *o.phi_step;
        c.validate();
        return c;
    }

    fs::path prepare_output(const RunConfig &c)
    {
        const fs::path dir(c.output_dir);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
            throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
        return dir;
    }

    void write_text(const fs::path &path, const std::string &text)
    {
        std::ofstream out(path);
        out << text;
        if (!out)
            throw std::runtime_error("cannot write '" + path.string() + "'");
    }

    ordered_json direction_json(const Direction &d) { return ordered_json::array({d.theta_deg(), d.phi_deg()}); }

    struct Loaded
    {
        FarFieldSet set;
        DoAGrid grid;
        MeasurementKind kind;
        MeasurementMatrix X;
    };

    Loaded load(const Overrides &o, const RunConfig &c)
    {
        auto set = load_farfield_set(o.farfield);
        auto grid = c.make_grid();
        const auto kind = c.kind_value(set.normalization());
        auto X = assemble_measurement_matrix(set, grid, c.polarization_value(), kind);
        return {std::move(set), std::move(grid), kind, std::move(X)};
    }

    ordered_json inputs_json(const Overrides &o, const Loaded &l)
    {
        ordered_json entries = ordered_json::array();
        for (const auto &e : l.set.entries())
            entries.push_back(e.name);
        return {{"farfield", o.farfield},
                {"normalization", to_string(l.set.normalization())},
                {"entries", entries},
                {"resolved_kind", to_string(l.kind)},
                {"grid_size", l.grid.size()}};
    }

    // ------------------------------------------------------------------------------------

    int cmd_grid(const Overrides &o)
    {
        const RunConfig c = resolve(o);
        const auto dir = prepare_output(c);
        const auto grid = c.make_grid();
        write_grid_csv(grid, dir / "grid.csv");
        write_run_json(c, "grid", {{"grid_size", grid.size()}}, dir / "run.json");
        std::cout << "grid: " << grid.size() << " DoAs -> " << (dir / "grid.csv").string() << '\n';
        return 0;
    }

    int cmd_synth_uca(const Overrides &o, const UcaSpec &spec)
    {
        const RunConfig c = resolve(o);
        const auto dir = prepare_output(c);
        const auto set = synth_uca(spec);
        save_farfield_set(set, dir);
        ordered_json in = {{"generator", "uca"},
                           {"elements", spec.element_count},
                           {"spacing_over_lambda", spec.spacing_over_lambda},
                           {"monopole_length_over_lambda", spec.monopole_length_over_lambda},
                           {"theta_step_deg", spec.resolution.theta_step_deg},
                           {"phi_step_deg", spec.resolution.phi_step_deg},
                           {"frequency_hz", spec.frequency_hz}};
        write_run_json(c, "synth uca", in, dir / "run.json");
        std::cout << "synth uca: " << set.size() << " entries -> " << (dir / "manifest.json").string() << '\n';
        return 0;
    }

    int cmd_synth_modes(const Overrides &o, const std::string &preset, const GridResolution &res,
                        const std::vector<std::string> &eigen_args)
    {
        if (preset != "canonical")
            throw std::invalid_argument("unknown mode preset '" + preset + "'");
        std::map<std::string, double> eigenvalues;
        for (const auto &arg : eigen_args)
        {
            const auto eq = arg.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--eigenvalue expects NAME=VALUE, got '" + arg + "'");
            try
            {
                eigenvalues[arg.substr(0, eq)] = csv::parse_double(arg.substr(eq + 1));
            }
            catch (const ValidationError &)
            {
                throw std::invalid_argument("--eigenvalue: malformed value in '" + arg + "'");
            }
        }
        const RunConfig c = resolve(o);
        const auto dir = prepare_output(c);
        const auto set = canonical_mode_set(res, eigenvalues);
        save_farfield_set(set, dir);
        ordered_json ev = ordered_json::object();
        for (const auto &e : set.entries())
            ev[e.name] = *e.eigenvalue;
        write_run_json(c, "synth modes",
                       {{"generator", preset},
                        {"theta_step_deg", res.theta_step_deg},
                        {"phi_step_deg", res.phi_step_deg},
                        {"full_sphere", res.full_sphere},
                        {"eigenvalues", ev}},
                       dir / "run.json");
        std::cout << "synth modes: " << set.size() << " entries -> " << (dir / "manifest.json").string() << '\n';
        return 0;
    }

    int cmd_evaluate(const Overrides &o)
    {
        const RunConfig c = resolve(o);
        const auto l = load(o, c);
        const auto dir = prepare_output(c);
        const unsigned workers = default_worker_count();

        const GridMetric metric(l.grid);
        const auto U = uncertainty_matrix(l.X, metric, workers);
        const auto k = kpi(U, weight_matrix(metric));
        const auto report = detect_ambiguities(U, metric, c.ambiguity_options());

        if (c.emit.grid)
            write_grid_csv(l.grid, dir / "grid.csv");
        if (c.emit.uncertainty_matrix)
            write_uncertainty_csv(U, dir / "uncertainty_sorted.csv", dir / "uncertainty_column_perm.csv",
                                  dir / "uncertainty_row_perms.csv");
        ordered_json refs = ordered_json::array();
        if (c.emit.uncertainty_vectors)
            for (const auto &r : c.references)
            {
                const Index idx = l.grid.nearest(Direction::from_degrees(r[0], r[1]));
                const std::string name = "uncertainty_ref_" + std::to_string(idx) + ".csv";
                write_uncertainty_vector_csv(U, l.grid, idx, dir / name);
                refs.push_back({{"requested_deg", r}, {"grid_index", idx},
                                {"grid_deg", direction_json(l.grid[idx])}, {"file", name}});
            }

        ordered_json amb;
        amb["count"] = report.total();
        amb["references_affected"] = report.references_affected();
        amb["exclusion_radius_deg"] = c.ambiguity.radius_deg;
        amb["relative_threshold"] = c.ambiguity.threshold;
        amb["rule"] = "local maximum of u / sqrt(u_ref,ref u_test,test) over 6 nearest neighbours";
        if (c.emit.ambiguity_findings)
        {
            amb["findings"] = ordered_json::array();
            for (const auto &list : report.per_reference)
                for (const auto &f : list)
                    amb["findings"].push_back({{"reference_index", f.reference},
                                               {"reference_deg", direction_json(l.grid[f.reference])},
                                               {"test_index", f.test},
                                               {"test_deg", direction_json(l.grid[f.test])},
                                               {"u", f.u},
                                               {"normalized_u", f.normalized},
                                               {"distance_deg", rad2deg(f.distance)}});
        }

        ordered_json j;
        j["inputs"] = inputs_json(o, l);
        j["kpi"] = {{"linear", k.linear}, {"db", k.db}};
        j["ambiguities"] = amb;
        j["uncertainty_vectors"] = refs;
        write_text(dir / "evaluation.json", j.dump(2) + "\n");
        write_run_json(c, "evaluate", inputs_json(o, l), dir / "run.json");

        std::cout << "KPI " << csv::format(k.db) << " dB, ambiguities " << report.total() << " ("
                  << report.references_affected() << " of " << l.grid.size() << " references)\n";
        return 0;
    }

    int cmd_modeselect(const Overrides &o)
    {
        const RunConfig c = resolve(o);
        const auto l = load(o, c);
        const auto dir = prepare_output(c);

        EnumerationOptions opt;
        opt.min_size = c.modeselect.min_size;
        opt.max_size = c.modeselect.max_size;
        opt.ambiguity = c.ambiguity_options();
        opt.workers = default_worker_count();
        const auto e = enumerate_subsets(l.X, GridMetric(l.grid), opt);
        const auto best = best_per_cardinality(e.results, c.modeselect.best_tolerance_db);
        const auto groups = detect_degenerate_sets(e.results, c.modeselect.tolerance_db);

        write_subset_results_csv(e.results, dir / "subsets.csv");
        write_subset_scatter_csv(e.results, dir / "subsets_scatter.csv");
        write_text(dir / "best_sets.json", best_sets_json(e, best, groups));
        write_run_json(c, "modeselect", inputs_json(o, l), dir / "run.json");

        std::cout << e.results.size() << " subsets evaluated, " << e.failures.size() << " failed\n";
        for (const auto &b : best)
        {
            std::cout << "  size " << b.size << ": " << csv::format(b.kpi_db) << " dB";
            for (const auto &s : b.subsets)
            {
                std::cout << " {";
                for (std::size_t i = 0; i < s.size(); ++i)
                    std::cout << (i ? "," : "") << e.entry_names[static_cast<std::size_t>(s[i])];
                std::cout << "}";
            }
            std::cout << '\n';
        }
        return 0;
    }

    int cmd_incident(const Overrides &o)
    {
        const RunConfig c = resolve(o);
        const auto set = load_farfield_set(o.farfield);
        const auto dir = prepare_output(c);
        const auto ref = Direction::from_degrees(c.incident.reference_deg[0], c.incident.reference_deg[1]);
        const auto out_grid = product_grid(set.theta_axis().start, set.theta_axis().stop(),
                                           deg2rad(c.incident.theta_step_deg), deg2rad(c.incident.phi_step_deg));
        const auto est = estimate_incident_field(set, ref, c.polarization_value(), out_grid);
        write_incident_csv(est, dir / "incident_pattern.csv");

        ordered_json coeffs = ordered_json::array();
        for (Index n = 0; n < set.size(); ++n)
            coeffs.push_back({{"entry", set.entry(n).name},
                              {"re", est.coefficients.values(n).real()},
                              {"im", est.coefficients.values(n).imag()}});
        Index argmax = 0;
        est.magnitude().maxCoeff(&argmax);
        ordered_json j = {{"reference_deg", direction_json(ref)},
                          {"polarization", c.polarization},
                          {"coefficients", coeffs},
                          {"common_null", est.coefficients.common_null},
                          {"magnitude_argmax_deg", direction_json(out_grid[argmax])}};
        write_text(dir / "incident.json", j.dump(2) + "\n");
        write_run_json(c, "incident", {{"farfield", o.farfield}}, dir / "run.json");
        std::cout << "incident field peak at (" << out_grid[argmax].theta_deg() << ", "
                  << out_grid[argmax].phi_deg() << ") deg"
                  << (est.coefficients.common_null ? " [reference is a common null]" : "") << '\n';
        return 0;
    }

    int cmd_music(const Overrides &o)
    {
        const RunConfig c = resolve(o);
        const auto l = load(o, c);
        const auto dir = prepare_output(c);
        const GridMetric metric(l.grid);
        const auto scenario = c.source_scenario();
        const ComplexMatrix R = c.scenario.covariance == "expected"
                                    ? expected_covariance(l.X, scenario)
                                    : snapshot_covariance(l.X, scenario, c.scenario.seed);
        const auto spectrum = music_spectrum(l.X, R, metric, 1, default_worker_count());
        write_grid_values_csv(l.grid, spectrum.db, dir / "music_spectrum.csv");

        ordered_json peaks = ordered_json::array();
        for (std::size_t i = 0; i < spectrum.peaks.size() && i < 10; ++i)
        {
            const Index k = spectrum.peaks[i];
            peaks.push_back({{"grid_index", k}, {"deg", direction_json(l.grid[k])}, {"db", spectrum.db(k)}});
        }
        const Index src = l.grid.nearest(scenario.source_doa);
        const auto outside = strongest_peak_outside(spectrum, metric, src, c.ambiguity_options().exclusion_radius);
        ordered_json j = {{"source_grid_index", src},
                          {"source_grid_deg", direction_json(l.grid[src])},
                          {"noise_power", noise_power(l.X, scenario.snr_db)},
                          {"peaks", peaks}};
        j["strongest_peak_outside_exclusion"] =
            outside ? ordered_json{{"grid_index", *outside}, {"deg", direction_json(l.grid[*outside])},
                                   {"db", spectrum.db(*outside)}}
                    : ordered_json(nullptr);
        write_text(dir / "music.json", j.dump(2) + "\n");
        write_run_json(c, "music", inputs_json(o, l), dir / "run.json");
        std::cout << "MUSIC: " << spectrum.peaks.size() << " peaks";
        if (outside)
            std::cout << ", strongest outside exclusion at (" << l.grid[*outside].theta_deg() << ", "
                      << l.grid[*outside].phi_deg() << ") deg, " << csv::format(spectrum.db(*outside)) << " dB";
        std::cout << '\n';
        return 0;
    }

    int cmd_crb(const Overrides &o)
    {
        const RunConfig c = resolve(o);
        const auto l = load(o, c);
        const auto dir = prepare_output(c);
        const auto scenario = c.source_scenario();
        RealVector map = crb_map(l.set, l.X, scenario, c.crb.step_deg, default_worker_count());
        if (c.crb.unit == "deg/100")
            map = map.unaryExpr([](double v)
                                { return crb_deg_over_100(v); });
        write_grid_values_csv(l.grid, map, dir / "crb_map.csv");
        const double at_source = crb_phi(l.set, scenario, noise_power(l.X, scenario.snr_db), c.crb.step_deg);
        ordered_json j = {{"unit", c.crb.unit},
                          {"model", "deterministic single source"},
                          {"source_deg", c.scenario.source_deg},
                          {"crb_deg2_at_source", at_source},
                          {"crb_deg_over_100_at_source", crb_deg_over_100(at_source)}};
        write_text(dir / "crb.json", j.dump(2) + "\n");
        write_run_json(c, "crb", inputs_json(o, l), dir / "run.json");
        std::cout << "CRB at source " << csv::format(at_source) << " deg^2\n";
        return 0;
    }

    int report(const char *kind, const std::exception &e, int code)
    {
        std::cerr << "df-eval: " << kind << ": " << e.what() << '\n';
        return code;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"df-eval: deterministic evaluation of direction finding antenna systems"};
    app.require_subcommand(1);
    Overrides o;

    auto *grid = app.add_subcommand("grid", "Write the DoA grid as CSV");
    add_common(grid, o, false);

    auto *synth = app.add_subcommand("synth", "Generate analytic far-field sets");
    synth->require_subcommand(1);
    UcaSpec uca;
    auto *uca_cmd = synth->add_subcommand("uca", "Uniform circular array of monopoles");
    uca_cmd->add_option("--elements", uca.element_count, "Element count")->capture_default_str();
    uca_cmd->add_option("--spacing", uca.spacing_over_lambda, "Element spacing / wavelength")->capture_default_str();
    uca_cmd->add_option("--length", uca.monopole_length_over_lambda, "Monopole length / wavelength")
        ->capture_default_str();
    uca_cmd->add_option("--theta-step", uca.resolution.theta_step_deg, "Theta sample step, deg")->capture_default_str();
    uca_cmd->add_option("--phi-step", uca.resolution.phi_step_deg, "Phi sample step, deg")->capture_default_str();
    uca_cmd->add_option("--frequency", uca.frequency_hz, "Frequency, Hz")->capture_default_str();
    uca_cmd->add_option("--config", o.config_path, "JSON config file");
    uca_cmd->add_option("--out", o.out, "Output directory");

    std::string preset = "canonical";
    GridResolution modes_res;
    std::vector<std::string> eigen_args;
    auto *modes_cmd = synth->add_subcommand("modes", "Canonical mode-like pattern set");
    modes_cmd->add_option("--preset", preset, "Preset name")->capture_default_str();
    modes_cmd->add_option("--eigenvalue", eigen_args, "NAME=VALUE eigenvalue override (repeatable)");
    modes_cmd->add_flag("--full-sphere", modes_res.full_sphere, "Sample theta up to 180 deg");
    modes_cmd->add_option("--theta-step", modes_res.theta_step_deg, "Theta sample step, deg")->capture_default_str();
    modes_cmd->add_option("--phi-step", modes_res.phi_step_deg, "Phi sample step, deg")->capture_default_str();
    modes_cmd->add_option("--config", o.config_path, "JSON config file");
    modes_cmd->add_option("--out", o.out, "Output directory");

    auto *evaluate = app.add_subcommand("evaluate", "Uncertainty matrix, KPI and ambiguity report");
    add_common(evaluate, o);
    evaluate->add_option("--radius", o.radius, "Ambiguity exclusion radius, deg");
    evaluate->add_option("--threshold", o.threshold, "Ambiguity relative threshold");
    evaluate->add_option("--ref", o.refs, "Reference DoA (theta phi, deg) for uncertainty-vector export");

    auto *modeselect = app.add_subcommand("modeselect", "Exhaustive subset ranking");
    add_common(modeselect, o);
    modeselect->add_option("--min-size", o.min_size, "Smallest subset size");
    modeselect->add_option("--max-size", o.max_size, "Largest subset size (0: all)");
    modeselect->add_option("--tolerance-db", o.tolerance_db, "Degeneracy tolerance, dB");
    modeselect->add_option("--radius", o.radius, "Ambiguity exclusion radius, deg");
    modeselect->add_option("--threshold", o.threshold, "Ambiguity relative threshold");

    auto *incident = app.add_subcommand("incident", "Estimated incident field for one reference DoA");
    add_common(incident, o);
    incident->add_option("--ref", o.incident_ref, "Reference DoA (theta phi, deg)");
    incident->add_option("--theta-step", o.theta_step, "Output grid theta step, deg");
    incident->add_option("--phi-step", o.phi_step, "Output grid phi step, deg");

    auto *music = app.add_subcommand("music", "MUSIC pseudo-spectrum over the DoA grid");
    add_common(music, o);
    music->add_option("--source", o.source, "Source DoA (theta phi, deg)");
    music->add_option("--snr", o.snr, "SNR, dB");
    music->add_option("--snapshots", o.snapshots, "Snapshot count");
    music->add_option("--covariance", o.covariance, "expected | snapshots");
    music->add_option("--seed", o.seed, "Seed for the snapshot generator");
    music->add_option("--radius", o.radius, "Exclusion radius for the secondary-peak report, deg");

    auto *crb = app.add_subcommand("crb", "Azimuth CRB map over the DoA grid");
    add_common(crb, o);
    crb->add_option("--source", o.source, "DoA for the single-point report (theta phi, deg)");
    crb->add_option("--snr", o.snr, "SNR, dB");
    crb->add_option("--snapshots", o.snapshots, "Snapshot count");
    crb->add_option("--step", o.step, "Finite-difference step, deg");
    crb->add_option("--unit", o.unit, "deg2 | deg/100");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try
    {
        if (grid->parsed())
            return cmd_grid(o);
        if (uca_cmd->parsed())
            return cmd_synth_uca(o, uca);
        if (modes_cmd->parsed())
            return cmd_synth_modes(o, preset, modes_res, eigen_args);
        if (evaluate->parsed())
            return cmd_evaluate(o);
        if (modeselect->parsed())
            return cmd_modeselect(o);
        if (incident->parsed())
            return cmd_incident(o);
        if (music->parsed())
            return cmd_music(o);
        if (crb->parsed())
            return cmd_crb(o);
    }
    catch (const DegeneracyError &e)
    {
        return report("numeric degeneracy", e, 4);
    }
    catch (const ValidationError &e)
    {
        return report("invalid data", e, 3);
    }
    catch (const std::out_of_range &e)
    {
        return report("invalid data", e, 3);
    }
    catch (const std::invalid_argument &e)
    {
        return report("configuration error", e, 2);
    }
    catch (const std::exception &e)
    {
        return report("error", e, 1);
    }
    return 2;
}
