// Command-line front end. Thin by design: every subcommand drives the same
// library entry points the tests use.
//
//   fearsim simulate   --preset baseline --seeds 30 --out runs/baseline
//   fearsim multiplier --preset baseline --grid 0,0.01,0.04 --seeds 30 --out runs/mult
//   fearsim validate-sir --beta 0.30 --gamma 0.0714285714 --p0 1000000 --days 350
//   fearsim presets list | show <name>
//
// Exit codes: 0 success, 1 validation/usage failure, 2 runtime invariant breach.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fearsim/ensemble.hpp"
#include "fearsim/experiments.hpp"
#include "fearsim/output.hpp"
#include "fearsim/overrides.hpp"
#include "fearsim/presets.hpp"
#include "fearsim/scenario_json.hpp"
#include "fearsim/util.hpp"
#include "fearsim/version.hpp"

namespace {

using fearsim::ScenarioConfig;
using fearsim::ScenarioError;
using fearsim::ValidatedScenario;

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

struct ScenarioOptions {
    std::string scenario_file;
    std::string preset;
    std::vector<std::string> overrides;
};

void add_scenario_options(CLI::App* cmd, ScenarioOptions& opts) {
    auto* file = cmd->add_option("--scenario", opts.scenario_file, "Scenario JSON file");
    auto* preset =
        cmd->add_option("--preset", opts.preset, "Bundled preset (see `fearsim presets list`)");
    file->excludes(preset);
    cmd->add_option("--set", opts.overrides,
                    "Override a scenario field before validation, e.g. government.theta=0.5");
}

// Loads, applies overrides, validates.
ValidatedScenario load_scenario(const ScenarioOptions& opts) {
    ScenarioConfig base;
    if (!opts.scenario_file.empty())
        base = fearsim::load_scenario_file(opts.scenario_file);
    else if (!opts.preset.empty())
        base = fearsim::make_preset(opts.preset);
    else
        throw ScenarioError({"either --scenario or --preset is required"});
    return fearsim::with_overrides(base, opts.overrides);
}

// `--seeds` accepts a replication count (seeds scenario.seed, +1, ...) or an
// explicit comma-separated list.
std::vector<std::uint64_t> parse_seeds(const std::string& spec, std::uint64_t base) {
    if (spec.find(',') == std::string::npos) {
        const auto count = std::stoull(spec);
        if (count == 0) throw ScenarioError({"--seeds: need at least one seed"});
        return fearsim::seeds_from_base(base, count);
    }
    std::vector<std::uint64_t> seeds;
    for (const auto& part : split(spec, ',')) seeds.push_back(std::stoull(part));
    return seeds;
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    for (const auto& part : split(spec, ',')) grid.push_back(std::stod(part));
    return grid;
}

std::string default_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("FEARSIM_OUT_DIR")) return env;
    return "out";
}

int run_simulate(const ScenarioOptions& opts, const std::string& seeds_spec,
                 const std::string& out_flag, unsigned threads) {
    const ValidatedScenario sc = load_scenario(opts);
    const auto seeds = parse_seeds(seeds_spec, sc.config.seed);
    const std::string out_dir = default_out_dir(out_flag);

    const auto start = std::chrono::steady_clock::now();
    const fearsim::EnsembleResult ens = fearsim::run_ensemble(sc, seeds, threads);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fearsim::emit_outputs(sc.config, ens, out_dir, wall);
    std::cerr << "simulate: " << seeds.size() << " replication(s) in " << wall << "s -> "
              << out_dir << "\n";
    return 0;
}

int run_multiplier(const ScenarioOptions& opts, const std::string& seeds_spec,
                   const std::string& grid_spec, const std::vector<std::string>& sweep_specs,
                   const std::string& out_flag, unsigned threads) {
    const ValidatedScenario sc = load_scenario(opts);
    const auto seeds = parse_seeds(seeds_spec, sc.config.seed);
    const std::vector<double> grid =
        grid_spec.empty() ? fearsim::default_testing_grid() : parse_grid(grid_spec);
    const std::string out_dir = default_out_dir(out_flag);
    std::filesystem::create_directories(out_dir);

    std::vector<fearsim::SweepDimension> dims;
    for (const auto& spec : sweep_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw ScenarioError({"--sweep expects dim=v1,v2,..., got: " + spec});
        fearsim::SweepDimension dim;
        dim.name = spec.substr(0, eq);
        dim.values = parse_grid(spec.substr(eq + 1));
        dims.push_back(std::move(dim));
    }

    const auto start = std::chrono::steady_clock::now();
    std::ofstream mult(out_dir + "/multipliers.csv", std::ios::binary);
    std::ofstream summary(out_dir + "/curve_summary.csv", std::ios::binary);
    if (!mult || !summary) throw std::runtime_error("cannot write outputs under " + out_dir);
    if (dims.empty()) {
        const auto curve = fearsim::multiplier_curve(sc, grid, seeds, threads);
        fearsim::write_multipliers_rows(mult, curve, {}, true);
        fearsim::write_curve_summary_rows(summary, curve, {}, true);
    } else {
        // Long format: one block per technology grid point, the swept
        // dimension values leading each row.
        const auto points = fearsim::technology_sweep(sc, dims, grid, seeds, threads);
        for (std::size_t i = 0; i < points.size(); ++i) {
            fearsim::write_multipliers_rows(mult, points[i].curve, points[i].coords, i == 0);
            fearsim::write_curve_summary_rows(summary, points[i].curve, points[i].coords, i == 0);
        }
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto manifest = fearsim::make_manifest(sc.config, seeds, wall);
    manifest["grid"] = grid;
    // Conventional axes for plotting the curve; stored values are raw.
    manifest["display_hint"] = {{"level_axis", "log2"}, {"multiplier_axis", "sqrt"}};
    fearsim::write_manifest(out_dir + "/manifest.json", manifest);
    std::cerr << "multiplier: grid of " << grid.size() << " level(s) x " << seeds.size()
              << " seed(s) in " << wall << "s -> " << out_dir << "\n";
    return 0;
}

int run_validate_sir(double beta, double gamma, std::int64_t p0, std::int64_t days, double i0,
                     const std::string& seeds_spec, const std::string& out_flag,
                     unsigned threads) {
    const auto seeds = parse_seeds(seeds_spec, 1);
    const auto cmp = fearsim::compare_sir_limit(p0, beta, gamma, i0, days, seeds, threads);
    std::cout << "sup_error=" << fearsim::format_double(cmp.sup_error) << "\n";
    if (!out_flag.empty()) {
        std::filesystem::create_directories(out_flag);
        std::ofstream out(out_flag + "/sir_comparison.csv", std::ios::binary);
        out << "day,oracle_s,oracle_i,oracle_r,sim_s,sim_i,sim_r\n";
        for (std::size_t t = 0; t < cmp.oracle.size(); ++t)
            out << t << "," << fearsim::format_double(cmp.oracle[t].susceptible) << ","
                << fearsim::format_double(cmp.oracle[t].infected) << ","
                << fearsim::format_double(cmp.oracle[t].recovered) << ","
                << fearsim::format_double(cmp.simulated[t].susceptible) << ","
                << fearsim::format_double(cmp.simulated[t].infected) << ","
                << fearsim::format_double(cmp.simulated[t].recovered) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fearsim: stochastic two-disease epidemic and testing-policy simulator"};
    app.set_version_flag("--version", FEARSIM_VERSION);
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo ensemble of one scenario");
    ScenarioOptions sim_opts;
    add_scenario_options(simulate, sim_opts);
    std::string sim_seeds = "1";
    std::string sim_out;
    unsigned sim_threads = fearsim::default_threads();
    simulate->add_option("--seeds", sim_seeds, "Replication count or comma-separated seed list");
    simulate->add_option("--out", sim_out, "Output directory (default $FEARSIM_OUT_DIR or ./out)");
    simulate->add_option("--threads", sim_threads, "Worker threads");

    // multiplier
    auto* multiplier =
        app.add_subcommand("multiplier", "Estimate testing multipliers over a capacity grid");
    ScenarioOptions mult_opts;
    add_scenario_options(multiplier, mult_opts);
    std::string mult_seeds = "30";
    std::string mult_grid;
    std::string mult_out;
    std::vector<std::string> mult_sweeps;
    unsigned mult_threads = fearsim::default_threads();
    multiplier->add_option("--seeds", mult_seeds, "Replication count or comma-separated seed list");
    multiplier->add_option(
        "--grid", mult_grid,
        "Comma-separated testing levels; <1 means fraction of P0, >=1 absolute tests/day");
    multiplier->add_option("--sweep", mult_sweeps,
                           "Technology dimension to sweep, e.g. theta=0.5,0.9,1.0 (repeatable; "
                           "dims: alpha, c_t, d, theta, eps)");
    multiplier->add_option("--out", mult_out, "Output directory");
    multiplier->add_option("--threads", mult_threads, "Worker threads");

    // validate-sir
    auto* validate_sir = app.add_subcommand(
        "validate-sir", "Compare the restricted simulator against the deterministic recursion");
    double sir_beta = 0.30, sir_gamma = 1.0 / 14.0, sir_i0 = 5e-5;
    std::int64_t sir_p0 = 1000000, sir_days = 350;
    std::string sir_seeds = "20";
    std::string sir_out;
    unsigned sir_threads = fearsim::default_threads();
    validate_sir->add_option("--beta", sir_beta, "Transmission coefficient");
    validate_sir->add_option("--gamma", sir_gamma, "Recovery rate (reciprocal of whole days)");
    validate_sir->add_option("--p0", sir_p0, "Population size");
    validate_sir->add_option("--days", sir_days, "Horizon in days");
    validate_sir->add_option("--i0", sir_i0, "Initial infected fraction");
    validate_sir->add_option("--seeds", sir_seeds, "Replication count or seed list");
    validate_sir->add_option("--out", sir_out, "Optional directory for the comparison CSV");
    validate_sir->add_option("--threads", sir_threads, "Worker threads");

    // presets
    auto* presets = app.add_subcommand("presets", "List or show bundled scenario presets");
    auto* presets_list = presets->add_subcommand("list", "List preset names");
    auto* presets_show = presets->add_subcommand("show", "Print a preset as scenario JSON");
    std::string show_name;
    presets_show->add_option("name", show_name, "Preset name")->required();
    presets->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(sim_opts, sim_seeds, sim_out, sim_threads);
        if (multiplier->parsed())
            return run_multiplier(mult_opts, mult_seeds, mult_grid, mult_sweeps, mult_out,
                                  mult_threads);
        if (validate_sir->parsed())
            return run_validate_sir(sir_beta, sir_gamma, sir_p0, sir_days, sir_i0, sir_seeds,
                                    sir_out, sir_threads);
        if (presets->parsed()) {
            if (presets_list->parsed()) {
                for (const auto& name : fearsim::preset_names()) std::cout << name << "\n";
                return 0;
            }
            if (presets_show->parsed()) {
                std::cout << fearsim::scenario_to_string(fearsim::make_preset(show_name));
                return 0;
            }
        }
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fearsim::SimulationError& e) {
        std::cerr << "runtime invariant breach: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
