#pragma once

// CSV and manifest emission. The column schema is defined once and shared by
// the per-replication files and the banded summary, so the two stay in sync.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fearsim/ensemble.hpp"
#include "fearsim/scenario_json.hpp"
#include "fearsim/simulation.hpp"
#include "fearsim/util.hpp"
#include "fearsim/version.hpp"

namespace fearsim {

struct ColumnDef {
    std::string name;
    std::function<double(const DailyRow&)> get;
};

inline std::vector<ColumnDef> column_schema(std::size_t n_groups) {
    std::vector<ColumnDef> cols;
    auto add = [&](std::string name, std::function<double(const DailyRow&)> get) {
        cols.push_back({std::move(name), std::move(get)});
    };
    auto i64 = [](std::int64_t v) { return static_cast<double>(v); };

    add("latent_new", [=](const DailyRow& r) { return i64(r.latent_new); });
    add("latent_cases", [=](const DailyRow& r) { return i64(r.latent_cases); });
    add("latent_active", [=](const DailyRow& r) { return i64(r.latent_active); });
    add("incubating", [=](const DailyRow& r) { return i64(r.incubating); });
    add("severe_epi", [=](const DailyRow& r) { return i64(r.severe_epi); });
    add("mild_epi", [=](const DailyRow& r) { return i64(r.mild_epi); });
    add("asymp_epi", [=](const DailyRow& r) { return i64(r.asymp_epi); });
    add("latent_deaths", [=](const DailyRow& r) { return i64(r.latent_deaths); });
    add("latent_recovered", [=](const DailyRow& r) { return i64(r.latent_recovered); });
    add("susceptible", [=](const DailyRow& r) { return i64(r.susceptible); });
    add("conf_new", [=](const DailyRow& r) { return i64(r.conf_new); });
    add("conf_cases", [=](const DailyRow& r) { return i64(r.conf_cases); });
    add("conf_active", [=](const DailyRow& r) { return i64(r.conf_active); });
    add("conf_severe", [=](const DailyRow& r) { return i64(r.conf_severe); });
    add("conf_deaths", [=](const DailyRow& r) { return i64(r.conf_deaths); });
    add("tests", [=](const DailyRow& r) { return i64(r.tests); });
    add("positives", [=](const DailyRow& r) { return i64(r.positives); });
    add("positivity", [](const DailyRow& r) { return r.positivity; });
    add("detected_cases", [=](const DailyRow& r) { return i64(r.detected_cases); });
    add("detected_active", [=](const DailyRow& r) { return i64(r.detected_active); });
    add("reported_deaths", [=](const DailyRow& r) { return i64(r.reported_deaths); });
    add("chi", [](const DailyRow& r) { return r.chi; });
    add("cfr", [](const DailyRow& r) { return r.cfr; });
    add("perceived_ir", [](const DailyRow& r) { return r.perceived_ir; });
    add("perceived_lethality", [](const DailyRow& r) { return r.perceived_lethality; });
    add("ascertainment_bias", [](const DailyRow& r) { return r.ascertainment_bias; });
    add("avg_labor", [](const DailyRow& r) { return r.avg_labor; });
    add("avg_leisure", [](const DailyRow& r) { return r.avg_leisure; });
    add("contact_rate", [](const DailyRow& r) { return r.contact; });
    add("gdp", [](const DailyRow& r) { return r.fiscal.gdp; });
    add("revenue", [](const DailyRow& r) { return r.fiscal.revenue; });
    add("exp_testing", [](const DailyRow& r) { return r.fiscal.exp_testing; });
    add("exp_treatment", [](const DailyRow& r) { return r.fiscal.exp_treatment; });
    add("deficit", [](const DailyRow& r) { return r.fiscal.deficit; });
    add("deficit_deviation", [](const DailyRow& r) { return r.fiscal.deficit_deviation; });
    add("cum_surplus", [](const DailyRow& r) { return r.fiscal.cum_surplus; });
    add("alive", [=](const DailyRow& r) { return i64(r.alive); });
    add("severe_total", [=](const DailyRow& r) { return i64(r.severe_total); });

    if (n_groups == 2) {
        const char* suffix[2] = {"_y", "_o"};
        for (std::size_t g = 0; g < 2; ++g) {
            const std::string s = suffix[g];
            add("alive" + s, [=](const DailyRow& r) { return i64(r.groups[g].alive); });
            add("latent_cases" + s,
                [=](const DailyRow& r) { return i64(r.groups[g].latent_cases); });
            add("latent_active" + s,
                [=](const DailyRow& r) { return i64(r.groups[g].latent_active); });
            add("latent_deaths" + s,
                [=](const DailyRow& r) { return i64(r.groups[g].latent_deaths); });
            add("detected_cases" + s,
                [=](const DailyRow& r) { return i64(r.groups[g].detected_cases); });
            add("detected_active" + s,
                [=](const DailyRow& r) { return i64(r.groups[g].detected_active); });
            add("reported_deaths" + s,
                [=](const DailyRow& r) { return i64(r.groups[g].reported_deaths); });
            add("chi" + s, [=](const DailyRow& r) { return r.groups[g].chi; });
            add("cfr" + s, [=](const DailyRow& r) { return r.groups[g].cfr; });
            add("avg_labor" + s, [=](const DailyRow& r) { return r.groups[g].avg_labor; });
            add("avg_leisure" + s, [=](const DailyRow& r) { return r.groups[g].avg_leisure; });
            add("gdp" + s, [=](const DailyRow& r) { return r.groups[g].gdp; });
        }
        add("rho_yy", [](const DailyRow& r) { return r.rho[0][0]; });
        add("rho_yo", [](const DailyRow& r) { return r.rho[0][1]; });
        add("rho_oy", [](const DailyRow& r) { return r.rho[1][0]; });
        add("rho_oo", [](const DailyRow& r) { return r.rho[1][1]; });
    }
    return cols;
}

inline void write_replication_csv(const std::string& path, const ReplicationOutput& rep,
                                  std::size_t n_groups) {
    const auto cols = column_schema(n_groups);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "day";
    for (const auto& c : cols) out << "," << c.name;
    out << "\n";
    for (const auto& row : rep.days) {
        out << row.day;
        for (const auto& c : cols) out << "," << format_double(c.get(row));
        out << "\n";
    }
}

inline void write_summary_csv(const std::string& path, const EnsembleResult& ens,
                              std::size_t n_groups) {
    if (ens.replications.empty()) throw std::runtime_error("empty ensemble: nothing to summarize");
    const auto cols = column_schema(n_groups);
    std::vector<SeriesBand> bands;
    bands.reserve(cols.size());
    for (const auto& c : cols)
        bands.push_back(summarize_series(ens.replications, [&](const DailyRow& r) { return c.get(r); }));

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "day";
    for (const auto& c : cols)
        out << "," << c.name << "_mean," << c.name << "_sd," << c.name << "_p16," << c.name
            << "_p84";
    out << "\n";
    const std::size_t days = ens.replications.front().days.size();
    for (std::size_t t = 0; t < days; ++t) {
        out << ens.replications.front().days[t].day;
        for (std::size_t c = 0; c < cols.size(); ++c)
            out << "," << format_double(bands[c].mean[t]) << "," << format_double(bands[c].sd[t])
                << "," << format_double(bands[c].p16[t]) << "," << format_double(bands[c].p84[t]);
        out << "\n";
    }
}

// The run manifest: everything needed to reproduce the outputs byte for
// byte, plus informational timing. The timing block is not part of the
// reproducibility contract.
inline nlohmann::json make_manifest(const ScenarioConfig& config,
                                    const std::vector<std::uint64_t>& seeds,
                                    double wall_clock_seconds) {
    nlohmann::json manifest;
    manifest["version"] = FEARSIM_VERSION;
    manifest["scenario_hash"] = fnv1a_hash(to_json(config).dump());
    manifest["scenario"] = to_json(config);
    manifest["seeds"] = seeds;
    manifest["day_ordering"] =
        "progress,resolve,perceive,behave,produce,test,record+draw (v1)";
    manifest["rng"] = {
        {"engine", "xoshiro256** seeded by splitmix64 over (seed, purpose, key)"},
        {"streams",
         {"infection_count(day)", "infection_assign(day)", "disease_schedule(individual)",
          "confounding_count(day)", "confounding_assign(day)", "confounding_schedule(individual)",
          "test_selection(day)", "test_outcome(day)"}},
    };
    manifest["timing"] = {{"wall_clock_seconds", wall_clock_seconds}};
    return manifest;
}

inline void write_manifest(const std::string& path, const nlohmann::json& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << manifest.dump(2) << "\n";
}

// Writes per-replication CSVs, the banded summary and the manifest.
inline void emit_outputs(const ScenarioConfig& config, const EnsembleResult& ens,
                         const std::string& out_dir, double wall_clock_seconds) {
    if (ens.replications.empty())
        throw std::runtime_error("empty ensemble: refusing to write partial outputs");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const std::size_t n_groups = ens.replications.front().days.front().groups.size();
    for (std::size_t i = 0; i < ens.replications.size(); ++i) {
        const std::string path =
            (fs::path(out_dir) / ("rep_" + std::to_string(ens.seeds[i]) + ".csv")).string();
        write_replication_csv(path, ens.replications[i], n_groups);
    }
    write_summary_csv((fs::path(out_dir) / "summary.csv").string(), ens, n_groups);
    write_manifest((fs::path(out_dir) / "manifest.json").string(),
                   make_manifest(config, ens.seeds, wall_clock_seconds));
}

} // namespace fearsim
