#pragma once

// The experiment harness: testing-multiplier curves over a grid of mandated
// daily capacities (paired against the zero-mandate baseline with common
// random numbers), technology sweeps, and the deterministic compartmental
// recursion used to validate the restricted simulator.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fearsim/ensemble.hpp"
#include "fearsim/params.hpp"
#include "fearsim/presets.hpp"
#include "fearsim/simulation.hpp"
#include "fearsim/util.hpp"

namespace fearsim {

// Cumulative output gained per unit of extra cumulative testing expenditure,
// relative to the zero-mandate baseline. Undefined when the policy did not
// actually raise testing expenditure.
inline std::optional<double> gdp_multiplier(double y_t, double y_0, double e_t, double e_0) {
    if (!(e_t > e_0)) return std::nullopt;
    return (y_t - y_0) / (e_t - e_0);
}

// Cumulative budget-surplus change per unit of extra testing expenditure.
// 0 means testing fully repays itself; above -1 it partially does.
inline std::optional<double> surplus_multiplier(double b_t, double b_0, double e_t, double e_0) {
    if (!(e_t > e_0)) return std::nullopt;
    return (b_t - b_0) / (e_t - e_0);
}

// Per-replication cumulative outcomes entering the multiplier.
struct PairedOutcome {
    double cum_gdp = 0.0;
    double cum_testing_cost = 0.0;
    double cum_surplus = 0.0;
    double total_infections = 0.0;
    double total_deaths = 0.0;
};

inline PairedOutcome reduce_outcome(const ReplicationOutput& rep) {
    PairedOutcome o;
    o.cum_gdp = rep.cum_gdp;
    o.cum_testing_cost = rep.cum_testing_cost;
    o.cum_surplus = rep.cum_surplus;
    o.total_infections = static_cast<double>(rep.total_epi_infections);
    o.total_deaths = static_cast<double>(rep.total_deaths);
    return o;
}

struct MultiplierLevel {
    std::int64_t t_ns = 0;       // mandated daily non-severe tests
    double level_fraction = 0.0; // t_ns relative to P0
    std::vector<std::optional<double>> gdp_mult;     // per seed
    std::vector<std::optional<double>> surplus_mult; // per seed
    std::vector<PairedOutcome> outcomes;             // per seed

    std::vector<double> defined(const std::vector<std::optional<double>>& v) const {
        std::vector<double> out;
        for (const auto& x : v)
            if (x) out.push_back(*x);
        return out;
    }
};

struct MultiplierCurve {
    std::vector<std::uint64_t> seeds;
    std::vector<PairedOutcome> baseline; // zero-mandate run per seed
    std::vector<MultiplierLevel> levels;
};

// Converts a grid entry to an absolute daily capacity: values below 1 are
// fractions of the initial population, values of 1 or more are absolute.
inline std::int64_t grid_level_to_t_ns(double level, std::int64_t p0) {
    if (level < 0.0) throw std::invalid_argument("testing grid levels must be >= 0");
    if (level < 1.0) return static_cast<std::int64_t>(std::llround(level * static_cast<double>(p0)));
    return static_cast<std::int64_t>(std::llround(level));
}

// Runs paired (level, 0) replications per seed. Seeds are shared across all
// levels, so disease randomness is common and only the testing streams (and
// the epidemic's response to them) differ.
inline MultiplierCurve multiplier_curve(const ValidatedScenario& sc,
                                        const std::vector<double>& grid,
                                        const std::vector<std::uint64_t>& seeds,
                                        unsigned threads) {
    MultiplierCurve curve;
    curve.seeds = seeds;

    std::vector<std::int64_t> capacities;
    for (const double level : grid) {
        const std::int64_t t_ns = grid_level_to_t_ns(level, sc.config.p0);
        if (t_ns > 0) capacities.push_back(t_ns);
    }

    // Task 0..seeds-1: baseline; afterwards one block per level.
    const std::size_t n_seeds = seeds.size();
    const std::size_t n_tasks = n_seeds * (capacities.size() + 1);
    std::vector<PairedOutcome> results(n_tasks);
    parallel_for(n_tasks, threads, [&](std::size_t task) {
        const std::size_t block = task / n_seeds;
        const std::size_t seed_idx = task % n_seeds;
        ScenarioConfig cfg = sc.config;
        cfg.government.t_ns = block == 0 ? 0 : capacities[block - 1];
        const ValidatedScenario run_sc = validate(cfg);
        results[task] = reduce_outcome(run_replication(run_sc, seeds[seed_idx]));
    });

    curve.baseline.assign(results.begin(), results.begin() + static_cast<std::ptrdiff_t>(n_seeds));
    for (std::size_t b = 0; b < capacities.size(); ++b) {
        MultiplierLevel level;
        level.t_ns = capacities[b];
        level.level_fraction =
            static_cast<double>(capacities[b]) / static_cast<double>(sc.config.p0);
        for (std::size_t i = 0; i < n_seeds; ++i) {
            const PairedOutcome& with = results[(b + 1) * n_seeds + i];
            const PairedOutcome& base = curve.baseline[i];
            level.outcomes.push_back(with);
            level.gdp_mult.push_back(gdp_multiplier(with.cum_gdp, base.cum_gdp,
                                                    with.cum_testing_cost,
                                                    base.cum_testing_cost));
            level.surplus_mult.push_back(surplus_multiplier(with.cum_surplus, base.cum_surplus,
                                                            with.cum_testing_cost,
                                                            base.cum_testing_cost));
        }
        curve.levels.push_back(std::move(level));
    }
    return curve;
}

inline const std::vector<double>& default_testing_grid() {
    static const std::vector<double> grid = {0.0, 0.005, 0.01, 0.02, 0.04, 0.08, 0.16};
    return grid;
}

// --- deterministic compartmental oracle ------------------------------------

struct SirPoint {
    double susceptible = 0.0;
    double infected = 0.0;
    double recovered = 0.0;
};

// The three-compartment recursion in fractions of the population. Serves as
// the analytic reference for the restricted simulator.
inline std::vector<SirPoint> sir_limit_oracle(double beta, double gamma, double x0, double i0,
                                              std::int64_t days) {
    if (x0 + i0 > 1.0 + 1e-12) throw std::invalid_argument("sir_limit_oracle: x0 + i0 > 1");
    std::vector<SirPoint> series;
    series.reserve(static_cast<std::size_t>(days) + 1);
    SirPoint p{x0, i0, 1.0 - x0 - i0};
    series.push_back(p);
    for (std::int64_t t = 0; t < days; ++t) {
        const double new_infections = beta * p.infected * p.susceptible;
        const double recoveries = gamma * p.infected;
        p.susceptible -= new_infections;
        p.infected += new_infections - recoveries;
        p.recovered += recoveries;
        series.push_back(p);
    }
    return series;
}

// Builds the restricted scenario matching the oracle. gamma must be the
// reciprocal of a whole number of days.
inline ValidatedScenario make_sir_limit_scenario(std::int64_t p0, double beta, double gamma,
                                                 double i0, std::int64_t days) {
    const double q = 1.0 / gamma;
    const auto q_days = static_cast<std::int64_t>(std::llround(q));
    if (q_days < 1 || std::abs(q - static_cast<double>(q_days)) > 1e-9)
        throw std::invalid_argument("gamma must equal 1/q for integer recovery days q");
    ScenarioConfig cfg = preset_sir_limit();
    cfg.p0 = p0;
    cfg.t_horizon = days;
    cfg.epidemic.beta = beta;
    cfg.epidemic.q_tilde = q_days;
    cfg.epidemic.c0_star = static_cast<std::int64_t>(std::llround(i0 * static_cast<double>(p0)));
    return validate(cfg);
}

struct SirComparison {
    std::vector<SirPoint> oracle;
    std::vector<SirPoint> simulated; // ensemble mean fractions
    double sup_error = 0.0;
};

inline SirComparison compare_sir_limit(std::int64_t p0, double beta, double gamma, double i0,
                                       std::int64_t days, const std::vector<std::uint64_t>& seeds,
                                       unsigned threads) {
    const ValidatedScenario sc = make_sir_limit_scenario(p0, beta, gamma, i0, days);
    const double i0_actual = static_cast<double>(sc.config.epidemic.c0_star) /
                             static_cast<double>(sc.config.p0);
    SirComparison cmp;
    cmp.oracle = sir_limit_oracle(beta, gamma, 1.0 - i0_actual, i0_actual, days);

    const EnsembleResult ens = run_ensemble(sc, seeds, threads);
    const double pop = static_cast<double>(p0);
    cmp.simulated.assign(static_cast<std::size_t>(days) + 1, SirPoint{});
    for (const auto& rep : ens.replications) {
        for (std::size_t t = 0; t < rep.days.size(); ++t) {
            cmp.simulated[t].susceptible += static_cast<double>(rep.days[t].susceptible) / pop;
            cmp.simulated[t].infected += static_cast<double>(rep.days[t].latent_active) / pop;
            cmp.simulated[t].recovered += static_cast<double>(rep.days[t].latent_recovered) / pop;
        }
    }
    const double n = static_cast<double>(ens.replications.size());
    for (auto& p : cmp.simulated) {
        p.susceptible /= n;
        p.infected /= n;
        p.recovered /= n;
    }
    for (std::size_t t = 0; t < cmp.simulated.size(); ++t) {
        cmp.sup_error = std::max(cmp.sup_error,
                                 std::abs(cmp.simulated[t].susceptible - cmp.oracle[t].susceptible));
        cmp.sup_error =
            std::max(cmp.sup_error, std::abs(cmp.simulated[t].infected - cmp.oracle[t].infected));
        cmp.sup_error =
            std::max(cmp.sup_error, std::abs(cmp.simulated[t].recovered - cmp.oracle[t].recovered));
    }
    return cmp;
}

// --- technology sweep -------------------------------------------------------

struct SweepDimension {
    std::string name; // alpha | c_t | d | theta | eps
    std::vector<double> values;
};

struct SweepPoint {
    std::vector<std::pair<std::string, double>> coords;
    MultiplierCurve curve;
};

inline void apply_sweep_value(ScenarioConfig& cfg, const std::string& name, double value) {
    if (name == "alpha")
        cfg.government.alpha = value;
    else if (name == "c_t")
        cfg.government.c_t = value;
    else if (name == "d")
        cfg.government.d = static_cast<std::int64_t>(std::llround(value));
    else if (name == "theta")
        cfg.government.theta = value;
    else if (name == "eps") {
        cfg.economy.eps_n = value;
        cfg.economy.eps_l = value;
    } else
        throw std::invalid_argument("unknown sweep dimension: " + name +
                                    " (expected alpha, c_t, d, theta or eps)");
}

// One multiplier curve per point of the cartesian grid over the given
// technology dimensions.
inline std::vector<SweepPoint> technology_sweep(const ValidatedScenario& sc,
                                                const std::vector<SweepDimension>& dims,
                                                const std::vector<double>& grid,
                                                const std::vector<std::uint64_t>& seeds,
                                                unsigned threads) {
    std::vector<SweepPoint> points;
    std::vector<std::size_t> idx(dims.size(), 0);
    for (;;) {
        ScenarioConfig cfg = sc.config;
        SweepPoint point;
        for (std::size_t d = 0; d < dims.size(); ++d) {
            apply_sweep_value(cfg, dims[d].name, dims[d].values[idx[d]]);
            point.coords.emplace_back(dims[d].name, dims[d].values[idx[d]]);
        }
        point.curve = multiplier_curve(validate(cfg), grid, seeds, threads);
        points.push_back(std::move(point));

        // advance the cartesian index
        std::size_t d = 0;
        for (; d < dims.size(); ++d) {
            if (++idx[d] < dims[d].values.size()) break;
            idx[d] = 0;
        }
        if (d == dims.size()) break;
    }
    return points;
}

// --- CSV emission ------------------------------------------------------------

using SweepCoordinates = std::vector<std::pair<std::string, double>>;

// Long-format per-seed multipliers. Undefined multipliers (no extra testing
// expenditure) are left as empty fields.
inline void write_multipliers_rows(std::ostream& out, const MultiplierCurve& curve,
                                   const SweepCoordinates& coords, bool header) {
    if (header) {
        for (const auto& coord : coords) out << coord.first << ",";
        out << "level,t_ns,seed,gdp_mult,surplus_mult\n";
    }
    for (const auto& level : curve.levels) {
        for (std::size_t i = 0; i < curve.seeds.size(); ++i) {
            for (const auto& coord : coords) out << format_double(coord.second) << ",";
            out << format_double(level.level_fraction) << "," << level.t_ns << ","
                << curve.seeds[i] << ",";
            if (level.gdp_mult[i]) out << format_double(*level.gdp_mult[i]);
            out << ",";
            if (level.surplus_mult[i]) out << format_double(*level.surplus_mult[i]);
            out << "\n";
        }
    }
}

inline void write_curve_summary_rows(std::ostream& out, const MultiplierCurve& curve,
                                     const SweepCoordinates& coords, bool header) {
    if (header) {
        for (const auto& coord : coords) out << coord.first << ",";
        out << "level,t_ns,n_defined,gdp_mult_mean,gdp_mult_p16,gdp_mult_p84,"
               "surplus_mult_mean,surplus_mult_p16,surplus_mult_p84,"
               "mean_total_infections,mean_total_deaths,mean_cum_gdp,mean_cum_testing_cost\n";
    }
    for (const auto& level : curve.levels) {
        std::vector<double> gdp = level.defined(level.gdp_mult);
        std::vector<double> surplus = level.defined(level.surplus_mult);
        std::vector<double> infections, deaths, gdps, costs;
        for (const auto& o : level.outcomes) {
            infections.push_back(o.total_infections);
            deaths.push_back(o.total_deaths);
            gdps.push_back(o.cum_gdp);
            costs.push_back(o.cum_testing_cost);
        }
        for (const auto& coord : coords) out << format_double(coord.second) << ",";
        out << format_double(level.level_fraction) << "," << level.t_ns << "," << gdp.size() << ","
            << format_double(mean_of(gdp)) << "," << format_double(percentile(gdp, 0.16)) << ","
            << format_double(percentile(gdp, 0.84)) << "," << format_double(mean_of(surplus))
            << "," << format_double(percentile(surplus, 0.16)) << ","
            << format_double(percentile(surplus, 0.84)) << "," << format_double(mean_of(infections))
            << "," << format_double(mean_of(deaths)) << "," << format_double(mean_of(gdps)) << ","
            << format_double(mean_of(costs)) << "\n";
    }
}

inline void write_multipliers_csv(const std::string& path, const MultiplierCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_multipliers_rows(out, curve, {}, true);
}

inline void write_curve_summary_csv(const std::string& path, const MultiplierCurve& curve) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_curve_summary_rows(out, curve, {}, true);
}

} // namespace fearsim
