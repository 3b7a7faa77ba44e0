#pragma once

// The daily loop, run in a fixed causal order:
//   1. disease progression for both diseases (events due today)
//   2. resolution of test results administered d days ago; isolation updates
//   3. risk perceptions from the reported series
//   4. labor, leisure, activity averages and contact rates
//   5. production and the budget's revenue/treatment side
//   6. today's test selection and administration (testing cost finalized now)
//   7. aggregate recording, then the draws of tomorrow's infections
// Perceptions at day t therefore never see a test administered after t - d,
// and isolation takes effect the day a positive result returns.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fearsim/economy.hpp"
#include "fearsim/params.hpp"
#include "fearsim/perception.hpp"
#include "fearsim/population.hpp"
#include "fearsim/random.hpp"
#include "fearsim/testing.hpp"

namespace fearsim {

struct GroupDaily {
    std::int64_t alive = 0;
    std::int64_t latent_cases = 0;
    std::int64_t latent_active = 0;
    std::int64_t latent_deaths = 0;
    std::int64_t detected_cases = 0;
    std::int64_t detected_active = 0;
    std::int64_t reported_deaths = 0;
    double chi = 0.0;
    double cfr = 0.0;
    double avg_labor = 0.0;
    double avg_leisure = 0.0;
    double gdp = 0.0;
};

struct DailyRow {
    std::int32_t day = 0;
    // Latent epidemic series.
    std::int64_t latent_new = 0;
    std::int64_t latent_cases = 0;
    std::int64_t latent_active = 0;
    std::int64_t incubating = 0;
    std::int64_t severe_epi = 0;
    std::int64_t mild_epi = 0;
    std::int64_t asymp_epi = 0;
    std::int64_t latent_deaths = 0;
    std::int64_t latent_recovered = 0;
    std::int64_t susceptible = 0;
    // Confounding disease series.
    std::int64_t conf_new = 0;
    std::int64_t conf_cases = 0;
    std::int64_t conf_active = 0;
    std::int64_t conf_severe = 0;
    std::int64_t conf_deaths = 0;
    // Reported (testing) series.
    std::int64_t tests = 0;
    std::int64_t positives = 0;
    double positivity = 0.0;
    std::int64_t detected_cases = 0;
    std::int64_t detected_active = 0;
    std::int64_t reported_deaths = 0;
    // Perceptions.
    double chi = 0.0;
    double cfr = 0.0;
    double perceived_ir = 0.0;
    double perceived_lethality = 0.0;
    double ascertainment_bias = 1.0;
    // Economy.
    double avg_labor = 0.0;
    double avg_leisure = 0.0;
    double contact = 0.0;
    FiscalDay fiscal;
    // Population.
    std::int64_t alive = 0;
    std::int64_t severe_total = 0;
    // Group detail (young, old) when two groups are simulated.
    std::vector<GroupDaily> groups;
    std::array<std::array<double, 2>, 2> rho{{{0.0, 0.0}, {0.0, 0.0}}};
};

struct ReplicationOutput {
    std::uint64_t seed = 0;
    std::vector<DailyRow> days; // indexed by day, 0..T
    // Cumulative outcomes over days 1..T.
    double cum_gdp = 0.0;
    double cum_testing_cost = 0.0;
    double cum_surplus = 0.0; // minus the summed deficits
    std::int64_t total_epi_infections = 0;
    std::int64_t total_epi_deaths = 0;
    std::int64_t total_deaths = 0;
};

// One full replication: a deterministic function of (scenario, seed).
class Simulation {
  public:
    Simulation(const ValidatedScenario& scenario, std::uint64_t seed)
        : sc_(scenario), seed_(seed) {}

    ReplicationOutput run() {
        const auto& cfg = sc_.config;
        const auto horizon = static_cast<std::int32_t>(cfg.t_horizon);
        pop_.init(sc_, seed_);
        ledger_.init(horizon, cfg.government.d);
        ss_deficit_ = steady_state_deficit(sc_);

        ReplicationOutput out;
        out.seed = seed_;
        out.days.reserve(static_cast<std::size_t>(horizon) + 1);

        double cum_surplus = 0.0;
        for (std::int32_t t = 0; t <= horizon; ++t) {
            if (t > 0) pop_.advance_day(t); // step 1 (day 0 settles in init)
            ledger_.resolve_due(pop_, t);   // step 2
            const Perceptions perc = compute_perceptions(t);            // step 3
            const Activity act = compute_activity(perc);                // step 4
            const std::int64_t severe_total = pop_.severe_total();      // step 5
            const DailyTestStats tests =
                ledger_.administer_tests(pop_, cfg.government, seed_, t); // step 6
            const FiscalDay fiscal = daily_budget(act.gdp, tests.tests, severe_total,
                                                  cfg.government, ss_deficit_, cum_surplus);
            cum_surplus = fiscal.cum_surplus;

            out.days.push_back(record_day(t, perc, act, tests, fiscal, severe_total)); // step 7
            check_invariants(out.days.back());

            if (t >= 1) {
                out.cum_gdp += fiscal.gdp;
                out.cum_testing_cost += fiscal.exp_testing;
                out.cum_surplus -= fiscal.deficit;
            }

            if (t < horizon) draw_next_day(t, act);
        }

        const DailyRow& last = out.days.back();
        out.total_epi_infections = last.latent_cases;
        out.total_epi_deaths = last.latent_deaths;
        out.total_deaths = last.latent_deaths + last.conf_deaths;
        return out;
    }

    const PopulationState& population() const { return pop_; }

  private:
    struct Perceptions {
        std::vector<double> chi;      // per group
        double chi_agg = 0.0;
        std::vector<double> cfr;      // per group
        double cfr_agg = 0.0;
        double perceived_ir = 0.0;
        double lethality = 0.0;
        double bias = 1.0;
    };

    struct Activity {
        std::vector<double> labor_sum;   // per group
        std::vector<double> leisure_sum; // per group
        std::vector<double> avg_labor;
        std::vector<double> avg_leisure;
        std::vector<double> group_activity;
        double nbar = 0.0;
        double lbar = 0.0;
        double contact = 0.0;
        double gdp = 0.0;
        std::array<std::array<double, 2>, 2> rho{{{0.0, 0.0}, {0.0, 0.0}}};
    };

    Perceptions compute_perceptions(std::int32_t t) {
        const auto& cfg = sc_.config;
        const std::size_t n_groups = pop_.group_count();
        Perceptions p;
        p.chi.assign(n_groups, 0.0);
        p.cfr.assign(n_groups, 0.0);

        std::int64_t cases = 0, deaths = 0, active = 0;
        for (std::size_t g = 0; g < n_groups; ++g) {
            const auto& c = pop_.counts[g];
            cases += c.detected_cases;
            deaths += c.reported_deaths;
            active += c.detected_active;
            p.cfr[g] = case_fatality_rate(c.reported_deaths, c.detected_cases);
        }
        p.cfr_agg = case_fatality_rate(deaths, cases);
        const std::int64_t alive = pop_.alive_total();
        if (alive == 0) return p; // extinct world: no one left to perceive anything
        p.perceived_ir = perceived_infection_risk(sc_.perceived_beta(), active, alive);

        if (cfg.beliefs == Beliefs::exogenous_learning) {
            p.lethality = alternative_lethality(p.cfr_agg, sc_.phi, t, cfg.t_horizon);
            const auto adj = ascertainment_adjusted_actives(deaths, cases, active, p.lethality);
            p.bias = adj.bias;
            p.perceived_ir = sc_.perceived_beta() * adj.adjusted_actives / static_cast<double>(alive);
            p.chi_agg = perceived_death_risk(p.lethality, p.perceived_ir);
            for (std::size_t g = 0; g < n_groups; ++g) p.chi[g] = p.chi_agg;
            return p;
        }

        p.lethality = p.cfr_agg;
        p.chi_agg = perceived_death_risk(p.cfr_agg, p.perceived_ir);
        for (std::size_t g = 0; g < n_groups; ++g) {
            // The perceived infection risk is shared across groups; only the
            // case fatality rate is group-specific under disaggregated data.
            const double lethality =
                cfg.info_release == InfoRelease::disaggregated ? p.cfr[g] : p.cfr_agg;
            p.chi[g] = perceived_death_risk(lethality, p.perceived_ir);
        }
        return p;
    }

    Activity compute_activity(const Perceptions& perc) {
        const auto& cfg = sc_.config;
        const std::size_t n_groups = pop_.group_count();
        Activity act;
        act.labor_sum.assign(n_groups, 0.0);
        act.leisure_sum.assign(n_groups, 0.0);
        act.avg_labor.assign(n_groups, 0.0);
        act.avg_leisure.assign(n_groups, 0.0);
        act.group_activity.assign(n_groups, 0.0);

        double labor_total = 0.0, leisure_total = 0.0;
        std::int64_t alive_total = 0;
        for (std::size_t g = 0; g < n_groups; ++g) {
            const auto& c = pop_.counts[g];
            const std::int64_t severe = c.epi_severe + c.conf_severe;
            const std::int64_t isolated_nonsevere = c.detected_active - c.detected_active_severe;
            const std::int64_t unrestricted = c.alive - severe - isolated_nonsevere;

            const double n_fear = fear_adjusted_activity(cfg.economy.n0, perc.chi[g], cfg.economy.eps_n);
            const double l_fear = fear_adjusted_activity(cfg.economy.l0, perc.chi[g], cfg.economy.eps_l);
            const double n_iso = (1.0 - cfg.government.theta) * cfg.economy.n0;
            const double l_iso = (1.0 - cfg.government.theta) * cfg.economy.l0;

            act.labor_sum[g] = static_cast<double>(unrestricted) * n_fear +
                               static_cast<double>(isolated_nonsevere) * n_iso;
            act.leisure_sum[g] = static_cast<double>(unrestricted) * l_fear +
                                 static_cast<double>(isolated_nonsevere) * l_iso;
            act.avg_labor[g] = c.alive > 0 ? act.labor_sum[g] / static_cast<double>(c.alive) : 0.0;
            act.avg_leisure[g] =
                c.alive > 0 ? act.leisure_sum[g] / static_cast<double>(c.alive) : 0.0;
            act.group_activity[g] = contact_rate(act.avg_labor[g], act.avg_leisure[g], cfg.economy.pi);
            act.gdp += sc_.norm_groups[g].a * act.labor_sum[g];
            labor_total += act.labor_sum[g];
            leisure_total += act.leisure_sum[g];
            alive_total += c.alive;
        }
        act.nbar = alive_total > 0 ? labor_total / static_cast<double>(alive_total) : 0.0;
        act.lbar = alive_total > 0 ? leisure_total / static_cast<double>(alive_total) : 0.0;
        act.contact = contact_rate(act.nbar, act.lbar, cfg.economy.pi);
        act.rho = endogenous_contact_matrix(sc_.norm_contacts, act.group_activity, act.contact);
        return act;
    }

    // Step 7: the binomial epidemic draws (per group, at the group infection
    // risk built from today's contact matrix) and the confounding draws, both
    // materializing tomorrow. Epidemic draws come first; the confounding
    // draw is capped by whoever is still never-infected.
    void draw_next_day(std::int32_t t, const Activity& act) {
        const std::size_t n_groups = pop_.group_count();
        std::vector<std::int64_t> latent(n_groups), detected(n_groups), alive(n_groups);
        for (std::size_t g = 0; g < n_groups; ++g) {
            latent[g] = pop_.counts[g].epi_active;
            detected[g] = pop_.counts[g].detected_active;
            alive[g] = pop_.counts[g].alive;
        }
        std::vector<double> ir(n_groups, 0.0);
        for (std::size_t g = 0; g < n_groups; ++g)
            ir[g] = group_infection_risk(g, act.rho, sc_.config.epidemic.beta,
                                         sc_.config.government.theta, latent, detected, alive);
        pop_.draw_new_epidemic_infections(sc_, seed_, t, ir);
        pop_.draw_confounding_infections(sc_, seed_, t);
    }

    DailyRow record_day(std::int32_t t, const Perceptions& perc, const Activity& act,
                        const DailyTestStats& tests, const FiscalDay& fiscal,
                        std::int64_t severe_total) {
        DailyRow row;
        row.day = t;
        row.latent_new = pop_.new_epi_infections_at(t);
        row.conf_new = pop_.new_conf_infections_at(t);
        for (std::size_t g = 0; g < pop_.group_count(); ++g) {
            const auto& c = pop_.counts[g];
            row.latent_cases += c.epi_cases;
            row.latent_active += c.epi_active;
            row.incubating += c.epi_incubating;
            row.severe_epi += c.epi_severe;
            row.mild_epi += c.epi_mild;
            row.asymp_epi += c.epi_asymp;
            row.latent_deaths += c.epi_deaths;
            row.latent_recovered += c.epi_recovered;
            row.susceptible += c.never_infected;
            row.conf_cases += c.conf_cases;
            row.conf_active += c.conf_active;
            row.conf_severe += c.conf_severe;
            row.conf_deaths += c.conf_deaths;
            row.detected_cases += c.detected_cases;
            row.detected_active += c.detected_active;
            row.reported_deaths += c.reported_deaths;
            row.alive += c.alive;

            GroupDaily gd;
            gd.alive = c.alive;
            gd.latent_cases = c.epi_cases;
            gd.latent_active = c.epi_active;
            gd.latent_deaths = c.epi_deaths;
            gd.detected_cases = c.detected_cases;
            gd.detected_active = c.detected_active;
            gd.reported_deaths = c.reported_deaths;
            gd.chi = perc.chi[g];
            gd.cfr = perc.cfr[g];
            gd.avg_labor = act.avg_labor[g];
            gd.avg_leisure = act.avg_leisure[g];
            gd.gdp = sc_.norm_groups[g].a * act.labor_sum[g];
            row.groups.push_back(gd);
        }
        row.tests = tests.tests;
        row.positives = tests.positives;
        row.positivity =
            tests.tests > 0 ? static_cast<double>(tests.positives) / static_cast<double>(tests.tests)
                            : 0.0;
        row.chi = perc.chi_agg;
        row.cfr = perc.cfr_agg;
        row.perceived_ir = perc.perceived_ir;
        row.perceived_lethality = perc.lethality;
        row.ascertainment_bias = perc.bias;
        row.avg_labor = act.nbar;
        row.avg_leisure = act.lbar;
        row.contact = act.contact;
        row.fiscal = fiscal;
        row.severe_total = severe_total;
        row.rho = act.rho;
        return row;
    }

    void check_invariants(const DailyRow& row) const {
        const auto fail = [&](const std::string& what) {
            throw SimulationError("invariant breach at day " + std::to_string(row.day) + ": " +
                                  what);
        };
        const std::int64_t p0 = sc_.config.p0;
        if (row.susceptible + row.latent_cases + row.conf_cases != p0)
            fail("population conservation (susceptible + ever-epidemic + ever-confounding != P0)");
        if (row.latent_active !=
            row.latent_cases - row.latent_recovered - row.latent_deaths)
            fail("latent actives identity");
        if (row.latent_active != row.incubating + row.severe_epi + row.mild_epi + row.asymp_epi)
            fail("active composition identity");
        if (row.detected_cases > row.latent_cases) fail("reported cases exceed latent");
        if (row.detected_active > row.latent_active) fail("reported actives exceed latent");
        if (row.reported_deaths > row.latent_deaths) fail("reported deaths exceed latent");
        if (row.alive != p0 - row.latent_deaths - row.conf_deaths) fail("alive bookkeeping");
        const double identity = row.fiscal.exp_testing + row.fiscal.exp_treatment -
                                row.fiscal.revenue - row.fiscal.deficit;
        if (std::abs(identity) > 1e-9 * (1.0 + std::abs(row.fiscal.deficit)))
            fail("budget accounting identity");
    }

    ValidatedScenario sc_;
    std::uint64_t seed_;
    PopulationState pop_;
    DetectionLedger ledger_;
    double ss_deficit_ = 0.0;
};

inline ReplicationOutput run_replication(const ValidatedScenario& sc, std::uint64_t seed) {
    Simulation sim(sc, seed);
    return sim.run();
}

} // namespace fearsim
