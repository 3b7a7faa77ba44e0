#pragma once

// Daily fiscal aggregation: production, tax revenue, testing and treatment
// expenditure, and the deficit both raw and as a deviation from the
// pre-epidemic steady state.

#include <cmath>
#include <cstdint>

#include "fearsim/params.hpp"

namespace fearsim {

struct FiscalDay {
    double gdp = 0.0;
    double revenue = 0.0;
    double exp_testing = 0.0;
    double exp_treatment = 0.0;
    double deficit = 0.0;           // expenditure minus revenue
    double deficit_deviation = 0.0; // deficit relative to the steady state
    double cum_surplus = 0.0;       // minus the running sum of deficits
};

inline FiscalDay daily_budget(double gdp, std::int64_t tests, std::int64_t severe_count,
                              const GovernmentParams& gov, double steady_state_deficit,
                              double previous_cum_surplus) {
    FiscalDay day;
    day.gdp = gdp;
    day.revenue = gov.tau * gdp;
    day.exp_testing = gov.c_t * static_cast<double>(tests);
    day.exp_treatment = gov.c_s * static_cast<double>(severe_count);
    day.deficit = day.exp_testing + day.exp_treatment - day.revenue;
    day.deficit_deviation = day.deficit - steady_state_deficit;
    day.cum_surplus = previous_cum_surplus - day.deficit;
    return day;
}

// Pre-epidemic steady state: full-employment revenue, and expenditure
// covering the stationary flow of severe confounding cases (their treatment
// plus the recurring tests they trigger, one every d+1 days while severe).
inline double steady_state_deficit(const ValidatedScenario& sc) {
    const auto& c = sc.config;
    double revenue = 0.0;
    for (std::size_t g = 0; g < sc.group_count(); ++g)
        revenue += sc.norm_groups[g].a * c.economy.n0 * static_cast<double>(sc.group_pop[g]);
    revenue *= c.government.tau;

    const auto& f = c.confounding;
    const double inflow =
        f.omega_f * static_cast<double>(c.p0) / static_cast<double>(c.t_horizon) * f.s_f;
    const double mean_days = (1.0 - f.phi_f) * static_cast<double>(f.q_f) +
                             f.phi_f * static_cast<double>(f.k_f);
    const double cadence = static_cast<double>(c.government.d + 1);
    const double tests_per_case =
        (1.0 - f.phi_f) * std::ceil(static_cast<double>(f.q_f) / cadence) +
        f.phi_f * std::ceil(static_cast<double>(f.k_f) / cadence);
    const double expenditure =
        c.government.c_s * inflow * mean_days + c.government.c_t * inflow * tests_per_case;
    return expenditure - revenue;
}

} // namespace fearsim
