#pragma once

// Risk perceptions built from reported testing data, and the reduced-form
// behavioral rules mapping them to labor, leisure and contact rates. All
// functions here are pure; the daily loop feeds them ledger snapshots.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fearsim/params.hpp"

namespace fearsim {

// Reported deaths over reported cumulative cases. Defined as 0 before the
// first detected case, so there is no fear before the first report.
inline double case_fatality_rate(std::int64_t deaths, std::int64_t cases) {
    if (deaths > cases) throw std::invalid_argument("case_fatality_rate: D > C");
    if (cases == 0) return 0.0;
    return static_cast<double>(deaths) / static_cast<double>(cases);
}

// beta times detected active infections per alive capita.
inline double perceived_infection_risk(double beta, std::int64_t detected_active,
                                       std::int64_t population) {
    if (population <= 0) throw std::invalid_argument("perceived_infection_risk: P must be > 0");
    return beta * static_cast<double>(detected_active) / static_cast<double>(population);
}

inline double perceived_death_risk(double lethality, double infection_risk) {
    return lethality * infection_risk;
}

// Exogenous-learning lethality: a convex blend of the case fatality rate and
// the true unconditional fatality risk whose weight grows linearly in time.
inline double alternative_lethality(double cfr, double phi_true, std::int64_t t,
                                    std::int64_t horizon) {
    const double lambda = static_cast<double>(t) / static_cast<double>(horizon);
    return (1.0 - lambda) * cfr + lambda * phi_true;
}

struct AscertainmentAdjustment {
    double estimated_cases = 0.0; // deaths / perceived lethality
    double bias = 1.0;            // estimated over detected cases
    double adjusted_actives = 0.0;
};

// Deaths pin down an estimate of total past cases; comparing it with the
// detected count gives a scale factor applied to detected actives. Bias is 1
// when there is nothing to scale by (no deaths or no cases yet).
inline AscertainmentAdjustment ascertainment_adjusted_actives(std::int64_t deaths,
                                                              std::int64_t cases,
                                                              std::int64_t detected_active,
                                                              double lethality) {
    AscertainmentAdjustment adj;
    adj.adjusted_actives = static_cast<double>(detected_active);
    if (deaths == 0 || cases == 0 || lethality <= 0.0) return adj;
    adj.estimated_cases = static_cast<double>(deaths) / lethality;
    adj.bias = adj.estimated_cases / static_cast<double>(cases);
    adj.adjusted_actives = static_cast<double>(detected_active) * adj.bias;
    return adj;
}

// Activity of an alive individual with no or mild symptoms.
inline double fear_adjusted_activity(double baseline, double chi, double elasticity) {
    return baseline * std::pow(1.0 + chi, -elasticity);
}

// Labor supply by health/isolation status. Severe symptomatics and the dead
// supply zero; the isolated supply the non-complied fraction.
inline double labor_supply(bool alive, bool severe, bool isolated, double chi,
                           const EconomyParams& econ, double theta) {
    if (!alive || severe) return 0.0;
    if (isolated) return (1.0 - theta) * econ.n0;
    return fear_adjusted_activity(econ.n0, chi, econ.eps_n);
}

inline double leisure(bool alive, bool severe, bool isolated, double chi,
                      const EconomyParams& econ, double theta) {
    if (!alive || severe) return 0.0;
    if (isolated) return (1.0 - theta) * econ.l0;
    return fear_adjusted_activity(econ.l0, chi, econ.eps_l);
}

// Contact rate: the work-share-weighted average of mean labor and leisure,
// normalized to one absent the epidemic.
inline double contact_rate(double avg_labor, double avg_leisure, double pi) {
    return pi * avg_labor + (1.0 - pi) * avg_leisure;
}

// Endogenous contact matrix: within-group entries scale with the group's own
// activity, cross-group entries with population-wide activity. The latter is
// the infection externality between groups.
inline std::array<std::array<double, 2>, 2>
endogenous_contact_matrix(const ContactMatrix& rho0, const std::vector<double>& group_activity,
                          double population_activity) {
    std::array<std::array<double, 2>, 2> rho{};
    const std::size_t n = group_activity.size();
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t h = 0; h < n; ++h)
            rho[g][h] = rho0.rho0[g][h] * (g == h ? group_activity[g] : population_activity);
    return rho;
}

// True latent infection risk for one group: transmission coefficient times
// the contact-weighted probability of meeting a non-isolated infected
// individual in each group. Detected active infections are suppressed at the
// isolation effectiveness rate. Both groups share the first group's
// endogenized cross-contact entry as the cross-exposure coefficient; the
// within-group entries are their own.
inline double group_infection_risk(std::size_t group,
                                   const std::array<std::array<double, 2>, 2>& rho,
                                   double beta, double theta,
                                   const std::vector<std::int64_t>& latent_active,
                                   const std::vector<std::int64_t>& detected_active,
                                   const std::vector<std::int64_t>& alive) {
    double risk = 0.0;
    for (std::size_t h = 0; h < latent_active.size(); ++h) {
        const double isolated = theta * static_cast<double>(detected_active[h]);
        const double denom = static_cast<double>(alive[h]) - isolated;
        if (denom <= 0.0) continue; // group fully detected: nobody left to meet
        const double numer = static_cast<double>(latent_active[h]) - isolated;
        const double weight = group == h ? rho[group][h] : rho[0][1];
        risk += weight * (numer > 0.0 ? numer / denom : 0.0);
    }
    risk *= beta;
    if (risk < 0.0) return 0.0;
    if (risk > 1.0) return 1.0;
    return risk;
}

// Homogeneous-population special case.
inline double true_infection_risk(double beta, double contact, std::int64_t latent_active,
                                  std::int64_t detected_active, std::int64_t population,
                                  double theta) {
    const double isolated = theta * static_cast<double>(detected_active);
    const double denom = static_cast<double>(population) - isolated;
    if (denom <= 0.0) throw std::invalid_argument("true_infection_risk: P - theta*I <= 0");
    const double numer = static_cast<double>(latent_active) - isolated;
    double risk = beta * contact * (numer > 0.0 ? numer / denom : 0.0);
    if (risk < 0.0) risk = 0.0;
    if (risk > 1.0) risk = 1.0;
    return risk;
}

} // namespace fearsim
