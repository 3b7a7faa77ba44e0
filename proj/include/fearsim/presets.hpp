#pragma once

// Bundled scenario presets: the coronavirus-like baseline, the three
// alternative influenza-like diseases, the two-group SARS-CoV-2 calibration
// with its fatality-swapped variant, and the restricted compartmental-limit
// configuration used for numerical validation.

#include <string>
#include <vector>

#include "fearsim/params.hpp"

namespace fearsim {

inline ScenarioConfig preset_baseline() {
    ScenarioConfig c;
    c.p0 = 50000;
    c.t_horizon = 350;

    c.epidemic.beta = 0.275;
    c.epidemic.s = 0.30;
    c.epidemic.m = 0.40;
    c.epidemic.a = 0.30;
    c.epidemic.phi_s = 0.15;
    c.epidemic.phi_m = 0.0;
    c.epidemic.phi_a = 0.0;
    c.epidemic.p = 3;
    c.epidemic.k_tilde = 5;
    c.epidemic.q_tilde = 11;
    c.epidemic.c0_star = 50;

    c.confounding.omega_f = 0.20;
    c.confounding.sigma_f = 0.10;
    c.confounding.s_f = 0.10;
    c.confounding.phi_f = 0.02;
    c.confounding.k_f = 7;
    c.confounding.q_f = 7;

    c.economy.n0 = 1.0;
    c.economy.l0 = 1.0;
    c.economy.a = 175.0;
    c.economy.eps_n = 1000.0;
    c.economy.eps_l = 1000.0;
    c.economy.pi = 0.5;

    c.government.c_t = 25.0;
    c.government.c_s = 300.0;
    c.government.tau = 0.30;
    c.government.d = 1;
    c.government.alpha = 0.25;
    c.government.theta = 0.90;
    c.government.t_ns = 0;

    c.seed = 1;
    return c;
}

// Disease B: transmission too fast for moderate testing to contain.
inline ScenarioConfig preset_unstoppable() {
    ScenarioConfig c = preset_baseline();
    c.epidemic.beta = 0.475;
    return c;
}

// Disease C: little scope for testing to lower the perceived lethality.
inline ScenarioConfig preset_less_lethal() {
    ScenarioConfig c = preset_baseline();
    c.epidemic.phi_s = 0.01;
    return c;
}

// Disease D: longer infectious periods.
inline ScenarioConfig preset_never_ending() {
    ScenarioConfig c = preset_baseline();
    c.epidemic.k_tilde = 20;
    c.epidemic.q_tilde = 26;
    return c;
}

// Two-group U.S. SARS-CoV-2 calibration with a steep age gradient in severe
// fatality risk. Parameters not listed here carry over from the baseline.
inline ScenarioConfig preset_sars_cov_2() {
    ScenarioConfig c = preset_baseline();
    c.epidemic.beta = 0.20;
    c.epidemic.s = 0.3;
    c.epidemic.m = 0.3;
    c.epidemic.a = 0.4;
    c.epidemic.phi_s = 0.005; // young value; the old group overrides below
    c.epidemic.p = 7;
    c.epidemic.k_tilde = 10;
    c.epidemic.q_tilde = 10;            // severe: infectious 10 days past onset
    c.epidemic.q_tilde_nonsevere = 7;   // non-severe: infectious 14 days in total
    c.epidemic.c0_star = 50;
    c.economy.eps_n = 5000.0;
    c.economy.eps_l = 5000.0;

    GroupSpec young;
    young.id = GroupId::young;
    young.share = 0.835;
    young.a = 230.0;
    young.phi_s = 0.005;
    young.c0 = 42;
    GroupSpec old;
    old.id = GroupId::old;
    old.share = 0.165;
    old.a = 46.0;
    old.phi_s = 0.248;
    old.c0 = 8;
    c.groups = std::vector<GroupSpec>{young, old};
    ContactMatrix m;
    m.rho0 = {{{0.95, 0.05}, {0.76, 0.24}}};
    c.contact_matrix = m;
    return c;
}

// SARS-CoV-2 calibration with the severe fatality risks swapped across
// groups; the slower epidemic needs a longer horizon.
inline ScenarioConfig preset_pseudo_spanish() {
    ScenarioConfig c = preset_sars_cov_2();
    c.t_horizon = 900;
    c.epidemic.phi_s = 0.248;
    (*c.groups)[0].phi_s = 0.248;
    (*c.groups)[1].phi_s = 0.005;
    return c;
}

// Restricted configuration that reduces the simulator to the textbook
// three-compartment model: one symptomless deathless disease, memoryless
// recovery, no behavioral response, no confounding disease, no testing.
inline ScenarioConfig preset_sir_limit() {
    ScenarioConfig c = preset_baseline();
    c.p0 = 1000000;
    c.t_horizon = 350;
    c.epidemic.beta = 0.30;
    c.epidemic.s = 0.0;
    c.epidemic.m = 0.0;
    c.epidemic.a = 1.0;
    c.epidemic.phi_s = 0.0;
    c.epidemic.phi_m = 0.0;
    c.epidemic.phi_a = 0.0;
    c.epidemic.p = 1; // unused in geometric mode
    c.epidemic.k_tilde = 0;
    c.epidemic.q_tilde = 14; // recovery probability 1/14 per day
    c.epidemic.q_tilde_nonsevere.reset();
    c.epidemic.lag_model = LagModel::geometric_sir;
    c.epidemic.c0_star = 50;
    c.confounding.omega_f = 0.0;
    c.confounding.sigma_f = 0.0;
    c.economy.eps_n = 0.0;
    c.economy.eps_l = 0.0;
    c.government.t_ns = 0;
    return c;
}

inline std::vector<std::string> preset_names() {
    return {"baseline", "unstoppable", "less-lethal", "never-ending",
            "sars-cov-2", "pseudo-spanish", "sir-limit"};
}

inline ScenarioConfig make_preset(const std::string& name) {
    if (name == "baseline") return preset_baseline();
    if (name == "unstoppable") return preset_unstoppable();
    if (name == "less-lethal") return preset_less_lethal();
    if (name == "never-ending") return preset_never_ending();
    if (name == "sars-cov-2") return preset_sars_cov_2();
    if (name == "pseudo-spanish") return preset_pseudo_spanish();
    if (name == "sir-limit") return preset_sir_limit();
    throw ScenarioError({"unknown preset: " + name});
}

} // namespace fearsim
