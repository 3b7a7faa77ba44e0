#pragma once

// Scenario files are UTF-8 JSON whose keys mirror the parameter structs.
// Parsing is strict: unknown keys are rejected, day-valued parameters must be
// JSON integers, and every violation is reported with its field path.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fearsim/params.hpp"

namespace fearsim {

namespace detail {

using nlohmann::json;

inline void require_keys(const json& j, const std::string& path,
                         const std::vector<std::string>& allowed) {
    if (!j.is_object()) throw ScenarioError({path + ": expected an object"});
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const auto& k : allowed)
            if (it.key() == k) known = true;
        if (!known) throw ScenarioError({path + ": unknown key \"" + it.key() + "\""});
    }
}

inline const json& require(const json& j, const std::string& path, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw ScenarioError({path + "." + key + ": missing"});
    return *it;
}

inline double get_number(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_number()) throw ScenarioError({path + "." + key + ": expected a number"});
    return v.get<double>();
}

inline std::int64_t get_integer(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_number_integer())
        throw ScenarioError({path + "." + key + ": expected an integer (whole days/counts)"});
    return v.get<std::int64_t>();
}

inline std::string get_string(const json& j, const std::string& path, const std::string& key) {
    const json& v = require(j, path, key);
    if (!v.is_string()) throw ScenarioError({path + "." + key + ": expected a string"});
    return v.get<std::string>();
}

} // namespace detail

inline nlohmann::json to_json(const ScenarioConfig& c) {
    using nlohmann::json;
    json e = {{"beta", c.epidemic.beta},           {"s", c.epidemic.s},
              {"m", c.epidemic.m},                 {"a", c.epidemic.a},
              {"phi_s", c.epidemic.phi_s},         {"phi_m", c.epidemic.phi_m},
              {"phi_a", c.epidemic.phi_a},         {"p", c.epidemic.p},
              {"k_tilde", c.epidemic.k_tilde},     {"q_tilde", c.epidemic.q_tilde},
              {"c0_star", c.epidemic.c0_star}};
    if (c.epidemic.q_tilde_nonsevere) e["q_tilde_nonsevere"] = *c.epidemic.q_tilde_nonsevere;
    if (c.epidemic.lag_model == LagModel::geometric_sir) e["lag_model"] = "geometric-sir";

    json out = {
        {"p0", c.p0},
        {"t_horizon", c.t_horizon},
        {"epidemic", e},
        {"confounding",
         {{"omega_f", c.confounding.omega_f},
          {"sigma_f", c.confounding.sigma_f},
          {"s_f", c.confounding.s_f},
          {"phi_f", c.confounding.phi_f},
          {"k_f", c.confounding.k_f},
          {"q_f", c.confounding.q_f}}},
        {"economy",
         {{"n0", c.economy.n0},
          {"l0", c.economy.l0},
          {"a", c.economy.a},
          {"eps_n", c.economy.eps_n},
          {"eps_l", c.economy.eps_l},
          {"pi", c.economy.pi}}},
        {"government",
         {{"c_t", c.government.c_t},
          {"c_s", c.government.c_s},
          {"tau", c.government.tau},
          {"d", c.government.d},
          {"alpha", c.government.alpha},
          {"theta", c.government.theta},
          {"t_ns", c.government.t_ns},
          {"test_all_mild", c.government.test_all_mild}}},
        {"beliefs", c.beliefs == Beliefs::testing_data ? "testing-data" : "exogenous-learning"},
        {"info_release", c.info_release == InfoRelease::aggregate ? "aggregate" : "disaggregated"},
        {"seed", c.seed},
    };
    if (c.perceived_beta) out["perceived_beta"] = *c.perceived_beta;
    if (c.groups) {
        json gs = nlohmann::json::array();
        for (const auto& g : *c.groups)
            gs.push_back({{"id", group_name(g.id)},
                          {"share", g.share},
                          {"a", g.a},
                          {"phi_s", g.phi_s},
                          {"c0", g.c0}});
        out["groups"] = gs;
        json m = nlohmann::json::array();
        for (int r = 0; r < 2; ++r)
            m.push_back({c.contact_matrix->rho0[r][0], c.contact_matrix->rho0[r][1]});
        out["contact_matrix"] = m;
    }
    return out;
}

inline ScenarioConfig scenario_from_json(const nlohmann::json& j) {
    using detail::get_integer;
    using detail::get_number;
    using detail::get_string;
    using detail::require;
    using detail::require_keys;

    require_keys(j, "scenario",
                 {"p0", "t_horizon", "epidemic", "confounding", "economy", "government", "groups",
                  "contact_matrix", "beliefs", "info_release", "perceived_beta", "seed"});

    ScenarioConfig c;
    c.p0 = get_integer(j, "scenario", "p0");
    c.t_horizon = get_integer(j, "scenario", "t_horizon");

    const auto& e = require(j, "scenario", "epidemic");
    require_keys(e, "epidemic",
                 {"beta", "s", "m", "a", "phi_s", "phi_m", "phi_a", "p", "k_tilde", "q_tilde",
                  "q_tilde_nonsevere", "lag_model", "c0_star"});
    c.epidemic.beta = get_number(e, "epidemic", "beta");
    c.epidemic.s = get_number(e, "epidemic", "s");
    c.epidemic.m = get_number(e, "epidemic", "m");
    c.epidemic.a = get_number(e, "epidemic", "a");
    c.epidemic.phi_s = get_number(e, "epidemic", "phi_s");
    c.epidemic.phi_m = get_number(e, "epidemic", "phi_m");
    c.epidemic.phi_a = get_number(e, "epidemic", "phi_a");
    c.epidemic.p = get_integer(e, "epidemic", "p");
    c.epidemic.k_tilde = get_integer(e, "epidemic", "k_tilde");
    c.epidemic.q_tilde = get_integer(e, "epidemic", "q_tilde");
    c.epidemic.c0_star = get_integer(e, "epidemic", "c0_star");
    if (e.contains("q_tilde_nonsevere"))
        c.epidemic.q_tilde_nonsevere = get_integer(e, "epidemic", "q_tilde_nonsevere");
    if (e.contains("lag_model")) {
        const std::string lm = get_string(e, "epidemic", "lag_model");
        if (lm == "poisson")
            c.epidemic.lag_model = LagModel::poisson;
        else if (lm == "geometric-sir")
            c.epidemic.lag_model = LagModel::geometric_sir;
        else
            throw ScenarioError({"epidemic.lag_model: expected \"poisson\" or \"geometric-sir\""});
    }

    const auto& f = require(j, "scenario", "confounding");
    require_keys(f, "confounding", {"omega_f", "sigma_f", "s_f", "phi_f", "k_f", "q_f"});
    c.confounding.omega_f = get_number(f, "confounding", "omega_f");
    c.confounding.sigma_f = get_number(f, "confounding", "sigma_f");
    c.confounding.s_f = get_number(f, "confounding", "s_f");
    c.confounding.phi_f = get_number(f, "confounding", "phi_f");
    c.confounding.k_f = get_integer(f, "confounding", "k_f");
    c.confounding.q_f = get_integer(f, "confounding", "q_f");

    const auto& ec = require(j, "scenario", "economy");
    require_keys(ec, "economy", {"n0", "l0", "a", "eps_n", "eps_l", "pi"});
    c.economy.n0 = get_number(ec, "economy", "n0");
    c.economy.l0 = get_number(ec, "economy", "l0");
    c.economy.a = get_number(ec, "economy", "a");
    c.economy.eps_n = get_number(ec, "economy", "eps_n");
    c.economy.eps_l = get_number(ec, "economy", "eps_l");
    c.economy.pi = get_number(ec, "economy", "pi");

    const auto& g = require(j, "scenario", "government");
    require_keys(g, "government",
                 {"c_t", "c_s", "tau", "d", "alpha", "theta", "t_ns", "test_all_mild"});
    c.government.c_t = get_number(g, "government", "c_t");
    c.government.c_s = get_number(g, "government", "c_s");
    c.government.tau = get_number(g, "government", "tau");
    c.government.d = get_integer(g, "government", "d");
    c.government.alpha = get_number(g, "government", "alpha");
    c.government.theta = get_number(g, "government", "theta");
    c.government.t_ns = get_integer(g, "government", "t_ns");
    if (g.contains("test_all_mild")) {
        if (!g.at("test_all_mild").is_boolean())
            throw ScenarioError({"government.test_all_mild: expected a boolean"});
        c.government.test_all_mild = g.at("test_all_mild").get<bool>();
    }

    if (j.contains("groups")) {
        const auto& gs = j.at("groups");
        if (!gs.is_array()) throw ScenarioError({"groups: expected an array"});
        std::vector<GroupSpec> specs;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const std::string path = "groups[" + std::to_string(i) + "]";
            require_keys(gs[i], path, {"id", "share", "a", "phi_s", "c0"});
            GroupSpec spec;
            const std::string id = get_string(gs[i], path, "id");
            if (id == "young")
                spec.id = GroupId::young;
            else if (id == "old")
                spec.id = GroupId::old;
            else
                throw ScenarioError({path + ".id: expected \"young\" or \"old\""});
            spec.share = get_number(gs[i], path, "share");
            spec.a = get_number(gs[i], path, "a");
            spec.phi_s = get_number(gs[i], path, "phi_s");
            spec.c0 = get_integer(gs[i], path, "c0");
            specs.push_back(spec);
        }
        c.groups = std::move(specs);
    }
    if (j.contains("contact_matrix")) {
        const auto& m = j.at("contact_matrix");
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
            !m[1].is_array() || m[1].size() != 2)
            throw ScenarioError({"contact_matrix: expected a 2x2 array of numbers"});
        ContactMatrix cm;
        for (int r = 0; r < 2; ++r)
            for (int col = 0; col < 2; ++col) {
                if (!m[r][col].is_number())
                    throw ScenarioError({"contact_matrix: expected a 2x2 array of numbers"});
                cm.rho0[r][col] = m[r][col].get<double>();
            }
        c.contact_matrix = cm;
    }

    if (j.contains("beliefs")) {
        const std::string b = get_string(j, "scenario", "beliefs");
        if (b == "testing-data")
            c.beliefs = Beliefs::testing_data;
        else if (b == "exogenous-learning")
            c.beliefs = Beliefs::exogenous_learning;
        else
            throw ScenarioError({"beliefs: expected \"testing-data\" or \"exogenous-learning\""});
    }
    if (j.contains("info_release")) {
        const std::string ir = get_string(j, "scenario", "info_release");
        if (ir == "aggregate")
            c.info_release = InfoRelease::aggregate;
        else if (ir == "disaggregated")
            c.info_release = InfoRelease::disaggregated;
        else
            throw ScenarioError({"info_release: expected \"aggregate\" or \"disaggregated\""});
    }
    if (j.contains("perceived_beta") && !j.at("perceived_beta").is_null())
        c.perceived_beta = get_number(j, "scenario", "perceived_beta");
    if (j.contains("seed")) {
        const auto& s = j.at("seed");
        if (!s.is_number_integer() && !s.is_number_unsigned())
            throw ScenarioError({"seed: expected an integer"});
        c.seed = s.get<std::uint64_t>();
    }
    return c;
}

inline ScenarioConfig parse_scenario(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError({std::string("JSON parse error: ") + e.what()});
    }
    return scenario_from_json(j);
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError({"cannot open scenario file: " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

inline std::string scenario_to_string(const ScenarioConfig& c) { return to_json(c).dump(2) + "\n"; }

} // namespace fearsim
