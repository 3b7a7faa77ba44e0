#pragma once

// Dotted-path scenario overrides (`government.theta=0.5`, `groups.1.phi_s=0.01`).
// Overrides are applied to the scenario JSON before validation, so a bad value
// fails with the same field-path diagnostics as a bad file.

#include <string>
#include <vector>

#include <json.hpp>

#include "fearsim/params.hpp"
#include "fearsim/scenario_json.hpp"

namespace fearsim {

inline void apply_override(nlohmann::json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ScenarioError({"override expects key=value, got: " + assignment});
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    nlohmann::json value;
    try {
        value = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
        value = raw; // unquoted strings, e.g. beliefs=exogenous-learning
    }

    std::vector<std::string> keys;
    std::string part;
    for (const char ch : path) {
        if (ch == '.') {
            keys.push_back(part);
            part.clear();
        } else {
            part.push_back(ch);
        }
    }
    keys.push_back(part);
    if (keys.empty() || keys.front().empty()) throw ScenarioError({"override: empty key path"});

    nlohmann::json* node = &j;
    for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
        const std::string& key = keys[i];
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(key);
            } catch (const std::exception&) {
                throw ScenarioError({"override: expected an array index in " + path});
            }
            if (idx >= node->size())
                throw ScenarioError({"override: index out of range in " + path});
            node = &(*node)[idx];
        } else {
            if (!node->contains(key)) (*node)[key] = nlohmann::json::object();
            node = &(*node)[key];
        }
    }
    if (node->is_array()) {
        std::size_t idx = 0;
        try {
            idx = std::stoul(keys.back());
        } catch (const std::exception&) {
            throw ScenarioError({"override: expected an array index in " + path});
        }
        if (idx >= node->size()) throw ScenarioError({"override: index out of range in " + path});
        (*node)[idx] = value;
    } else {
        (*node)[keys.back()] = value;
    }
}

// Applies overrides to a config and revalidates.
inline ValidatedScenario with_overrides(const ScenarioConfig& base,
                                        const std::vector<std::string>& overrides) {
    nlohmann::json j = to_json(base);
    for (const auto& assignment : overrides) apply_override(j, assignment);
    return validate(scenario_from_json(j));
}

} // namespace fearsim
