// Check results collected by the CLI pipelines and the verify command.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace aniso {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0;
    double tolerance = 0;
    std::string detail;
};

struct Report {
    std::vector<CheckResult> checks;

    void add(std::string name, bool pass, double measured, double tolerance,
             std::string detail = {}) {
        checks.push_back({std::move(name), pass, measured, tolerance, std::move(detail)});
    }

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json j;
            j["name"] = c.name;
            j["pass"] = c.pass;
            j["measured"] = c.measured;
            j["tolerance"] = c.tolerance;
            if (!c.detail.empty()) j["detail"] = c.detail;
            arr.push_back(j);
        }
        return arr;
    }
};

}  // namespace aniso
