// JSON norm specifications and the run configuration consumed by the CLI.
#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aniso/norm.hpp"
#include "aniso/xi.hpp"

namespace aniso {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NormSpec {
    nlohmann::ordered_json spec;  // canonical JSON form, recorded in run.json
    PlanarNorm norm;
};

// {"kind": "euclidean" | "pnorm" | "scaled" | "polyhedral" | "tabulated", ...}
NormSpec parse_norm_spec(const nlohmann::json& j);

// Accepts inline JSON or the shorthands euclidean, l1, linf, pnorm:<p>.
NormSpec parse_norm_arg(const std::string& arg);

struct XiSpec {
    nlohmann::ordered_json spec;
    XiDescriptor xi;
};

// "euclidean" or a planar norm spec (the latter requires N = 2).
XiSpec parse_xi_arg(const std::string& arg, int N);

struct RunConfig {
    std::string command;  // grim | bowl | crystal-grim | crystal-bowl | dual | verify
    std::string phi, psi;
    std::string F = "euclidean", G = "euclidean", xi = "euclidean";
    std::string bowl_case;  // cylinder | cone
    std::string wulff;      // square | hexagon | octagon (crystal-grim)
    std::string norm;       // dual command
    double c = 1.0;
    double tol = 1e-10;
    double rmax = 100.0;
    double smooth_eps = 0.0;
    std::vector<double> approx_eps;
    std::vector<double> sweep_c;
    int N = 2;
    int samples = 360;
    std::filesystem::path out = "out";
    std::filesystem::path in;
};

std::vector<double> parse_double_list(const std::string& csv);

}  // namespace aniso
