#include "aniso/config.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace aniso {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json canonical_polyhedral(const std::vector<Vec2>& vs) {
    ordered_json j;
    j["kind"] = "polyhedral";
    auto arr = ordered_json::array();
    for (Vec2 v : vs) arr.push_back({v.x, v.z});
    j["vertices"] = arr;
    return j;
}

}  // namespace

NormSpec parse_norm_spec(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError("norm spec must be an object with a string 'kind'");
    std::string kind = j["kind"];
    try {
        if (kind == "euclidean") {
            ordered_json c;
            c["kind"] = "euclidean";
            return {c, euclidean_norm()};
        }
        if (kind == "pnorm") {
            if (!j.contains("p")) throw ConfigError("pnorm spec needs 'p'");
            double p = j["p"].is_string() && j["p"] == "inf"
                           ? std::numeric_limits<double>::infinity()
                           : j["p"].get<double>();
            ordered_json c;
            c["kind"] = "pnorm";
            if (std::isinf(p))
                c["p"] = "inf";
            else
                c["p"] = p;
            return {c, pnorm(p)};
        }
        if (kind == "scaled") {
            if (!j.contains("lambda") || !j.contains("base"))
                throw ConfigError("scaled spec needs 'lambda' and 'base'");
            NormSpec base = parse_norm_spec(j["base"]);
            double lambda = j["lambda"].get<double>();
            ordered_json c;
            c["kind"] = "scaled";
            c["lambda"] = lambda;
            c["base"] = base.spec;
            return {c, scaled_norm(base.norm, lambda)};
        }
        if (kind == "polyhedral") {
            if (!j.contains("vertices") || !j["vertices"].is_array())
                throw ConfigError("polyhedral spec needs a 'vertices' array");
            std::vector<Vec2> vs;
            for (const auto& v : j["vertices"]) {
                if (!v.is_array() || v.size() != 2)
                    throw ConfigError("polyhedral vertices must be [x, z] pairs");
                vs.push_back({v[0].get<double>(), v[1].get<double>()});
            }
            PlanarNorm n = polyhedral_norm(vs);
            return {canonical_polyhedral(vs), n};
        }
        if (kind == "tabulated") {
            if (!j.contains("samples") || !j["samples"].is_array())
                throw ConfigError("tabulated spec needs a 'samples' array of [theta, radius]");
            std::vector<std::pair<double, double>> samples;
            ordered_json arr = ordered_json::array();
            for (const auto& s : j["samples"]) {
                if (!s.is_array() || s.size() != 2)
                    throw ConfigError("tabulated samples must be [theta, radius] pairs");
                samples.emplace_back(s[0].get<double>(), s[1].get<double>());
                arr.push_back({s[0].get<double>(), s[1].get<double>()});
            }
            ordered_json c;
            c["kind"] = "tabulated";
            c["samples"] = arr;
            return {c, tabulated_norm(std::move(samples))};
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid norm spec: ") + e.what());
    }
    throw ConfigError("unknown norm kind '" + kind + "'");
}

NormSpec parse_norm_arg(const std::string& arg) {
    if (arg.empty()) throw ConfigError("empty norm argument");
    if (arg.front() == '{') {
        json j;
        try {
            j = json::parse(arg);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("norm argument is not valid JSON: ") + e.what());
        }
        return parse_norm_spec(j);
    }
    if (arg == "euclidean" || arg == "eucl") {
        ordered_json c;
        c["kind"] = "euclidean";
        return {c, euclidean_norm()};
    }
    if (arg == "l1")
        return {canonical_polyhedral({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}), l1_norm()};
    if (arg == "linf")
        return {canonical_polyhedral({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}), linf_norm()};
    if (arg.rfind("pnorm:", 0) == 0) {
        json j;
        j["kind"] = "pnorm";
        std::string p = arg.substr(6);
        if (p == "inf")
            j["p"] = "inf";
        else {
            try {
                j["p"] = std::stod(p);
            } catch (const std::exception&) {
                throw ConfigError("bad pnorm shorthand '" + arg + "'");
            }
        }
        return parse_norm_spec(j);
    }
    throw ConfigError("unknown norm '" + arg +
                      "' (use euclidean, l1, linf, pnorm:<p> or inline JSON)");
}

XiSpec parse_xi_arg(const std::string& arg, int N) {
    if (arg == "euclidean" || arg == "eucl") {
        ordered_json c;
        c["kind"] = "euclidean";
        return {c, XiDescriptor::Euclidean(N)};
    }
    if (N != 2) throw ConfigError("non-euclidean xi requires N = 2");
    NormSpec s = parse_norm_arg(arg);
    return {s.spec, XiDescriptor::Planar(s.norm)};
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ConfigError("bad numeric list entry '" + cell + "'");
        }
    }
    return out;
}

}  // namespace aniso
