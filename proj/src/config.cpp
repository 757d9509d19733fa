#include "wedgeflow/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wedge {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::vector<double> grid_field(const nlohmann::json& j, const char* key, double fallback) {
    if (!j.contains(key)) return {fallback};
    const auto& v = j.at(key);
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) {
        std::vector<double> out = v.get<std::vector<double>>();
        if (out.empty()) {
            throw ConfigError(std::string("sweep grid '") + key + "' is empty");
        }
        if (!std::is_sorted(out.begin(), out.end())) {
            throw ConfigError(std::string("sweep grid '") + key + "' must be sorted");
        }
        return out;
    }
    throw ConfigError(std::string("field '") + key + "' must be a number or array");
}

} // namespace

void RunConfig::validate() const {
    if (!(gamma > 1.0)) throw ConfigError("gas.gamma must exceed 1");
    if (!(rho1 > rho0) || !(rho0 > 0.0)) throw ConfigError("require gas.rho1 > gas.rho0 > 0");
    if (sigma0_grid.empty() || delta_grid.empty()) {
        throw ConfigError("wedge.sigma0 / wedge.delta must be nonempty");
    }
    for (double s : sigma0_grid) {
        if (!(s > 0.0)) throw ConfigError("wedge.sigma0 entries must be positive");
    }
    for (double d : delta_grid) {
        for (double s : sigma0_grid) {
            if (std::abs(d) > s) {
                throw ConfigError("wedge.delta exceeds sigma0: |delta| <= sigma0 required");
            }
        }
    }
    if (resolution < 50) throw ConfigError("solver.resolution too small");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line/column for the diagnostic
        size_t line = 1, col = 1;
        for (size_t i = 0; i < std::min(text.size(), size_t(e.byte)); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": " << e.what();
        throw ConfigError(os.str());
    }

    RunConfig rc;
    try {
        if (j.contains("gas")) {
            const auto& g = j.at("gas");
            rc.gamma = g.value("gamma", rc.gamma);
            rc.rho0 = g.value("rho0", rc.rho0);
            rc.rho1 = g.value("rho1", rc.rho1);
        }
        if (j.contains("wedge")) {
            const auto& w = j.at("wedge");
            rc.sigma0_grid = grid_field(w, "sigma0", 0.01);
            rc.delta_grid = grid_field(w, "delta", 0.0);
        } else {
            rc.sigma0_grid = {0.01};
            rc.delta_grid = {0.0};
        }
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            rc.resolution = s.value("resolution", rc.resolution);
            rc.tol = s.value("tol", rc.tol);
            rc.eps_ell = s.value("eps_ell", rc.eps_ell);
            rc.max_picard = s.value("max_picard", rc.max_picard);
            rc.max_outer = s.value("max_outer", rc.max_outer);
        }
        if (j.contains("outputs")) {
            const auto& o = j.at("outputs");
            rc.out_dir = o.value("dir", rc.out_dir);
            if (o.contains("formats")) rc.formats = o.at("formats").get<std::vector<std::string>>();
        }
        rc.seed = j.value("seed", rc.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }

    if (const char* env = std::getenv("WEDGEFLOW_OUT")) {
        rc.out_dir = env;
    }
    rc.config_hash = fnv1a(j.dump());
    rc.validate();
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str(), path);
}

} // namespace wedge
