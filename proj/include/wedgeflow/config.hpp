#ifndef WEDGEFLOW_CONFIG_HPP
#define WEDGEFLOW_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "wedgeflow/errors.hpp"

namespace wedge {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Parsed run configuration; nested JSON tables, env vars may override the
// output directory only.
struct RunConfig {
    double gamma = 2.0;
    double rho0 = 1.0;
    double rho1 = 2.0;

    std::vector<double> sigma0_grid;  // singleton for plain runs
    std::vector<double> delta_grid;

    int resolution = 5000;
    double tol = 1e-8;
    double eps_ell = 0.02;
    int max_picard = 200;
    int max_outer = 40;

    std::string out_dir = "out";
    std::vector<std::string> formats = {"json", "csv"};

    uint64_t seed = 0;
    bool strict = false;
    int jobs = 1;

    uint64_t config_hash = 0;

    void validate() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

// FNV-1a over the canonicalized configuration text.
uint64_t fnv1a(const std::string& s);

} // namespace wedge

#endif
