// Command-line front end: shock-state tables, perturbation reports, the
// free-boundary solver and the barrier verifications, with JSON/CSV output.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "wedgeflow/barriers.hpp"
#include "wedgeflow/config.hpp"
#include "wedgeflow/diagnostics.hpp"
#include "wedgeflow/domain.hpp"
#include "wedgeflow/free_boundary.hpp"
#include "wedgeflow/geometry.hpp"
#include "wedgeflow/perturbation.hpp"
#include "wedgeflow/states.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace wedge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInadmissible = 2;
constexpr int kExitBreakdown = 3;
constexpr int kExitPredicate = 4;

ordered_json header(const RunConfig& rc) {
    ordered_json j;
    j["toolkit_version"] = kToolkitVersion;
    j["config_hash"] = rc.config_hash;
    j["seed"] = rc.seed;
    return j;
}

void write_json(const ordered_json& j, const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string());
    os << j.dump(2) << "\n";
}

GasParams gas_of(const RunConfig& rc) {
    return states::make_gas(rc.gamma, rc.rho0, rc.rho1);
}

int cmd_states(const RunConfig& rc) {
    const GasParams gp = gas_of(rc);
    const states::NormalReflection nr = states::solve_normal(gp);

    ordered_json j = header(rc);
    j["incident"] = {{"u1", gp.u1},
                     {"X", gp.X},
                     {"mass_residual", std::abs((gp.X - gp.u1) * gp.rho1 - gp.X * gp.rho0)},
                     {"bernoulli_residual",
                      std::abs(gp.rho1_pow() + 0.5 * gp.u1 * gp.u1 - gp.u1 * gp.X -
                               gp.rho0_pow())}};
    j["normal"] = {{"Z", nr.Z},
                   {"rho2bar", nr.rho2bar},
                   {"c2bar2", nr.c2bar2},
                   {"Y", nr.Y},
                   {"mass_residual", nr.mass_residual(gp)},
                   {"bernoulli_residual", nr.bernoulli_residual(gp)}};

    ordered_json regular = ordered_json::array();
    ordered_json nonsym = ordered_json::array();
    for (double s0 : rc.sigma0_grid) {
        for (double d : rc.delta_grid) {
            const states::NonSymmetricStates ns = states::nonsym_states(gp, s0, d);
            const auto res_p = ns.plus_sym.residuals(gp);
            regular.push_back({{"sigma", s0 + d},
                               {"theta", ns.plus_sym.theta},
                               {"b", ns.plus_sym.b},
                               {"u2", ns.plus_sym.u2},
                               {"v2", ns.plus_sym.v2},
                               {"rho2", ns.plus_sym.rho2},
                               {"c2", ns.plus_sym.c2},
                               {"residual_norm", ns.plus_sym.residual_norm(gp)},
                               {"residuals", {res_p[0], res_p[1], res_p[2], res_p[3]}}});
            nonsym.push_back({{"sigma0", s0},
                              {"delta", d},
                              {"plus", {{"u", ns.plus_state.u},
                                        {"v", ns.plus_state.v},
                                        {"rho", ns.plus_state.rho},
                                        {"J", {ns.J_plus.xi, ns.J_plus.eta}}}},
                              {"minus", {{"u", ns.minus_state.u},
                                         {"v", ns.minus_state.v},
                                         {"rho", ns.minus_state.rho},
                                         {"J", {ns.J_minus.xi, ns.J_minus.eta}}}},
                              {"smallness_K", ns.smallness_constant()}});
        }
    }
    j["regular"] = regular;
    j["nonsymmetric"] = nonsym;

    fs::create_directories(rc.out_dir);
    write_json(j, fs::path(rc.out_dir) / "states.json");
    return kExitOk;
}

int cmd_perturb(const RunConfig& rc) {
    const GasParams gp = gas_of(rc);
    ordered_json j = header(rc);

    ordered_json sym = ordered_json::array();
    for (const auto& r : perturb::symmetric_derivatives(gp)) {
        sym.push_back({{"name", r.name},
                       {"closed_form", r.closed_form},
                       {"fd_value", r.fd_value},
                       {"fd_step", r.fd_step},
                       {"discrepancy", r.discrepancy},
                       {"observed_order", r.observed_order},
                       {"inferred", r.inferred}});
    }
    j["symmetric"] = sym;

    ordered_json nonsym = ordered_json::array();
    for (double s0 : rc.sigma0_grid) {
        ordered_json block;
        block["sigma0"] = s0;
        ordered_json reps = ordered_json::array();
        for (const auto& r : perturb::nonsymmetric_derivatives(gp, s0)) {
            reps.push_back({{"name", r.name},
                            {"leading_term", r.closed_form},
                            {"fd_value", r.fd_value},
                            {"band", r.band ? *r.band : 0.0}});
        }
        block["reports"] = reps;
        nonsym.push_back(block);
    }
    j["nonsymmetric"] = nonsym;

    if (rc.sigma0_grid.size() >= 2) {
        ordered_json scal = ordered_json::array();
        for (const auto& bs : perturb::band_scaling(gp, rc.sigma0_grid)) {
            scal.push_back({{"name", bs.name},
                            {"sigma0", bs.sigma0s},
                            {"deviations", bs.deviations},
                            {"fitted_exponent", bs.fitted_exponent}});
        }
        j["band_scaling"] = scal;
    }

    fs::create_directories(rc.out_dir);
    write_json(j, fs::path(rc.out_dir) / "perturbation.json");
    return kExitOk;
}

ordered_json diag_json(const pde::DiagnosticsReport& rep) {
    ordered_json entries = ordered_json::array();
    for (const auto& e : rep.entries()) {
        entries.push_back({{"name", e.name},
                           {"value", e.value},
                           {"pass", e.pass},
                           {"condition", e.condition}});
    }
    return entries;
}

int cmd_solve(const RunConfig& rc) {
    const GasParams gp = gas_of(rc);
    fs::create_directories(rc.out_dir);

    bool predicate_failure = false;
    ordered_json runs = ordered_json::array();
    for (double s0 : rc.sigma0_grid) {
        for (double d : rc.delta_grid) {
            pde::FreeBoundaryOptions opt;
            opt.resolution = rc.resolution;
            opt.max_outer = rc.max_outer;
            opt.picard.max_iters = rc.max_picard;
            opt.picard.tol = rc.tol;
            opt.picard.eps_ell = rc.eps_ell;

            const pde::FreeBoundaryResult res = pde::free_boundary_iterate(gp, s0, d, opt);
            const pde::DiagnosticsReport rep =
                pde::diagnostics(res.field, res.domain, gp);

            char stem[96];
            std::snprintf(stem, sizeof(stem), "s%.6f_d%.6f", s0, d);
            pde::write_field_csv(res.field, gp,
                                 (fs::path(rc.out_dir) / (std::string("field_") + stem + ".csv"))
                                     .string());
            res.shock.write_csv(
                (fs::path(rc.out_dir) / (std::string("shock_") + stem + ".csv")).string());

            ordered_json run;
            run["sigma0"] = s0;
            run["delta"] = d;
            run["status"] = res.report.status_name();
            run["outer_iters"] = res.report.outer_iters;
            run["final_shock_residual"] = res.report.final_shock_residual;
            run["tolerance"] = res.report.tolerance;
            run["sign_predicates_pass"] = rep.all_sign_predicates_pass();
            run["diagnostics"] = diag_json(rep);
            runs.push_back(run);

            if (!res.report.converged() || !rep.all_sign_predicates_pass()) {
                predicate_failure = true;
            }
        }
    }
    ordered_json j = header(rc);
    j["runs"] = runs;
    write_json(j, fs::path(rc.out_dir) / "diagnostics.json");
    return (rc.strict && predicate_failure) ? kExitPredicate : kExitOk;
}

int cmd_verify_barriers(const RunConfig& rc) {
    fs::create_directories(rc.out_dir);
    ordered_json j = header(rc);

    const barriers::KSConstants ks = barriers::ks_constants(1.0);
    j["ks_constants"] = {{"C_beta", ks.C_beta}, {"H", ks.H}, {"eps_K", ks.eps_K},
                         {"r_K", ks.r_K}};

    ordered_json cells = ordered_json::array();
    const std::vector<double> lambdas = {0.5, 1.0};
    const std::vector<double> ces = {0.0, 0.2, 1.0};
    const std::vector<double> alphas = {0.3, 0.5, 0.7};
    for (double lam : lambdas) {
        for (double ce : ces) {
            for (double al : alphas) {
                barriers::SingularCoeffBounds b{lam, 1.0, ce, al, 0.1, 0.05};
                const barriers::EpsA1 e1 = barriers::eps_A1(b);
                const barriers::A3Result a3 = barriers::barrier_A3(b, 120);
                ordered_json cell = {{"lambda", lam},
                                     {"C_E", ce},
                                     {"alpha", al},
                                     {"eps_A1", e1.value},
                                     {"eps_A1_overflowed", e1.overflowed},
                                     {"A3_gamma", a3.gamma_log},
                                     {"A3_mu", a3.mu},
                                     {"A3_eps", a3.eps_A3},
                                     {"A3_verdict", a3.verdict.ok}};
                if (!a3.verdict.ok && a3.verdict.witness) {
                    cell["witness"] = {a3.verdict.witness->xi, a3.verdict.witness->eta};
                    cell["failed_check"] = a3.verdict.failed_check;
                }
                cells.push_back(cell);
            }
        }
    }
    j["a3_sweep"] = cells;
    write_json(j, fs::path(rc.out_dir) / "barriers.json");
    return kExitOk;
}

int cmd_sweep(const RunConfig& rc) {
    // Independent (sigma0, delta) cells on a bounded pool; per-cell state
    // tables plus an index written after the joins.
    const GasParams gp = gas_of(rc);
    fs::create_directories(rc.out_dir);

    struct Cell {
        double s0, d;
        ordered_json payload;
        std::string error;
    };
    std::vector<Cell> cells;
    for (double s0 : rc.sigma0_grid) {
        for (double d : rc.delta_grid) {
            cells.push_back({s0, d, {}, {}});
        }
    }
    const auto work = [&gp](Cell& c) {
        try {
            const states::NonSymmetricStates ns = states::nonsym_states(gp, c.s0, c.d);
            const geom::ClearanceReport rel = geom::relative_position(
                geom::sonic_arc_plus(ns), geom::reflect_across_axis(geom::sonic_arc_minus(ns)),
                geom::reflect_across_axis(geom::shock_ray_minus(ns)));
            c.payload = {{"sigma0", c.s0},
                         {"delta", c.d},
                         {"plus_v", ns.plus_state.v},
                         {"minus_v", ns.minus_state.v},
                         {"arc_clearance", rel.clearance},
                         {"shock_clearance", rel.shock_clearance},
                         {"relative_position_ok", rel.predicate}};
        } catch (const Error& e) {
            c.error = e.what();
        }
    };
    if (rc.jobs <= 1) {
        for (auto& c : cells) work(c);
    } else {
        std::vector<std::future<void>> futs;
        std::atomic<size_t> next{0};
        for (int w = 0; w < rc.jobs; ++w) {
            futs.push_back(std::async(std::launch::async, [&]() {
                for (size_t i = next++; i < cells.size(); i = next++) work(cells[i]);
            }));
        }
        for (auto& f : futs) f.get();
    }

    ordered_json j = header(rc);
    ordered_json arr = ordered_json::array();
    for (const auto& c : cells) {
        if (!c.error.empty()) {
            arr.push_back({{"sigma0", c.s0}, {"delta", c.d}, {"error", c.error}});
        } else {
            arr.push_back(c.payload);
        }
    }
    j["cells"] = arr;
    write_json(j, fs::path(rc.out_dir) / "sweep.json");
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar shock reflection toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    bool strict = false;
    uint64_t seed = 0;
    int jobs = 1;
    app.add_option("--config", config_path, "configuration file (JSON)")->required();
    app.add_option("--out", out_override, "output directory override");
    app.add_flag("--strict", strict, "exit 4 when a sign predicate fails");
    app.add_option("--seed", seed, "run seed recorded in every output");
    app.add_option("--jobs", jobs, "worker pool size for sweeps");

    auto* c_states = app.add_subcommand("states", "incident/normal/regular state tables");
    auto* c_perturb = app.add_subcommand("perturb", "derivative validation reports");
    auto* c_solve = app.add_subcommand("solve", "free-boundary solve + diagnostics");
    auto* c_barriers = app.add_subcommand("verify-barriers", "barrier constant verdicts");
    auto* c_sweep = app.add_subcommand("sweep", "parameter sweep of the state layer");

    CLI11_PARSE(app, argc, argv);

    RunConfig rc;
    try {
        rc = load_config(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    if (!out_override.empty()) rc.out_dir = out_override;
    rc.strict = strict;
    rc.seed = seed;
    rc.jobs = jobs;

    try {
        if (c_states->parsed()) return cmd_states(rc);
        if (c_perturb->parsed()) return cmd_perturb(rc);
        if (c_solve->parsed()) return cmd_solve(rc);
        if (c_barriers->parsed()) return cmd_verify_barriers(rc);
        if (c_sweep->parsed()) return cmd_sweep(rc);
    } catch (const NoAdmissibleRoot& e) {
        std::cerr << "inadmissible physics: " << e.what() << "\n";
        return kExitInadmissible;
    } catch (const ContinuationBreakdown& e) {
        std::cerr << "solver breakdown: " << e.what() << "\n";
        return kExitBreakdown;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBreakdown;
    }
    return kExitOk;
}
