#include "wedgeflow/perturbation.hpp"

#include <cmath>
#include <limits>

#include "wedgeflow/geometry.hpp"

namespace wedge {
namespace perturb {

FdEstimate richardson(const std::function<double(double)>& f, double base, double h) {
    const auto central = [&](double step) {
        return (f(base + step) - f(base - step)) / (2.0 * step);
    };
    const double d1 = central(h);
    const double d2 = central(h / 10.0);
    const double d3 = central(h / 100.0);
    // One Richardson pass on the two finest steps removes the h^2 term.
    const double value = (100.0 * d3 - d2) / 99.0;
    // Step ratio is 10, so the successive-difference ratio is 10^p.
    const double num = std::abs(d1 - d2);
    const double den = std::abs(d2 - d3);
    const double order = (den > 0.0 && num > 0.0) ? std::log10(num / den) : 2.0;
    return {value, order, h};
}

PowerFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) continue;
        const double lx = std::log(xs[i]);
        const double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) {
        return {0.0, 0.0};
    }
    const double q = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double logk = (sy - q * sx) / n;
    return {q, std::exp(logk)};
}

namespace {

DerivativeReport make_report(const std::string& name, double closed,
                             const std::function<double(double)>& f, double base,
                             double h) {
    const FdEstimate fd = richardson(f, base, h);
    DerivativeReport r;
    r.name = name;
    r.closed_form = closed;
    r.fd_value = fd.value;
    r.fd_step = fd.coarse_step;
    r.observed_order = fd.observed_order;
    r.discrepancy = std::abs(closed - fd.value) / std::max(std::abs(closed), 1.0);
    return r;
}

} // namespace

std::vector<DerivativeReport> symmetric_derivatives(const GasParams& gp) {
    const states::NormalReflection nr = states::solve_normal(gp);
    const double ZX = nr.Z / gp.X;
    const double h = 1e-3;

    const auto field = [&](auto getter) {
        return [&gp, getter](double s) { return getter(states::solve_regular(gp, s)); };
    };

    std::vector<DerivativeReport> out;
    out.push_back(make_report("dtheta_dsigma", ZX,
                              field([](const states::RegularReflection& r) { return r.theta; }),
                              0.0, h));
    out.push_back(make_report("db_dsigma", 0.0,
                              field([](const states::RegularReflection& r) { return r.b; }),
                              0.0, h));
    out.push_back(make_report("drho2_dsigma", 0.0,
                              field([](const states::RegularReflection& r) { return r.rho2; }),
                              0.0, h));
    out.push_back(make_report("dv2_dsigma", gp.u1 * (ZX + 1.0),
                              field([](const states::RegularReflection& r) { return r.v2; }),
                              0.0, h));
    out.push_back(make_report("dxiJ_dsigma", (ZX + 1.0) * std::sqrt(nr.c2bar2 - nr.Z * nr.Z),
                              field([](const states::RegularReflection& r) { return r.J.xi; }),
                              0.0, h));
    out.push_back(make_report("detaJ_dsigma", (ZX + 1.0) * (gp.u1 + nr.Z),
                              field([](const states::RegularReflection& r) { return r.J.eta; }),
                              0.0, h));
    DerivativeReport du2 = make_report(
        "du2_dsigma", 0.0,
        field([](const states::RegularReflection& r) { return r.u2; }), 0.0, h);
    du2.inferred = true;  // follows from u2 = v2 tan(sigma), not stated directly
    out.push_back(du2);
    return out;
}

std::vector<DerivativeReport> nonsymmetric_derivatives(const GasParams& gp, double sigma0) {
    const states::NormalReflection nr = states::solve_normal(gp);
    const double ZX = nr.Z / gp.X;
    const double root = std::sqrt(nr.c2bar2 - nr.Z * nr.Z);
    const double h = std::min(1e-3, 0.25 * sigma0);

    const auto field = [&](auto getter) {
        return [&gp, sigma0, getter](double d) {
            return getter(states::nonsym_states(gp, sigma0, d));
        };
    };

    struct Item {
        const char* name;
        double leading;
        std::function<double(const states::NonSymmetricStates&)> get;
    };
    const std::vector<Item> items = {
        {"du2p_ddelta", 0.0,
         [](const states::NonSymmetricStates& s) { return s.plus_state.u; }},
        {"dv2p_ddelta", gp.u1 * (ZX + 1.0),
         [](const states::NonSymmetricStates& s) { return s.plus_state.v; }},
        {"dxiJp_ddelta", ZX * root,
         [](const states::NonSymmetricStates& s) { return s.J_plus.xi; }},
        {"detaJp_ddelta", gp.u1 * (ZX + 1.0) + nr.Z * nr.Z / gp.X,
         [](const states::NonSymmetricStates& s) { return s.J_plus.eta; }},
    };

    std::vector<DerivativeReport> out;
    for (const auto& it : items) {
        DerivativeReport r = make_report(it.name, it.leading, field(it.get), 0.0, h);
        r.band = std::abs(r.fd_value - it.leading);
        out.push_back(r);
    }
    return out;
}

std::vector<BandScaling> band_scaling(const GasParams& gp,
                                      const std::vector<double>& sigma0s) {
    std::vector<BandScaling> out;
    std::vector<std::vector<double>> devs;
    std::vector<std::string> names;
    for (size_t k = 0; k < sigma0s.size(); ++k) {
        const auto reps = nonsymmetric_derivatives(gp, sigma0s[k]);
        if (k == 0) {
            devs.resize(reps.size());
            for (const auto& r : reps) names.push_back(r.name);
        }
        for (size_t i = 0; i < reps.size(); ++i) devs[i].push_back(*reps[i].band);
    }
    for (size_t i = 0; i < devs.size(); ++i) {
        BandScaling bs;
        bs.name = names[i];
        bs.sigma0s = sigma0s;
        bs.deviations = devs[i];
        bs.fitted_exponent = fit_power_law(sigma0s, devs[i]).exponent;
        out.push_back(bs);
    }
    return out;
}

SonicMotionReport sonic_motion(const GasParams& gp, double sigma0,
                               const std::vector<double>& delta_grid, int arc_samples) {
    const states::NormalReflection nr = states::solve_normal(gp);
    SonicMotionReport rep;
    rep.leading = gp.u1 * (nr.Z / gp.X + 1.0);

    const double alpha0 = geom::arc_alpha0(nr.Z, std::sqrt(nr.c2bar2));
    std::vector<double> alphas(arc_samples);
    for (int i = 0; i < arc_samples; ++i) {
        alphas[i] = (M_PI / 2.0 - sigma0) + alpha0 * i / double(arc_samples - 1);
    }
    const auto eta_at = [&](double alpha, double d) {
        const auto ns = states::nonsym_states(gp, sigma0, d);
        return ns.plus_state.v + ns.c2_plus * std::sin(alpha);
    };

    const double h = std::min(1e-4, 0.25 * sigma0);
    rep.min_velocity = std::numeric_limits<double>::infinity();
    rep.max_velocity = -rep.min_velocity;
    for (double a : alphas) {
        const double vel = (eta_at(a, h) - eta_at(a, -h)) / (2.0 * h);
        rep.min_velocity = std::min(rep.min_velocity, vel);
        rep.max_velocity = std::max(rep.max_velocity, vel);
    }
    for (double d : delta_grid) {
        double min_disp = std::numeric_limits<double>::infinity();
        double max_disp = -min_disp;
        for (double a : alphas) {
            const double disp = eta_at(a, d) - eta_at(a, 0.0);
            min_disp = std::min(min_disp, disp);
            max_disp = std::max(max_disp, disp);
        }
        rep.displacements.push_back({d, min_disp, max_disp});
    }
    return rep;
}

} // namespace perturb
} // namespace wedge
