#include "wedgeflow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace wedge {
namespace pde {

double ShockCurve::xi_at(double e) const {
    if (e <= eta.front()) return xi.front();
    if (e >= eta.back()) return xi.back();
    const auto it = std::upper_bound(eta.begin(), eta.end(), e);
    const size_t k = size_t(it - eta.begin());
    const double w = (e - eta[k - 1]) / (eta[k] - eta[k - 1]);
    return (1.0 - w) * xi[k - 1] + w * xi[k];
}

double ShockCurve::slope_at(int i) const {
    const int n = int(eta.size());
    const int a = std::max(0, i - 1), b = std::min(n - 1, i + 1);
    return (xi[b] - xi[a]) / (eta[b] - eta[a]);
}

std::vector<double> ShockCurve::second_differences() const {
    std::vector<double> d2;
    for (size_t i = 1; i + 1 < eta.size(); ++i) {
        const double hm = eta[i] - eta[i - 1];
        const double hp = eta[i + 1] - eta[i];
        d2.push_back(2.0 * (xi[i + 1] * hm - xi[i] * (hm + hp) + xi[i - 1] * hp) /
                     (hm * hp * (hm + hp)));
    }
    return d2;
}

void ShockCurve::write_csv(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path);
    os << "eta,xi\n";
    char buf[80];
    for (size_t i = 0; i < eta.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", eta[i], xi[i]);
        os << buf;
    }
}

ShockCurve initial_shock(const states::NonSymmetricStates& ns, int n_samples) {
    const geom::ShockRay rp = geom::shock_ray_plus(ns);
    const geom::ShockRay rm = geom::shock_ray_minus(ns);
    const Point j0 = ns.J_minus, j1 = ns.J_plus;
    const double span = j1.eta - j0.eta;
    // Hermite end slopes d xi / d eta from the straight lines.
    const double m0 = rm.direction.xi / rm.direction.eta;
    const double m1 = rp.direction.xi / rp.direction.eta;
    ShockCurve sc;
    sc.eta.resize(n_samples);
    sc.xi.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double t = i / double(n_samples - 1);
        const double h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        const double h10 = t * (1.0 - t) * (1.0 - t);
        const double h01 = t * t * (3.0 - 2.0 * t);
        const double h11 = t * t * (t - 1.0);
        sc.eta[i] = j0.eta + span * t;
        sc.xi[i] = h00 * j0.xi + h10 * span * m0 + h01 * j1.xi + h11 * span * m1;
    }
    return sc;
}

double DomainBuild::analytic_arc_plus_len() const {
    return arc_plus.radius * std::abs(arc_plus.alpha_hi - arc_plus.alpha_lo);
}

double DomainBuild::analytic_arc_minus_len() const {
    return arc_minus.radius * std::abs(arc_minus.alpha_hi - arc_minus.alpha_lo);
}

double DomainBuild::wall_plus_len() const { return norm(wall_plus_end); }

double DomainBuild::wall_minus_len() const { return norm(wall_minus_end); }

DomainBuild build_domain(const GasParams& gp, double sigma0, double delta, int resolution) {
    if (!(sigma0 > 0.0)) {
        throw DomainError("domain requires sigma0 > 0 (flat wall leaves no corner region)");
    }
    const states::NonSymmetricStates ns = states::nonsym_states(gp, sigma0, delta);
    const ShockCurve sc = initial_shock(ns, 257);
    return build_domain_with_shock(gp, sigma0, delta, resolution, sc);
}

DomainBuild build_domain_with_shock(const GasParams& gp, double sigma0, double delta,
                                    int resolution, const ShockCurve& shock) {
    if (!(sigma0 > 0.0)) {
        throw DomainError("domain requires sigma0 > 0 (flat wall leaves no corner region)");
    }
    DomainBuild db;
    db.sigma0 = sigma0;
    db.delta = delta;
    db.ns = states::nonsym_states(gp, sigma0, delta);
    db.nr = states::solve_normal(gp);
    db.shock = shock;

    const double cd = std::cos(delta), sd = std::sin(delta);
    db.phi1 = states::state_potential({gp.u1 * cd, gp.u1 * sd, gp.rho1}, gp);
    db.phi2p = states::state_potential(db.ns.plus_state, gp);
    db.phi2m = states::state_potential(db.ns.minus_state, gp);

    db.arc_plus = geom::sonic_arc_plus(db.ns);
    db.arc_minus = geom::sonic_arc_minus(db.ns);
    db.wall_plus_end = db.arc_plus.at(db.arc_plus.alpha_lo);
    db.wall_minus_end = db.arc_minus.at(db.arc_minus.alpha_hi);

    // Curvilinear quad: left = shock (J- to J+), right = wall path through
    // the corner, bottom = lower arc (J- to wall), top = upper arc (J+ to
    // wall).
    const Point jm = db.ns.J_minus, jp = db.ns.J_plus;
    const ShockCurve sc = db.shock;
    const CurveFn left = [jm, jp, sc](double t) {
        const double e = jm.eta + (jp.eta - jm.eta) * t;
        return Point{sc.xi_at(e), e};
    };
    const Point wm = db.wall_minus_end, wp = db.wall_plus_end;
    const CurveFn right = [wm, wp](double t) {
        // Two straight wall segments with the corner pinned at t = 1/2.
        if (t <= 0.5) {
            const double w = t / 0.5;
            return Point{(1.0 - w) * wm.xi, (1.0 - w) * wm.eta};
        }
        const double w = (t - 0.5) / 0.5;
        return Point{w * wp.xi, w * wp.eta};
    };
    const geom::SonicArc am = db.arc_minus, ap = db.arc_plus;
    const CurveFn bottom = [am](double s) {
        return am.at(am.alpha_lo + (am.alpha_hi - am.alpha_lo) * s);
    };
    const CurveFn top = [ap](double s) {
        return ap.at(ap.alpha_hi + (ap.alpha_lo - ap.alpha_hi) * s);
    };

    // Cell counts from the target element count and the domain aspect.
    const double width = std::abs(0.5 * (jm.xi + jp.xi));
    const double height = wp.eta - wm.eta;
    const double aspect = std::max(1.0, height / std::max(width, 1e-9));
    int ns_cells = std::max(6, int(std::lround(std::sqrt(resolution / (4.0 * aspect)))));
    int nt_cells = std::max(8, int(std::lround(resolution / (4.0 * double(ns_cells)))));
    if (nt_cells % 2 != 0) ++nt_cells;

    const std::array<BoundaryTag, 5> tags = {BoundaryTag::Shock, BoundaryTag::WedgeMinus,
                                             BoundaryTag::WedgePlus, BoundaryTag::SonicMinus,
                                             BoundaryTag::SonicPlus};
    db.mesh = std::make_shared<Mesh>(
        build_transfinite(left, right, bottom, top, ns_cells, nt_cells, tags, 15.0));
    return db;
}

} // namespace pde
} // namespace wedge
