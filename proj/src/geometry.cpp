#include "wedgeflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace wedge {
namespace geom {

void WedgeConfig::validate() const {
    if (!(sigma0 > 0.0) || !(sigma0 < M_PI / 2.0)) {
        throw DomainError("wedge config requires 0 < sigma0 < pi/2");
    }
    if (std::abs(delta) > sigma0) {
        throw DomainError("wedge config requires |delta| <= sigma0");
    }
}

namespace {

double canonical_angle(const WedgeConfig& cfg, Frame f, double theta_plus) {
    switch (f) {
        case Frame::SymmetricWedge: return 0.0;
        case Frame::FlowAligned: return -cfg.delta;
        case Frame::WallPlusVertical: return cfg.sigma0;
        case Frame::ShockNormalH: return cfg.sigma0 + theta_plus;
    }
    return 0.0;
}

} // namespace

double arc_alpha0(double Z, double c2) {
    return M_PI / 2.0 - 0.5 * std::acos(Z / c2);
}

std::vector<Point> SonicArc::sample(int n) const {
    std::vector<Point> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = alpha_lo + (alpha_hi - alpha_lo) * i / double(n - 1);
        pts.push_back(at(a));
    }
    return pts;
}

Point sonic_intersection(const states::RegularReflection& rr, const GasParams& gp) {
    const double a = rr.u2 - gp.u1;
    const double c = rr.v2;
    const double e = 0.5 * gp.u1 * gp.u1 - 0.5 * (rr.u2 * rr.u2 + rr.v2 * rr.v2) +
                     gp.rho1_pow() - std::pow(rr.rho2, gp.gamma - 1.0);
    const double len = std::hypot(a, c);
    if (!(len > 0.0)) {
        throw NoIntersection("shock line degenerate (zero velocity jump)");
    }
    const double d0 = (a * rr.u2 + c * rr.v2 + e) / len;
    const double disc = rr.c2 * rr.c2 - d0 * d0;
    if (!(disc > 0.0)) {
        throw NoIntersection("reflected shock line misses the sonic circle");
    }
    const double t = std::sqrt(disc);
    const Point foot{rr.u2 - d0 * a / len, rr.v2 - d0 * c / len};
    const Point tang{-c / len, a / len};
    const Point j1 = foot + t * tang;
    const Point j2 = foot + (-t) * tang;
    return (j1.eta >= j2.eta) ? j1 : j2;
}

SonicArc sonic_arc_plus(const states::NonSymmetricStates& ns) {
    SonicArc arc;
    arc.center = {ns.plus_state.u, ns.plus_state.v};
    arc.radius = ns.c2_plus;
    const Point wall_dir{std::sin(ns.sigma0), std::cos(ns.sigma0)};
    (void)wall_dir;
    arc.alpha_lo = M_PI / 2.0 - ns.sigma0;  // wall crossing
    arc.alpha_hi = std::atan2(ns.J_plus.eta - arc.center.eta, ns.J_plus.xi - arc.center.xi);
    return arc;
}

SonicArc sonic_arc_minus(const states::NonSymmetricStates& ns) {
    SonicArc arc;
    arc.center = {ns.minus_state.u, ns.minus_state.v};
    arc.radius = ns.c2_minus;
    arc.alpha_hi = -(M_PI / 2.0 - ns.sigma0);  // wall crossing
    arc.alpha_lo = std::atan2(ns.J_minus.eta - arc.center.eta, ns.J_minus.xi - arc.center.xi);
    return arc;
}

ShockRay shock_ray_plus(const states::NonSymmetricStates& ns) {
    ShockRay ray;
    ray.direction = rotate(ns.plus_sym.shock_direction(), ns.delta);
    ray.anchor = rotate({-ns.plus_sym.b, 0.0}, ns.delta);
    return ray;
}

ShockRay shock_ray_minus(const states::NonSymmetricStates& ns) {
    ShockRay ray;
    ray.direction = mirror_eta(rotate(ns.minus_sym.shock_direction(), -ns.delta));
    ray.anchor = mirror_eta(rotate({-ns.minus_sym.b, 0.0}, -ns.delta));
    return ray;
}

Point reflect_across_axis(Point p, Frame frame) {
    if (frame != Frame::SymmetricWedge) {
        throw FrameError("axis reflection defined only in the symmetric-wedge frame");
    }
    return mirror_eta(p);
}

SonicArc reflect_across_axis(const SonicArc& arc) {
    if (arc.frame != Frame::SymmetricWedge) {
        throw FrameError("axis reflection defined only in the symmetric-wedge frame");
    }
    SonicArc out = arc;
    out.center = mirror_eta(arc.center);
    out.alpha_lo = -arc.alpha_hi;
    out.alpha_hi = -arc.alpha_lo;
    return out;
}

ShockRay reflect_across_axis(const ShockRay& ray) {
    if (ray.frame != Frame::SymmetricWedge) {
        throw FrameError("axis reflection defined only in the symmetric-wedge frame");
    }
    return {mirror_eta(ray.anchor), mirror_eta(ray.direction), ray.frame};
}

ClearanceReport relative_position(const SonicArc& plus, const SonicArc& minus_reflected,
                                  const ShockRay& minus_shock_reflected, int samples) {
    ClearanceReport rep;
    rep.clearance = std::numeric_limits<double>::infinity();

    // Vertical clearance of the plus arc over the reflected minus arc,
    // compared along matching xi.
    const auto mpts = minus_reflected.sample(samples);
    for (const Point& q : mpts) {
        const double dx = q.xi - plus.center.xi;
        if (std::abs(dx) >= plus.radius) continue;
        const double eta_plus = plus.center.eta + std::sqrt(plus.radius * plus.radius - dx * dx);
        const double alpha = std::atan2(eta_plus - plus.center.eta, dx);
        if (alpha < std::min(plus.alpha_lo, plus.alpha_hi) - 1e-12 ||
            alpha > std::max(plus.alpha_lo, plus.alpha_hi) + 1e-12) {
            continue;
        }
        const double c = eta_plus - q.eta;
        if (c < rep.clearance) {
            rep.clearance = c;
            rep.witness = q;
        }
    }

    // Distance between the reflected minus shock ray and the plus arc.
    rep.shock_clearance = std::numeric_limits<double>::infinity();
    const auto ppts = plus.sample(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = 3.0 * plus.radius * i / double(samples - 1);
        const Point s = minus_shock_reflected.at(t);
        for (const Point& p : ppts) {
            const double d = norm(s - p);
            if (d < rep.shock_clearance) {
                rep.shock_clearance = d;
                rep.shock_witness = s;
            }
        }
    }

    const double tol = 1e-12 * plus.radius;
    rep.predicate = (rep.clearance >= -tol) && (rep.shock_clearance >= -tol);
    return rep;
}

ShiftedSonic shifted_sonic(const states::NonSymmetricStates& ns, const GasParams& gp) {
    ShiftedSonic out;
    const double sd = std::sin(ns.delta);
    out.shift_plus = {gp.u1 * sd * std::tan(ns.sigma0), gp.u1 * sd};
    out.shift_minus = {-gp.u1 * sd * std::tan(ns.sigma0), gp.u1 * sd};
    out.J_hat_plus = ns.J_plus - out.shift_plus;
    out.J_hat_minus = ns.J_minus - out.shift_minus;
    out.arc_hat_plus = sonic_arc_plus(ns);
    out.arc_hat_plus.center = out.arc_hat_plus.center - out.shift_plus;
    out.arc_hat_plus.alpha_hi = std::atan2(out.J_hat_plus.eta - out.arc_hat_plus.center.eta,
                                           out.J_hat_plus.xi - out.arc_hat_plus.center.xi);
    out.arc_hat_minus = sonic_arc_minus(ns);
    out.arc_hat_minus.center = out.arc_hat_minus.center - out.shift_minus;
    out.arc_hat_minus.alpha_lo = std::atan2(out.J_hat_minus.eta - out.arc_hat_minus.center.eta,
                                            out.J_hat_minus.xi - out.arc_hat_minus.center.xi);
    return out;
}

double WedgeConfig::frame_angle(Frame to, double theta_plus) const {
    return canonical_angle(*this, to, theta_plus);
}

Point frame_transform(Point p, const WedgeConfig& cfg, Frame from, Frame to,
                      double theta_plus) {
    const double a = canonical_angle(cfg, to, theta_plus) - canonical_angle(cfg, from, theta_plus);
    return rotate(p, a);
}

SonicArc frame_transform(const SonicArc& arc, const WedgeConfig& cfg, Frame to,
                         double theta_plus) {
    const double a =
        canonical_angle(cfg, to, theta_plus) - canonical_angle(cfg, arc.frame, theta_plus);
    SonicArc out = arc;
    out.center = rotate(arc.center, a);
    out.alpha_lo += a;
    out.alpha_hi += a;
    out.frame = to;
    return out;
}

ShockRay frame_transform(const ShockRay& ray, const WedgeConfig& cfg, Frame to,
                         double theta_plus) {
    const double a =
        canonical_angle(cfg, to, theta_plus) - canonical_angle(cfg, ray.frame, theta_plus);
    return {rotate(ray.anchor, a), rotate(ray.direction, a), to};
}

void export_polylines_csv(const std::vector<TaggedPoint>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot open " + path + " for writing");
    }
    os << "xi,eta,tag\n";
    char buf[80];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,", r.p.xi, r.p.eta);
        os << buf << r.tag << "\n";
    }
}

} // namespace geom
} // namespace wedge
