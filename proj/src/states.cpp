#include "wedgeflow/states.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wedgeflow/geometry.hpp"

namespace wedge {
namespace states {

namespace {

struct RegularSystem {
    const GasParams& gp;
    double sigma;

    Eigen::Vector4d residual(const Eigen::Vector4d& x) const {
        const double v2 = x[0], rho2 = x[1], b = x[2], theta = x[3];
        const double T = std::tan(sigma);
        const double g1m = gp.gamma - 1.0;
        Eigen::Vector4d g;
        g[0] = std::pow(rho2, g1m) + 0.5 * (T * T + 1.0) * v2 * v2 + v2 * b * T -
               gp.rho1_pow() - 0.5 * gp.u1 * gp.u1 - gp.u1 * b;
        g[1] = v2 * std::cos(theta) / std::cos(sigma) - gp.u1 * std::sin(sigma + theta);
        const double A = gp.rho1 * (gp.u1 + b) - rho2 * (v2 * T + b);
        const double B = gp.u1 - v2 * T;
        g[2] = A * B + rho2 * v2 * v2;
        g[3] = gp.X * std::tan(theta + sigma) - T * (b + gp.X);
        return g;
    }

    Eigen::Vector4d scales(const Eigen::Vector4d& x) const {
        const double v2 = x[0], rho2 = x[1], b = x[2], theta = x[3];
        const double T = std::tan(sigma);
        const double g1m = gp.gamma - 1.0;
        Eigen::Vector4d s;
        s[0] = std::pow(rho2, g1m) + 0.5 * (T * T + 1.0) * v2 * v2 + std::abs(v2 * b * T) +
               gp.rho1_pow() + 0.5 * gp.u1 * gp.u1 + gp.u1 * std::abs(b);
        s[1] = std::abs(v2 / std::cos(sigma)) + gp.u1;
        const double A = gp.rho1 * (gp.u1 + std::abs(b)) + rho2 * (std::abs(v2 * T) + std::abs(b));
        s[2] = A * (gp.u1 + std::abs(v2 * T)) + rho2 * v2 * v2;
        s[3] = gp.X * (std::abs(std::tan(theta + sigma)) + std::abs(T)) + std::abs(T * b);
        for (int i = 0; i < 4; ++i) s[i] = std::max(s[i], 1.0);
        return s;
    }

    Eigen::Matrix4d jacobian(const Eigen::Vector4d& x) const {
        const double v2 = x[0], rho2 = x[1], b = x[2], theta = x[3];
        const double T = std::tan(sigma);
        const double g1m = gp.gamma - 1.0;
        Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
        J(0, 0) = (T * T + 1.0) * v2 + b * T;
        J(0, 1) = g1m * std::pow(rho2, g1m - 1.0);
        J(0, 2) = v2 * T - gp.u1;
        J(1, 0) = std::cos(theta) / std::cos(sigma);
        J(1, 3) = -v2 * std::sin(theta) / std::cos(sigma) - gp.u1 * std::cos(sigma + theta);
        const double A = gp.rho1 * (gp.u1 + b) - rho2 * (v2 * T + b);
        const double B = gp.u1 - v2 * T;
        J(2, 0) = -rho2 * T * B - A * T + 2.0 * rho2 * v2;
        J(2, 1) = -(v2 * T + b) * B + v2 * v2;
        J(2, 2) = (gp.rho1 - rho2) * B;
        const double sec = 1.0 / std::cos(theta + sigma);
        J(3, 2) = -T;
        J(3, 3) = gp.X * sec * sec;
        return J;
    }

    // Newton from a seed; returns true on convergence.
    bool newton(Eigen::Vector4d& x) const {
        for (int it = 0; it < 60; ++it) {
            const Eigen::Vector4d g = residual(x);
            const Eigen::Vector4d s = scales(x);
            double rel = 0.0;
            for (int i = 0; i < 4; ++i) rel = std::max(rel, std::abs(g[i]) / s[i]);
            if (rel < 1e-14) return true;
            Eigen::Matrix4d J = jacobian(x);
            Eigen::PartialPivLU<Eigen::Matrix4d> lu(J);
            const Eigen::Vector4d dx = lu.solve(g);
            if (!dx.allFinite()) return false;
            x -= dx;
            if (!(x[1] > 0.0)) return false;  // density must stay positive
        }
        const Eigen::Vector4d g = residual(x);
        const Eigen::Vector4d s = scales(x);
        double rel = 0.0;
        for (int i = 0; i < 4; ++i) rel = std::max(rel, std::abs(g[i]) / s[i]);
        return rel < 1e-11;
    }
};

RegularReflection assemble_regular(const GasParams& gp, double sigma,
                                   const Eigen::Vector4d& x) {
    RegularReflection rr;
    rr.sigma = sigma;
    rr.v2 = x[0];
    rr.rho2 = x[1];
    rr.b = x[2];
    rr.theta = x[3];
    rr.u2 = rr.v2 * std::tan(sigma);
    rr.c2 = std::sqrt((gp.gamma - 1.0) * std::pow(rr.rho2, gp.gamma - 1.0));
    rr.J = geom::sonic_intersection(rr, gp);
    return rr;
}

} // namespace

double NormalReflection::mass_residual(const GasParams& gp) const {
    const double lhs = gp.rho1 * (Z + gp.u1);
    const double rhs = rho2bar * Z;
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
}

double NormalReflection::bernoulli_residual(const GasParams& gp) const {
    const double lhs = gp.rho0_pow() + gp.u1 * (Z + gp.X);
    const double rhs = std::pow(rho2bar, gp.gamma - 1.0);
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs));
}

std::array<double, 4> RegularReflection::residuals(const GasParams& gp) const {
    RegularSystem sys{gp, sigma};
    const Eigen::Vector4d g = sys.residual({v2, rho2, b, theta});
    return {g[0], g[1], g[2], g[3]};
}

double RegularReflection::residual_norm(const GasParams& gp) const {
    RegularSystem sys{gp, sigma};
    const Eigen::Vector4d x{v2, rho2, b, theta};
    const Eigen::Vector4d g = sys.residual(x);
    const Eigen::Vector4d s = sys.scales(x);
    double rel = 0.0;
    for (int i = 0; i < 4; ++i) rel = std::max(rel, std::abs(g[i]) / s[i]);
    return rel;
}

std::array<double, 2> RegularReflection::j_residuals(const GasParams& gp) const {
    const double circle = (J.xi - u2) * (J.xi - u2) + (J.eta - v2) * (J.eta - v2) - c2 * c2;
    const double line = (u2 - gp.u1) * J.xi + v2 * J.eta + 0.5 * gp.u1 * gp.u1 -
                        0.5 * (u2 * u2 + v2 * v2) + gp.rho1_pow() -
                        std::pow(rho2, gp.gamma - 1.0);
    return {circle, line};
}

Point RegularReflection::shock_direction() const {
    return {std::sin(sigma + theta), std::cos(sigma + theta)};
}

double NonSymmetricStates::smallness_constant() const {
    const double s = std::abs(plus_state.u) + std::abs(plus_state.v) +
                     std::abs(minus_state.u) + std::abs(minus_state.v);
    return s / sigma0;
}

std::pair<double, double> solve_incident(double gamma, double rho0, double rho1) {
    if (!(gamma > 1.0)) {
        throw DomainError("gamma must exceed 1");
    }
    if (!(rho0 > 0.0) || !(rho1 > rho0)) {
        throw NoAdmissibleRoot("incident shock requires rho1 > rho0 > 0");
    }
    const double dpow = std::pow(rho1, gamma - 1.0) - std::pow(rho0, gamma - 1.0);
    const double u1 = std::sqrt(2.0 * dpow * (rho1 - rho0) / (rho1 + rho0));
    const double X = u1 * rho1 / (rho1 - rho0);
    return {u1, X};
}

GasParams make_gas(double gamma, double rho0, double rho1) {
    const auto [u1, X] = solve_incident(gamma, rho0, rho1);
    GasParams gp{gamma, rho0, rho1, u1, X};
    gp.validate();
    return gp;
}

NormalReflection solve_normal(const GasParams& gp) {
    gp.validate();
    const double g1m = gp.gamma - 1.0;
    const auto f = [&](double Z) {
        return gp.rho0_pow() + gp.u1 * (Z + gp.X) -
               std::pow(gp.rho1 * (Z + gp.u1) / Z, g1m);
    };
    // Log-spaced sign-change scan over (0, u1+X], then bisection + Newton.
    const double z_hi = gp.u1 + gp.X;
    const double z_lo = 1e-9 * z_hi;
    const int n = 1024;
    double a = z_lo, fa = f(a);
    double root_lo = 0.0, root_hi = 0.0;
    int sign_changes = 0;
    for (int i = 1; i <= n; ++i) {
        const double b = z_lo * std::pow(z_hi / z_lo, double(i) / n);
        const double fb = f(b);
        if (fa == 0.0 || (fa < 0.0) != (fb < 0.0)) {
            ++sign_changes;
            if (sign_changes == 1) {
                root_lo = a;
                root_hi = b;
            }
        }
        a = b;
        fa = fb;
    }
    if (sign_changes == 0) {
        throw NoAdmissibleRoot("normal reflection: no sign change in Z scan");
    }
    if (sign_changes > 1) {
        throw NoAdmissibleRoot("normal reflection: admissible root not unique in scan");
    }
    for (int it = 0; it < 200 && (root_hi - root_lo) > 1e-14 * z_hi; ++it) {
        const double mid = 0.5 * (root_lo + root_hi);
        if ((f(root_lo) < 0.0) == (f(mid) < 0.0)) {
            root_lo = mid;
        } else {
            root_hi = mid;
        }
    }
    double Z = 0.5 * (root_lo + root_hi);
    for (int it = 0; it < 8; ++it) {
        const double rho2 = gp.rho1 * (Z + gp.u1) / Z;
        const double fp = gp.u1 + g1m * std::pow(rho2, g1m - 1.0) * gp.rho1 * gp.u1 / (Z * Z);
        Z -= f(Z) / fp;
    }
    NormalReflection nr;
    nr.Z = Z;
    nr.rho2bar = gp.rho1 * (Z + gp.u1) / Z;
    nr.c2bar2 = g1m * std::pow(nr.rho2bar, g1m);
    if (!(nr.rho2bar > gp.rho1) || !(Z > 0.0)) {
        throw NoAdmissibleRoot("normal reflection: admissibility rho2bar > rho1, Z > 0 failed");
    }
    if (!(nr.c2bar2 > Z * Z)) {
        throw NoAdmissibleRoot("normal reflection: reflected shock not subsonic (c2^2 <= Z^2)");
    }
    nr.Y = std::sqrt(nr.c2bar2 - Z * Z);
    return nr;
}

RegularReflection solve_regular(const GasParams& gp, double sigma) {
    gp.validate();
    const NormalReflection nr = solve_normal(gp);
    Eigen::Vector4d x{0.0, nr.rho2bar, nr.Z, 0.0};
    if (sigma == 0.0) {
        return assemble_regular(gp, 0.0, x);
    }
    double reached = 0.0;
    double step = sigma;
    int halvings = 0;
    while (std::abs(reached - sigma) > 0.0) {
        if (std::abs(step) > std::abs(sigma - reached)) {
            step = sigma - reached;
        }
        const double target = reached + step;
        RegularSystem sys{gp, target};
        Eigen::Vector4d trial = x;
        if (sys.newton(trial) && trial[1] > gp.rho1) {
            x = trial;
            reached = target;
        } else {
            step *= 0.5;
            if (++halvings > 60 || std::abs(step) < 1e-12 * (1.0 + std::abs(sigma))) {
                std::ostringstream os;
                os << "continuation stalled at sigma = " << reached
                   << " (target " << sigma << ")";
                throw ContinuationBreakdown(os.str(), reached);
            }
        }
    }
    RegularReflection rr = assemble_regular(gp, sigma, x);
    if (!(rr.rho2 > gp.rho1)) {
        throw ContinuationBreakdown("regular reflection lost admissibility rho2 > rho1", 0.0);
    }
    return rr;
}

double find_sigma_max(const GasParams& gp, double limit) {
    const auto solvable = [&](double s) {
        try {
            (void)solve_regular(gp, s);
            return true;
        } catch (const Error&) {
            return false;
        }
    };
    if (solvable(limit)) return limit;
    double lo = 0.0, hi = limit;
    for (int it = 0; it < 40 && (hi - lo) > 1e-6 * limit; ++it) {
        const double mid = 0.5 * (lo + hi);
        (solvable(mid) ? lo : hi) = mid;
    }
    return lo;
}

NonSymmetricStates nonsym_states(const GasParams& gp, double sigma0, double delta) {
    if (!(sigma0 > 0.0) || std::abs(delta) > sigma0) {
        throw DomainError("nonsym states require 0 < sigma0 and |delta| <= sigma0");
    }
    NonSymmetricStates ns;
    ns.sigma0 = sigma0;
    ns.delta = delta;
    ns.plus_sym = solve_regular(gp, sigma0 + delta);
    ns.minus_sym = solve_regular(gp, sigma0 - delta);

    // Plus state: rotate the sigma0+delta solve from its flow-aligned frame
    // into the wedge frame; minus state: mirror the delta -> -delta image.
    const Point qp = rotate({ns.plus_sym.u2, ns.plus_sym.v2}, delta);
    ns.plus_state = {qp.xi, qp.eta, ns.plus_sym.rho2};
    ns.c2_plus = ns.plus_sym.c2;
    ns.J_plus = rotate(ns.plus_sym.J, delta);

    const Point qm = mirror_eta(rotate({ns.minus_sym.u2, ns.minus_sym.v2}, -delta));
    ns.minus_state = {qm.xi, qm.eta, ns.minus_sym.rho2};
    ns.c2_minus = ns.minus_sym.c2;
    ns.J_minus = mirror_eta(rotate(ns.minus_sym.J, -delta));
    return ns;
}

StatePotential state_potential(const FlowState& state, const GasParams& gp) {
    if (!(state.rho > 0.0)) {
        throw DomainError("state potential requires rho > 0");
    }
    const double q2 = state.u * state.u + state.v * state.v;
    const double constant =
        gp.rho0_pow() - std::pow(state.rho, gp.gamma - 1.0) - 0.5 * q2;
    return {state.u, state.v, constant};
}

ShiftedPotentials shifted_potentials(const GasParams& gp, double sigma, double delta) {
    ShiftedPotentials sp;
    sp.sigma = sigma;
    sp.delta = delta;
    const double sd = std::sin(delta), cd = std::cos(delta), ts = std::tan(sigma);
    sp.shift = {gp.u1 * sd * ts, gp.u1 * sd};
    const double cs = std::cos(sigma);
    sp.K = gp.rho0_pow() - 0.5 * gp.u1 * gp.u1 * sd * sd / (cs * cs);

    const StatePotential phi1 =
        state_potential({gp.u1 * cd, gp.u1 * sd, gp.rho1}, gp);
    const StatePotential phi1_mirror{phi1.u, -phi1.v, phi1.constant};
    sp.psi1 = phi1.shifted(sp.shift);
    sp.psi1_hat = phi1_mirror.shifted(Point{-sp.shift.xi, -sp.shift.eta});

    const NonSymmetricStates ns = nonsym_states(gp, sigma, delta);
    const StatePotential phi2p = state_potential(ns.plus_state, gp);
    const StatePotential phi2m = state_potential(ns.minus_state, gp);
    const StatePotential phi2m_mirror{phi2m.u, -phi2m.v, phi2m.constant};
    sp.psi2 = phi2p.shifted(sp.shift);
    sp.psi2_hat = phi2m_mirror.shifted(Point{-sp.shift.xi, -sp.shift.eta});
    return sp;
}

} // namespace states
} // namespace wedge
