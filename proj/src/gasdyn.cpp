#include "wedgeflow/gasdyn.hpp"

#include <cmath>
#include <sstream>

namespace wedge {

void GasParams::validate() const {
    if (!(gamma > 1.0)) {
        throw DomainError("gamma must exceed 1 (the gamma -> 1 isothermal limit is unsupported)");
    }
    if (!(rho0 > 0.0) || !(rho1 > rho0)) {
        throw DomainError("require rho1 > rho0 > 0 (compressive incident shock)");
    }
    if (!(u1 > 0.0) || !(X > u1)) {
        throw DomainError("require u1 > 0 and X > u1");
    }
    const double mc = (X - u1) * rho1 - X * rho0;
    const double mc_scale = std::abs(X * rho0) + std::abs((X - u1) * rho1);
    if (std::abs(mc) > kRelTol * mc_scale) {
        throw DomainError("incident-shock mass conservation violated");
    }
    const double bl = rho1_pow() + 0.5 * u1 * u1 - u1 * X - rho0_pow();
    const double bl_scale = rho1_pow() + 0.5 * u1 * u1 + u1 * X + rho0_pow();
    if (std::abs(bl) > kRelTol * bl_scale) {
        throw DomainError("incident-shock Bernoulli law violated");
    }
}

namespace gasdyn {

double density_from_bernoulli(double phi, Point grad_phi, Point p, const GasParams& gp) {
    const double bracket = gp.rho0_pow() - phi + grad_phi.xi * p.xi + grad_phi.eta * p.eta -
                           0.5 * dot(grad_phi, grad_phi);
    if (!(bracket > 0.0)) {
        std::ostringstream os;
        os << "density bracket nonpositive (" << bracket << "): vacuum state";
        throw CavitationError(os.str());
    }
    return std::pow(bracket, 1.0 / (gp.gamma - 1.0));
}

double density_from_pseudo(double psi, Point grad_psi, const GasParams& gp) {
    const double bracket = gp.rho0_pow() - psi - 0.5 * dot(grad_psi, grad_psi);
    if (!(bracket > 0.0)) {
        std::ostringstream os;
        os << "density bracket nonpositive (" << bracket << "): vacuum state";
        throw CavitationError(os.str());
    }
    return std::pow(bracket, 1.0 / (gp.gamma - 1.0));
}

double ellipticity_margin(Point grad_varphi, double c2) {
    return 1.0 - dot(grad_varphi, grad_varphi) / c2;
}

std::array<double, 3> quasilinear_coeffs(Point grad_phi, Point p, double c2) {
    const double w1 = grad_phi.xi - p.xi;
    const double w2 = grad_phi.eta - p.eta;
    return {c2 - w1 * w1, -w1 * w2, c2 - w2 * w2};
}

double rh_residual(const FlowState& inner, const FlowState& outer, Point p, Point normal) {
    const Point flux{inner.rho * (inner.u - p.xi) - outer.rho * (outer.u - p.xi),
                     inner.rho * (inner.v - p.eta) - outer.rho * (outer.v - p.eta)};
    return dot(flux, normal);
}

double s_function(const FlowState& state, const GasParams& gp) {
    if (!(state.u < gp.u1)) {
        throw DivisionDomainError("S = v/(u1-u) undefined for u >= u1");
    }
    return state.v / (gp.u1 - state.u);
}

double rh_function(double phi, const FlowState& state, Point p, const GasParams& gp) {
    const double rho = density_from_bernoulli(phi, {state.u, state.v}, p, gp);
    const Point flux{rho * (state.u - p.xi) - gp.rho1 * (gp.u1 - p.xi),
                     rho * (state.v - p.eta) - gp.rho1 * (0.0 - p.eta)};
    return dot(flux, {state.u - gp.u1, state.v});
}

double rh_function_dphi(double phi, const FlowState& state, Point p, const GasParams& gp) {
    const double rho = density_from_bernoulli(phi, {state.u, state.v}, p, gp);
    const double drho_dphi = -std::pow(rho, 2.0 - gp.gamma) / (gp.gamma - 1.0);
    const double proj =
        (state.u - p.xi) * (state.u - gp.u1) + (state.v - p.eta) * state.v;
    return proj * drho_dphi;
}

double g_function(double phi, const FlowState& state, Point p, const GasParams& gp) {
    const double rho = density_from_bernoulli(phi, {state.u, state.v}, p, gp);
    const double rh = rh_function(phi, state, p, gp);
    return rh - (rho - gp.rho1) * (phi1_flow_aligned(p, gp) - phi);
}

double r_reduction(double u, double Z, double rho2bar, const GasParams& gp) {
    const double g1 = gp.gamma - 1.0;
    const double m = std::pow(rho2bar, g1) - u * Z - 0.5 * u * u;
    if (!(m > 0.0)) {
        throw DomainError("R(u) undefined: m(u) <= 0");
    }
    return rho2bar * Z - std::pow(m, 1.0 / g1) * (u + Z);
}

} // namespace gasdyn
} // namespace wedge
