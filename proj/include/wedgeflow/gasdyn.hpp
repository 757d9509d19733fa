#ifndef WEDGEFLOW_GASDYN_HPP
#define WEDGEFLOW_GASDYN_HPP

#include <array>
#include <cmath>

#include "wedgeflow/errors.hpp"

namespace wedge {

struct Point {
    double xi = 0.0;
    double eta = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.xi + b.xi, a.eta + b.eta}; }
inline Point operator-(Point a, Point b) { return {a.xi - b.xi, a.eta - b.eta}; }
inline Point operator*(double s, Point p) { return {s * p.xi, s * p.eta}; }
inline double dot(Point a, Point b) { return a.xi * b.xi + a.eta * b.eta; }
inline double norm(Point p) { return std::hypot(p.xi, p.eta); }

// Counterclockwise rotation about the origin.
inline Point rotate(Point p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.xi - s * p.eta, s * p.xi + c * p.eta};
}

// Reflection across the xi-axis.
inline Point mirror_eta(Point p) { return {p.xi, -p.eta}; }

// Velocity components and density of a uniform (or sampled) state.
struct FlowState {
    double u = 0.0;
    double v = 0.0;
    double rho = 1.0;
};

// Gas constants of the reflection problem.  rho0: density in front of the
// incident shock; rho1, u1: density and speed behind it; X: incident shock
// speed.  The pressure scaling kappa = (gamma-1)/gamma is baked in, so no
// pressure constant appears anywhere.
struct GasParams {
    double gamma;
    double rho0;
    double rho1;
    double u1;
    double X;

    // Relative tolerance used when validating the jump relations.
    static constexpr double kRelTol = 1e-12;

    void validate() const;

    double rho0_pow() const { return std::pow(rho0, gamma - 1.0); }
    double rho1_pow() const { return std::pow(rho1, gamma - 1.0); }
};

namespace gasdyn {

// rho = [rho0^{g-1} - phi + phi_xi*xi + phi_eta*eta - |grad phi|^2/2]^{1/(g-1)}.
// Throws CavitationError when the bracket is nonpositive.
double density_from_bernoulli(double phi, Point grad_phi, Point p, const GasParams& gp);

// Same closure expressed for the pseudo-potential psi = phi - |p|^2/2,
// for which the bracket is rho0^{g-1} - psi - |grad psi|^2/2.
double density_from_pseudo(double psi, Point grad_psi, const GasParams& gp);

// c^2 = (gamma-1) rho^{gamma-1}.
inline double sonic_speed_sq(double rho, const GasParams& gp) {
    return (gp.gamma - 1.0) * std::pow(rho, gp.gamma - 1.0);
}

// 1 - |grad varphi|^2 / c^2 for the pseudo-velocity grad varphi.  Positive
// exactly on the subsonic (elliptic) side.
double ellipticity_margin(Point grad_varphi, double c2);

// Coefficients (a11, a12, a22) of the quasilinear operator
//   [c^2-(phi_xi-xi)^2] phi_xixi - 2(phi_xi-xi)(phi_eta-eta) phi_xieta
//   + [c^2-(phi_eta-eta)^2] phi_etaeta.
std::array<double, 3> quasilinear_coeffs(Point grad_phi, Point p, double c2);

// Mass-flux jump [rho_in(q_in - p) - rho_out(q_out - p)] . n across a shock
// with unit normal n.  Zero on an admissible discrete shock.
double rh_residual(const FlowState& inner, const FlowState& outer, Point p, Point normal);

// S = v / (u1 - u); requires u < u1.
double s_function(const FlowState& state, const GasParams& gp);

// Five-variable shock function
//   RH = [rho(u-xi, v-eta) - rho1(u1-xi, -eta)] . (u-u1, v),
// with rho recomputed from (phi, u, v, xi, eta) by the Bernoulli closure.
// Expressed in the frame where the upstream flow is (u1, 0).
double rh_function(double phi, const FlowState& state, Point p, const GasParams& gp);

// Partial derivative of rh_function w.r.t. phi at fixed (u, v, xi, eta).
double rh_function_dphi(double phi, const FlowState& state, Point p, const GasParams& gp);

// G = RH - (rho - rho1)(phi1 - phi), the coercive combination; phi1 is the
// upstream potential u1 (xi - X).
double g_function(double phi, const FlowState& state, Point p, const GasParams& gp);

// Upstream potential of the flow-aligned frame, phi1 = u1 (xi - X).
inline double phi1_flow_aligned(Point p, const GasParams& gp) {
    return gp.u1 * (p.xi - gp.X);
}

// Scalar reduction of the shock relation along the normal reflection:
//   R(u) = rho2bar*Z - m(u)^{1/(gamma-1)} (u + Z),
//   m(u) = rho2bar^{gamma-1} - u Z - u^2/2.
// R(0) = 0 by the normal-reflection mass conservation.
double r_reduction(double u, double Z, double rho2bar, const GasParams& gp);

} // namespace gasdyn
} // namespace wedge

#endif
