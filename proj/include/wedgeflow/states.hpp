#ifndef WEDGEFLOW_STATES_HPP
#define WEDGEFLOW_STATES_HPP

#include <array>
#include <vector>

#include "wedgeflow/gasdyn.hpp"

namespace wedge {
namespace states {

// State behind the normally reflected shock (flat wall, aligned flow).
// Z: reflected-shock speed, rho2bar: density, c2bar2: sonic speed squared,
// Y: eta-coordinate where the reflected shock meets the sonic circle.
struct NormalReflection {
    double Z;
    double rho2bar;
    double c2bar2;
    double Y;

    // Residuals of the two jump relations, relative scaling.
    double mass_residual(const GasParams& gp) const;
    double bernoulli_residual(const GasParams& gp) const;
};

// Uniform state behind the regularly reflected shock in the symmetric
// sub-problem (flow along +xi, wall at polar angle pi/2 - sigma).
// Unknown vector of the algebraic system is (v2, rho2, b, theta); u2 is the
// derived slip component u2 = v2 tan(sigma).
struct RegularReflection {
    double sigma;
    double theta;  // angle between reflected shock line and the wall
    double b;      // the line meets the symmetry axis at (-b, 0)
    double u2;
    double v2;
    double rho2;
    double c2;     // sonic speed (not squared)
    Point J;       // shock / sonic circle intersection, upper branch

    std::array<double, 4> residuals(const GasParams& gp) const;
    double residual_norm(const GasParams& gp) const;

    // Residuals of the circle / potential-continuity system satisfied by J.
    std::array<double, 2> j_residuals(const GasParams& gp) const;

    // Direction of the reflected shock line (unit vector, pointing upward;
    // polar angle pi/2 - sigma - theta).
    Point shock_direction() const;
};

// State(plus)/State(minus) data in the symmetric-wedge frame (wedge axis =
// xi-axis, walls at polar angles +-(pi/2 - sigma0), upstream flow at angle
// delta).  plus/minus carry the rotated velocities and densities; J_plus,
// J_minus the shock/sonic intersections.  The underlying symmetric solves
// are kept so downstream geometry can rebuild the straight shock lines.
struct NonSymmetricStates {
    double sigma0;
    double delta;
    FlowState plus_state;
    FlowState minus_state;
    double c2_plus;
    double c2_minus;
    Point J_plus;
    Point J_minus;
    RegularReflection plus_sym;   // solve at sigma0 + delta (flow-aligned frame)
    RegularReflection minus_sym;  // solve at sigma0 - delta (flow-aligned frame)

    // Measured constant K in |u2+|+|v2+|+|u2-|+|v2-| <= K * sigma0.
    double smallness_constant() const;
};

// Affine-in-(xi,eta) potential of a uniform state:
//   phi(p) = constant + u xi + v eta.
// The pseudo-potential is phi - |p|^2/2.
struct StatePotential {
    double u = 0.0;
    double v = 0.0;
    double constant = 0.0;

    double eval(Point p) const { return constant + u * p.xi + v * p.eta; }
    double eval_pseudo(Point p) const { return eval(p) - 0.5 * dot(p, p); }
    Point grad() const { return {u, v}; }
    Point grad_pseudo(Point p) const { return {u - p.xi, v - p.eta}; }

    StatePotential shifted(Point linear_shift) const {
        return {u - linear_shift.xi, v - linear_shift.eta, constant};
    }
    // Re-express in coordinates x = xi - t.xi, y = eta - t.eta.
    StatePotential translated(Point t) const {
        return {u, v, constant + u * t.xi + v * t.eta};
    }
};

// Shifted potential family of the symmetrized frames: psi = phi - s.p with
// s = (u1 sin(delta) tan(sigma), u1 sin(delta)); hatted variants carry the
// opposite shift applied to eta-mirrored potentials.
struct ShiftedPotentials {
    double sigma;
    double delta;
    Point shift;          // (u1 sin d tan s, u1 sin d)
    double K;             // rho0^{g-1} - u1^2 sin^2 d / (2 cos^2 s)
    StatePotential psi1;      // shifted upstream potential, wedge frame
    StatePotential psi2;      // shifted State(plus) potential
    StatePotential psi1_hat;  // mirrored upstream, opposite shift
    StatePotential psi2_hat;  // mirrored State(minus), opposite shift
};

// Solves the incident-shock jump relations for (u1, X).
std::pair<double, double> solve_incident(double gamma, double rho0, double rho1);

// Convenience: builds a validated GasParams from (gamma, rho0, rho1).
GasParams make_gas(double gamma, double rho0, double rho1);

// Solves the normal-reflection system; the admissible branch (Z > 0,
// rho2bar > rho1) is isolated by a log-spaced sign-change scan followed by
// bisection + Newton polish.
NormalReflection solve_normal(const GasParams& gp);

// Newton continuation in sigma from the normal-reflection seed.  Negative
// sigma is admitted (mirror parity of the system).  Throws
// ContinuationBreakdown carrying the last converged angle.
RegularReflection solve_regular(const GasParams& gp, double sigma);

// Largest |sigma| reachable by continuation below `limit`, found by
// bisection on solvability.
double find_sigma_max(const GasParams& gp, double limit);

// Rotates the symmetric solves at sigma0 +- delta into the symmetric-wedge
// frame; requires |delta| <= sigma0.
NonSymmetricStates nonsym_states(const GasParams& gp, double sigma0, double delta);

// Potential of a uniform state: constant fixed by the Bernoulli closure,
// rho0^{g-1} - rho^{g-1} - |q|^2/2.
StatePotential state_potential(const FlowState& state, const GasParams& gp);

// The psi-family at (sigma, delta) in the symmetric-wedge frame.
ShiftedPotentials shifted_potentials(const GasParams& gp, double sigma, double delta);

} // namespace states
} // namespace wedge

#endif
