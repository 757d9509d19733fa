#ifndef WEDGEFLOW_DIAGNOSTICS_HPP
#define WEDGEFLOW_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "wedgeflow/fem.hpp"
#include "wedgeflow/free_boundary.hpp"

namespace wedge {
namespace pde {

struct DiagEntry {
    std::string name;
    double value = 0.0;
    bool pass = false;
    std::string condition;  // the inequality the entry instantiates
};

struct DiagnosticsReport {
    // Sign predicates of the comparison principles.  Gradient-based checks
    // are evaluated on the "core" quads, away from the sonic-arc layer where
    // the ellipticity cutoff owns the discretization; the raw extremes over
    // everything are kept alongside.
    double max_phi_minus_phi1 = 0.0;   // interior max of phi - phi1 (< 0)
    double u_min = 0.0, u_max = 0.0;   // core extremes; 0 - tol <= u < u1
    double s_min = 0.0, s_max = 0.0;   // core; within the state bracket
    double s_lo_bracket = 0.0, s_hi_bracket = 0.0;
    double min_g = 0.0;                // core min of RH - (phi1-phi)(rho-rho1)
    double u_min_raw = 0.0, u_max_raw = 0.0;
    double s_min_raw = 0.0, s_max_raw = 0.0;
    double min_g_raw = 0.0;
    double sonic_layer_width = 0.0;
    int core_quads = 0, layer_quads = 0;
    double min_phi_minus_phi2p = 0.0;  // phi >= phi2+ comparison
    double min_phi_minus_phi2m = 0.0;
    // Shock shape.
    double convexity_sign = 0.0;       // +-1 uniform sign of f'' samples
    double convexity_violation = 0.0;  // worst wrong-signed second difference
    double max_inv_slope = 0.0;        // max |1/slope| of the front
    // Smallness vs the normal-reflection anchor.
    double smallness_K = 0.0;          // max(|u|+|v|+|rho-rho2bar|)/sigma0
    // Ellipticity.
    double margin_min_strip = 0.0;     // on |eta| <= Y/2
    double margin_min_global = 0.0;
    // Weak-form bookkeeping.
    double weak_residual_interior = 0.0;
    double shock_flux_mismatch = 0.0;  // RH flux defect of the final field
    // Symmetry.
    double symmetric_defect = 0.0;
    double defect_floor = 0.0;

    double tol_u = 0.0, tol_g = 0.0, tol_s = 0.0, tol_phi2 = 0.0;

    std::vector<DiagEntry> entries() const;
    bool all_sign_predicates_pass() const;
};

DiagnosticsReport diagnostics(const SolutionField& field, const DomainBuild& db,
                              const GasParams& gp);

// Integral of |phi - phi~|^3 over the common domain of the field's region
// and its mirror across the wedge axis; 3-point quadrature restricted by a
// point-in-domain indicator of the mirrored region.
struct DefectResult {
    double value = 0.0;
    double clipped_area = 0.0;
    double floor_estimate = 0.0;  // quadrature floor from FP dust
};
DefectResult symmetric_defect(const SolutionField& field, const GasParams& gp);

// Antisymmetric corner probe: h(eta) = phi(xi,eta) - phi(xi,-eta) on a
// circle about the corner, plus a log-log fit of |grad phi| vs r.
struct AntisymProbe {
    double r_probe = 0.0;
    std::vector<double> etas;
    std::vector<double> h;
    double envelope_slope = 0.0;     // least-squares slope of h vs eta
    double envelope_intercept = 0.0;
    double reference_slope = 0.0;    // 2 u1 sin(delta)
    double corner_alpha = 0.0;       // |grad phi| ~ C r^alpha exponent
    double corner_prefactor = 0.0;
    bool consistent = true;          // no corner-regularity contradiction
};
AntisymProbe antisym_probe(const SolutionField& field, const DomainBuild& db,
                           const GasParams& gp, double r_probe = 0.0, int n_samples = 64);

// Field export: one row per node, (xi, eta, phi, u, v, rho).
void write_field_csv(const SolutionField& field, const GasParams& gp,
                     const std::string& path);

} // namespace pde
} // namespace wedge

#endif
