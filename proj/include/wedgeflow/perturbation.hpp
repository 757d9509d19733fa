#ifndef WEDGEFLOW_PERTURBATION_HPP
#define WEDGEFLOW_PERTURBATION_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wedgeflow/states.hpp"

namespace wedge {
namespace perturb {

// One validated derivative: closed form vs Richardson-extrapolated central
// differences of the solver chain.
struct DerivativeReport {
    std::string name;
    double closed_form = 0.0;
    double fd_value = 0.0;
    double fd_step = 0.0;        // coarsest step entering the extrapolation
    double discrepancy = 0.0;    // |closed - fd| / max(|closed|, 1)
    double observed_order = 0.0; // from successive step differences
    std::optional<double> band;  // O(sigma0) allowance, when applicable
    bool inferred = false;       // derived rather than stated closed form
};

// Central differences at steps {h, h/10, h/100}, Richardson-combined.
struct FdEstimate {
    double value;
    double observed_order;
    double coarse_step;
};
FdEstimate richardson(const std::function<double(double)>& f, double base, double h);

// Least-squares fit dev ~ K * x^q on positive data.
struct PowerFit {
    double exponent;
    double prefactor;
};
PowerFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

// d/dsigma at sigma = 0 of (theta, b, rho2, v2, xi_J, eta_J), plus the
// derived du2/dsigma = 0 check.
std::vector<DerivativeReport> symmetric_derivatives(const GasParams& gp);

// d/ddelta at delta = 0 of (u2+, v2+, xi_J+, eta_J+) at fixed sigma0.  The
// closed forms are the sigma0-independent leading terms; each report carries
// the measured deviation as its band.
std::vector<DerivativeReport> nonsymmetric_derivatives(const GasParams& gp, double sigma0);

// Measured shrink rate of the O(sigma0) bands under sigma0-halving.
struct BandScaling {
    std::string name;
    std::vector<double> sigma0s;
    std::vector<double> deviations;
    double fitted_exponent;
};
std::vector<BandScaling> band_scaling(const GasParams& gp,
                                      const std::vector<double>& sigma0s);

// Vertical motion of the upper sonic arc under delta.
struct SonicMotionReport {
    double min_velocity;   // min over arc samples of d eta / d delta at 0
    double max_velocity;
    double leading;        // u1 (Z/X + 1)
    struct Displacement {
        double delta;
        double min_disp;   // over arc samples, eta(delta) - eta(0)
        double max_disp;
    };
    std::vector<Displacement> displacements;
};
SonicMotionReport sonic_motion(const GasParams& gp, double sigma0,
                               const std::vector<double>& delta_grid, int arc_samples = 32);

} // namespace perturb
} // namespace wedge

#endif
