#ifndef WEDGEFLOW_FREE_BOUNDARY_HPP
#define WEDGEFLOW_FREE_BOUNDARY_HPP

#include <string>
#include <vector>

#include "wedgeflow/fem.hpp"

namespace wedge {
namespace pde {

struct FreeBoundaryOptions {
    int max_outer = 40;
    double relax = 0.5;              // under-relaxation of the front update
    double trust_width_factor = 10.0;  // band half-width = factor * sigma0 * Z
    int resolution = 5000;
    PicardOptions picard;
};

struct FreeBoundaryReport {
    enum class Status { Converged, MaxIterations, TrustRegionExit, Oscillation };
    Status status = Status::MaxIterations;
    int outer_iters = 0;
    double final_shock_residual = 0.0;  // sup |psi - psi1| on the front
    double tolerance = 0.0;             // 1e-7 * u1 * Z
    std::vector<double> shock_residuals;
    std::vector<double> update_norms;
    std::string note;

    bool converged() const { return status == Status::Converged; }
    std::string status_name() const;
};

struct FreeBoundaryResult {
    SolutionField field;    // last-iterate field (converged or not)
    ShockCurve shock;
    DomainBuild domain;     // matching the final mesh
    FreeBoundaryReport report;
};

// Alternating iteration: oblique-flux solve on the current front, then a
// level-set update of the front toward {psi = psi1}.  Divergence and
// oscillation are reported, never masked.
FreeBoundaryResult free_boundary_iterate(const GasParams& gp, double sigma0, double delta,
                                         const FreeBoundaryOptions& opt = {});

} // namespace pde
} // namespace wedge

#endif
