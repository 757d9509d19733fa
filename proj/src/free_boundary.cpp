#include "wedgeflow/free_boundary.hpp"

#include <algorithm>
#include <cmath>

namespace wedge {
namespace pde {

std::string FreeBoundaryReport::status_name() const {
    switch (status) {
        case Status::Converged: return "converged";
        case Status::MaxIterations: return "max_iterations";
        case Status::TrustRegionExit: return "trust_region_exit";
        case Status::Oscillation: return "oscillation_detected";
    }
    return "unknown";
}

FreeBoundaryResult free_boundary_iterate(const GasParams& gp, double sigma0, double delta,
                                         const FreeBoundaryOptions& opt) {
    const states::NormalReflection nr = states::solve_normal(gp);
    const double tol = 1e-7 * gp.u1 * nr.Z;
    const double band = opt.trust_width_factor * sigma0 * nr.Z;

    DomainBuild db = build_domain(gp, sigma0, delta, opt.resolution);
    FreeBoundaryResult out;
    out.report.tolerance = tol;

    SolutionField field;
    Eigen::VectorXd warm;
    for (int outer = 0; outer < opt.max_outer; ++outer) {
        // Node layout is identical across re-meshes, so the previous field
        // warm-starts the Picard iteration directly.
        field = solve_fixed_shock(db, ShockBc::RhOblique, gp, opt.picard,
                                  warm.size() ? &warm : nullptr);
        warm = field.psi;
        const Mesh& m = *db.mesh;
        const int nt = m.nt;

        // Front residual and level-set update per structured row; the
        // updated curve lives on the mesh-row eta grid.
        double sup = 0.0;
        ShockCurve next;
        next.eta.resize(nt + 1);
        next.xi.resize(nt + 1);
        double update_norm = 0.0;
        for (int j = 0; j <= nt; ++j) {
            const int n0 = m.node_id(0, j);
            const Point p0 = m.nodes[n0];
            next.eta[j] = p0.eta;
            next.xi[j] = p0.xi;
            if (j == 0 || j == nt) continue;  // endpoints pinned at J-+
            const int n1 = m.node_id(1, j);
            const Point p1 = m.nodes[n1];
            const double g0 = field.psi[n0] - db.phi1.eval_pseudo(p0);
            const double g1 = field.psi[n1] - db.phi1.eval_pseudo(p1);
            sup = std::max(sup, std::abs(g0));
            // One Newton step on g along xi; g_xi ~ u - u1 < 0 away from
            // degenerate rows.
            double slope = (g1 - g0) / (p1.xi - p0.xi);
            if (!(slope < -0.05 * gp.u1)) {
                slope = -gp.u1;
            }
            next.xi[j] = p0.xi - opt.relax * g0 / slope;
            update_norm = std::max(update_norm, std::abs(next.xi[j] - p0.xi));
        }
        out.report.shock_residuals.push_back(sup);
        out.report.update_norms.push_back(update_norm);
        out.report.outer_iters = outer + 1;
        out.report.final_shock_residual = sup;

        if (sup < tol) {
            out.report.status = FreeBoundaryReport::Status::Converged;
            break;
        }

        // Oscillation: residual grows two steps in a row well above the best.
        const auto& hist = out.report.shock_residuals;
        if (hist.size() >= 6) {
            const double best = *std::min_element(hist.begin(), hist.end());
            const size_t k = hist.size() - 1;
            if (hist[k] > hist[k - 1] && hist[k - 1] > hist[k - 2] && hist[k] > 4.0 * best) {
                out.report.status = FreeBoundaryReport::Status::Oscillation;
                out.report.note = "front residual diverging after " + std::to_string(k + 1) +
                                  " iterations";
                break;
            }
        }

        // Trust region around the normal reflected shock.
        bool exited = false;
        for (size_t j = 0; j < next.xi.size(); ++j) {
            if (std::abs(next.xi[j] + nr.Z) > band) {
                exited = true;
                break;
            }
        }
        if (exited) {
            out.report.status = FreeBoundaryReport::Status::TrustRegionExit;
            out.report.note = "front left the trust band of width " + std::to_string(band);
            break;
        }

        db = build_domain_with_shock(gp, sigma0, delta, opt.resolution, next);
    }

    out.field = field;
    out.shock = db.shock;
    out.domain = db;
    return out;
}

} // namespace pde
} // namespace wedge
