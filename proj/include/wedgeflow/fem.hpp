#ifndef WEDGEFLOW_FEM_HPP
#define WEDGEFLOW_FEM_HPP

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>

#include "wedgeflow/domain.hpp"
#include "wedgeflow/mesh.hpp"

namespace wedge {
namespace pde {

enum class ShockBc { DirichletPhi1, RhOblique };

struct PicardOptions {
    int max_iters = 200;
    double tol = 1e-8;           // relative residual in the discrete energy norm
    double eps_ell = 0.02;       // ellipticity-margin floor for the cutoff
    double max_clamp_frac = 0.25;
    double relax = 1.0;
    std::optional<double> frozen_rho;  // constant-density (linear) mode
};

// Discrete pseudo-potential on a mesh with iteration metadata.  Derived
// fields are recomputed from psi on demand, never stored.
struct SolutionField {
    std::shared_ptr<const Mesh> mesh;
    Eigen::VectorXd psi;
    int picard_iters = 0;
    double final_residual = 0.0;
    bool converged = false;
    int clamped_elements = 0;
    double eps_ell_used = 0.02;
    std::vector<double> residual_history;

    struct Derived {
        std::vector<double> u, v, rho, c2, margin;  // nodal
        int cavitated = 0;
    };
    Derived derive(const GasParams& gp) const;

    // Element-centroid values: the P1 gradient is most accurate there, away
    // from one-sided boundary patches.
    struct ElementDerived {
        std::vector<Point> centroid;
        std::vector<double> u, v, rho, c2, margin, phi;
        int cavitated = 0;
    };
    ElementDerived derive_elements(const GasParams& gp) const;

    double phi(int node) const {
        const Point p = mesh->nodes[size_t(node)];
        return psi[node] + 0.5 * dot(p, p);
    }
    std::vector<double> phi_nodal() const;
    std::vector<double> psi_nodal() const;
};

// Generic boundary assignment used by the manufactured-solution tests.
struct BcSpec {
    // Dirichlet value per tag; absent tags are natural (zero flux).
    std::function<std::optional<double>(BoundaryTag, Point)> dirichlet;
    // Inhomogeneous flux rho * dpsi/dn = flux(p) on tagged edges.
    std::function<std::optional<double>(BoundaryTag, Point)> flux;
};

// Picard (frozen-coefficient) finite-element solution of
//   div(rho grad psi) + 2 rho = 0
// with rho from the pseudo-potential Bernoulli closure.  `init` warm-starts
// the iteration (nodal layout must match the mesh).
SolutionField solve_bvp(std::shared_ptr<const Mesh> mesh, const BcSpec& bc,
                        const GasParams& gp, const PicardOptions& opt = {},
                        const Eigen::VectorXd* init = nullptr);

// Physical boundary conditions of the reflection domain: psi = psi2+- on the
// sonic arcs, natural slip on the walls, and on the shock either psi = psi1
// or the mass-flux condition rho psi_n = rho1 grad(psi1) . n.
SolutionField solve_fixed_shock(const DomainBuild& db, ShockBc mode, const GasParams& gp,
                                const PicardOptions& opt = {},
                                const Eigen::VectorXd* init = nullptr);

// Assembled nonlinear residual (free nodes only) of a field under the same
// boundary data; used by the weak-form identity checks.
double weak_residual(const DomainBuild& db, const SolutionField& field, ShockBc mode,
                     const GasParams& gp, const PicardOptions& opt = {});

} // namespace pde
} // namespace wedge

#endif
