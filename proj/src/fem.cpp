#include "wedgeflow/fem.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>

namespace wedge {
namespace pde {

namespace {

struct ElemGeom {
    Point grad[3];  // gradients of the three hat functions
    double area;
    Point mid[3];  // edge midpoints (quadrature nodes of the 3-point rule)
};

ElemGeom elem_geom(const Mesh& m, int t) {
    const auto& tri = m.tris[t];
    const Point a = m.nodes[tri[0]], b = m.nodes[tri[1]], c = m.nodes[tri[2]];
    const double det = (b.xi - a.xi) * (c.eta - a.eta) - (c.xi - a.xi) * (b.eta - a.eta);
    ElemGeom g;
    g.area = 0.5 * det;
    g.grad[0] = {(b.eta - c.eta) / det, (c.xi - b.xi) / det};
    g.grad[1] = {(c.eta - a.eta) / det, (a.xi - c.xi) / det};
    g.grad[2] = {(a.eta - b.eta) / det, (b.xi - a.xi) / det};
    g.mid[0] = 0.5 * (a + b);
    g.mid[1] = 0.5 * (b + c);
    g.mid[2] = 0.5 * (c + a);
    return g;
}

// Hat-function values at the three edge midpoints.
constexpr double kMidHat[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};

// Density at a quadrature point with the ellipticity cutoff: when the
// pseudo-flow is at or beyond the margin floor, the speed entering the
// closure is reduced so that 1 - q^2/c^2 = eps_ell.
double density_cutoff(double psi, double q2, const GasParams& gp, double eps_ell,
                      bool* clamped) {
    const double g1 = gp.gamma - 1.0;
    const double B = gp.rho0_pow() - psi;
    double bracket = B - 0.5 * q2;
    if (!(bracket > 0.0)) {
        *clamped = true;
        bracket = 1e-10 * gp.rho0_pow();
        return std::pow(bracket, 1.0 / g1);
    }
    const double c2 = g1 * bracket;
    if (q2 > (1.0 - eps_ell) * c2) {
        *clamped = true;
        const double q2c = (1.0 - eps_ell) * g1 * B / (1.0 + 0.5 * (1.0 - eps_ell) * g1);
        bracket = B - 0.5 * q2c;
    }
    return std::pow(bracket, 1.0 / g1);
}

struct Assembled {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd rhs;
    int clamped = 0;
};

Assembled assemble(const Mesh& m, const Eigen::VectorXd& psi, const BcSpec& bc,
                   const GasParams& gp, const PicardOptions& opt) {
    const int n = int(m.nodes.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(m.tris.size() * 9);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    int clamped = 0;

    for (size_t t = 0; t < m.tris.size(); ++t) {
        const auto& tri = m.tris[t];
        const ElemGeom g = elem_geom(m, int(t));
        const Point gpsi{
            psi[tri[0]] * g.grad[0].xi + psi[tri[1]] * g.grad[1].xi + psi[tri[2]] * g.grad[2].xi,
            psi[tri[0]] * g.grad[0].eta + psi[tri[1]] * g.grad[1].eta +
                psi[tri[2]] * g.grad[2].eta};
        const double q2 = dot(gpsi, gpsi);
        double rho_k = 0.0;
        double load[3] = {0.0, 0.0, 0.0};
        bool elem_clamped = false;
        for (int q = 0; q < 3; ++q) {
            double rho_q;
            if (opt.frozen_rho) {
                rho_q = *opt.frozen_rho;
            } else {
                double psi_q = 0.0;
                for (int k = 0; k < 3; ++k) psi_q += kMidHat[q][k] * psi[tri[k]];
                bool cl = false;
                rho_q = density_cutoff(psi_q, q2, gp, opt.eps_ell, &cl);
                elem_clamped = elem_clamped || cl;
            }
            rho_k += rho_q / 3.0;
            for (int k = 0; k < 3; ++k) {
                load[k] += (g.area / 3.0) * 2.0 * rho_q * kMidHat[q][k];
            }
        }
        if (elem_clamped) ++clamped;
        for (int i = 0; i < 3; ++i) {
            rhs[tri[i]] += load[i];
            for (int j = 0; j < 3; ++j) {
                trip.emplace_back(tri[i], tri[j], rho_k * g.area * dot(g.grad[i], g.grad[j]));
            }
        }
    }

    // Inhomogeneous flux terms (2-point Gauss per boundary edge).
    for (const auto& e : m.boundary) {
        const Point a = m.nodes[e.a], b = m.nodes[e.b];
        const double len = norm(b - a);
        const double gq[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
        for (double w : gq) {
            const Point p = (1.0 - w) * a + w * b;
            const auto fl = bc.flux ? bc.flux(e.tag, p) : std::nullopt;
            if (!fl) continue;
            rhs[e.a] += 0.5 * len * (*fl) * (1.0 - w);
            rhs[e.b] += 0.5 * len * (*fl) * w;
        }
    }

    Assembled out;
    out.A.resize(n, n);
    out.A.setFromTriplets(trip.begin(), trip.end());
    out.rhs = rhs;
    out.clamped = clamped;
    return out;
}

struct DirichletSet {
    std::vector<int> idx;
    std::vector<double> val;
    std::vector<char> is_dirichlet;
};

DirichletSet dirichlet_nodes(const Mesh& m, const BcSpec& bc) {
    DirichletSet d;
    d.is_dirichlet.assign(m.nodes.size(), 0);
    std::vector<double> vals(m.nodes.size(), 0.0);
    for (const auto& e : m.boundary) {
        for (int node : {e.a, e.b}) {
            const auto dv = bc.dirichlet ? bc.dirichlet(e.tag, m.nodes[node]) : std::nullopt;
            if (dv) {
                d.is_dirichlet[node] = 1;
                vals[node] = *dv;
            }
        }
    }
    for (size_t i = 0; i < m.nodes.size(); ++i) {
        if (d.is_dirichlet[i]) {
            d.idx.push_back(int(i));
            d.val.push_back(vals[i]);
        }
    }
    return d;
}

void apply_dirichlet(Assembled& as, const DirichletSet& d) {
    // Substitute the values into the rhs, then pin rows/columns.
    for (size_t k = 0; k < d.idx.size(); ++k) {
        as.rhs -= as.A.col(d.idx[k]) * d.val[k];
    }
    for (int col = 0; col < as.A.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(as.A, col); it; ++it) {
            if (d.is_dirichlet[it.row()] || d.is_dirichlet[it.col()]) {
                it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
            }
        }
    }
    for (size_t k = 0; k < d.idx.size(); ++k) {
        as.rhs[d.idx[k]] = d.val[k];
    }
}

double free_node_residual(const Assembled& as, const DirichletSet& d,
                          const Eigen::VectorXd& psi) {
    const Eigen::VectorXd r = as.A * psi - as.rhs;
    double rn = 0.0, bn = 0.0;
    for (int i = 0; i < r.size(); ++i) {
        if (d.is_dirichlet[i]) continue;
        rn += r[i] * r[i];
        bn += as.rhs[i] * as.rhs[i];
    }
    return std::sqrt(rn) / std::max(std::sqrt(bn), 1e-300);
}

} // namespace

std::vector<double> SolutionField::phi_nodal() const {
    std::vector<double> out(mesh->nodes.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = phi(int(i));
    return out;
}

std::vector<double> SolutionField::psi_nodal() const {
    return {psi.data(), psi.data() + psi.size()};
}

SolutionField::Derived SolutionField::derive(const GasParams& gp) const {
    // Velocities are recovered from the nodal straight potential
    // phi = psi + |p|^2/2, whose Hessian is small, rather than from psi,
    // whose curvature would leak O(h) into the recovered gradients.
    const Mesh& m = *mesh;
    const size_t n = m.nodes.size();
    Derived d;
    d.u.assign(n, 0.0);
    d.v.assign(n, 0.0);
    d.rho.assign(n, 0.0);
    d.c2.assign(n, 0.0);
    d.margin.assign(n, 0.0);
    std::vector<double> wsum(n, 0.0);
    std::vector<double> phi(n);
    for (size_t i = 0; i < n; ++i) {
        phi[i] = psi[i] + 0.5 * dot(m.nodes[i], m.nodes[i]);
    }
    for (size_t t = 0; t < m.tris.size(); ++t) {
        const auto& tri = m.tris[t];
        const ElemGeom g = elem_geom(m, int(t));
        Point gphi{0.0, 0.0};
        for (int k = 0; k < 3; ++k) {
            gphi = gphi + phi[tri[k]] * g.grad[k];
        }
        for (int k = 0; k < 3; ++k) {
            d.u[tri[k]] += g.area * gphi.xi;
            d.v[tri[k]] += g.area * gphi.eta;
            wsum[tri[k]] += g.area;
        }
    }
    const double g1 = gp.gamma - 1.0;
    for (size_t i = 0; i < n; ++i) {
        const Point p = m.nodes[i];
        d.u[i] /= wsum[i];
        d.v[i] /= wsum[i];
        const Point grad_psi{d.u[i] - p.xi, d.v[i] - p.eta};
        const double bracket = gp.rho0_pow() - psi[i] - 0.5 * dot(grad_psi, grad_psi);
        if (bracket > 0.0) {
            d.rho[i] = std::pow(bracket, 1.0 / g1);
            d.c2[i] = g1 * bracket;
            d.margin[i] = 1.0 - dot(grad_psi, grad_psi) / d.c2[i];
        } else {
            d.rho[i] = std::numeric_limits<double>::quiet_NaN();
            d.c2[i] = 0.0;
            d.margin[i] = -1.0;
            ++d.cavitated;
        }
    }
    return d;
}

SolutionField::ElementDerived SolutionField::derive_elements(const GasParams& gp) const {
    // One entry per structured quad: the area-weighted gradient average of
    // the four crisscross sub-triangles.  Per-sub-triangle gradients carry
    // the crisscross checkerboard mode and are not used directly.
    const Mesh& m = *mesh;
    const size_t nq = m.tris.size() / 4;
    ElementDerived d;
    d.centroid.resize(nq);
    d.u.resize(nq);
    d.v.resize(nq);
    d.rho.resize(nq);
    d.c2.resize(nq);
    d.margin.resize(nq);
    d.phi.resize(nq);
    const double g1 = gp.gamma - 1.0;
    for (size_t q = 0; q < nq; ++q) {
        Point gphi{0.0, 0.0};
        double area = 0.0;
        double psic = 0.0;
        Point cen{0.0, 0.0};
        for (size_t t = 4 * q; t < 4 * q + 4; ++t) {
            const auto& tri = m.tris[t];
            const ElemGeom g = elem_geom(m, int(t));
            Point ge{0.0, 0.0};
            double pse = 0.0;
            Point ce{0.0, 0.0};
            for (int k = 0; k < 3; ++k) {
                const Point p = m.nodes[tri[k]];
                const double phik = psi[tri[k]] + 0.5 * dot(p, p);
                ge = ge + phik * g.grad[k];
                pse += psi[tri[k]] / 3.0;
                ce = ce + (1.0 / 3.0) * p;
            }
            gphi = gphi + g.area * ge;
            psic += g.area * pse;
            cen = cen + g.area * ce;
            area += g.area;
        }
        gphi = (1.0 / area) * gphi;
        psic /= area;
        cen = (1.0 / area) * cen;
        d.centroid[q] = cen;
        d.u[q] = gphi.xi;
        d.v[q] = gphi.eta;
        d.phi[q] = psic + 0.5 * dot(cen, cen);
        const Point grad_psi{gphi.xi - cen.xi, gphi.eta - cen.eta};
        const double bracket = gp.rho0_pow() - psic - 0.5 * dot(grad_psi, grad_psi);
        if (bracket > 0.0) {
            d.rho[q] = std::pow(bracket, 1.0 / g1);
            d.c2[q] = g1 * bracket;
            d.margin[q] = 1.0 - dot(grad_psi, grad_psi) / d.c2[q];
        } else {
            d.rho[q] = std::numeric_limits<double>::quiet_NaN();
            d.c2[q] = 0.0;
            d.margin[q] = -1.0;
            ++d.cavitated;
        }
    }
    return d;
}

SolutionField solve_bvp(std::shared_ptr<const Mesh> mesh, const BcSpec& bc,
                        const GasParams& gp, const PicardOptions& opt,
                        const Eigen::VectorXd* init) {
    const Mesh& m = *mesh;
    const int n = int(m.nodes.size());
    const DirichletSet d = dirichlet_nodes(m, bc);

    SolutionField f;
    f.mesh = mesh;
    f.psi = Eigen::VectorXd::Zero(n);
    f.eps_ell_used = opt.eps_ell;

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    bool analyzed = false;
    const auto factor_solve = [&](Assembled& as) {
        apply_dirichlet(as, d);
        if (!analyzed) {
            solver.analyzePattern(as.A);
            analyzed = true;
        }
        solver.factorize(as.A);
        if (solver.info() != Eigen::Success) {
            throw LinearSolveFailure("sparse factorization failed");
        }
        Eigen::VectorXd x = solver.solve(as.rhs);
        if (solver.info() != Eigen::Success) {
            throw LinearSolveFailure("sparse solve failed");
        }
        return x;
    };

    PicardOptions lin = opt;
    lin.frozen_rho = opt.frozen_rho ? opt.frozen_rho : std::optional<double>(gp.rho1);
    if (init && init->size() == n) {
        f.psi = *init;
    } else {
        // Start from the constant-density linear solve.
        Assembled as = assemble(m, f.psi, bc, gp, lin);
        f.psi = factor_solve(as);
    }
    if (opt.frozen_rho) {
        Assembled as = assemble(m, f.psi, bc, gp, lin);
        f.final_residual = free_node_residual(as, d, f.psi);
        f.converged = true;
        f.picard_iters = 1;
        return f;
    }

    for (int it = 0; it < opt.max_iters; ++it) {
        Assembled as = assemble(m, f.psi, bc, gp, opt);
        f.clamped_elements = as.clamped;
        if (as.clamped > opt.max_clamp_frac * double(m.tris.size())) {
            throw EllipticityLoss("ellipticity cutoff saturated on " +
                                  std::to_string(as.clamped) + " of " +
                                  std::to_string(m.tris.size()) + " elements");
        }
        const double res = free_node_residual(as, d, f.psi);
        f.residual_history.push_back(res);
        f.picard_iters = it + 1;
        if (res < opt.tol) {
            f.final_residual = res;
            f.converged = true;
            return f;
        }
        const Eigen::VectorXd next = factor_solve(as);
        f.psi = (1.0 - opt.relax) * f.psi + opt.relax * next;
    }
    Assembled as = assemble(m, f.psi, bc, gp, opt);
    f.final_residual = free_node_residual(as, d, f.psi);
    f.converged = f.final_residual < opt.tol;
    return f;
}

namespace {

BcSpec physical_bc(const DomainBuild& db, ShockBc mode, const GasParams& gp) {
    const states::StatePotential phi1 = db.phi1;
    const states::StatePotential phi2p = db.phi2p;
    const states::StatePotential phi2m = db.phi2m;
    const double rho1 = gp.rho1;
    BcSpec bc;
    bc.dirichlet = [phi1, phi2p, phi2m, mode](BoundaryTag tag,
                                              Point p) -> std::optional<double> {
        switch (tag) {
            case BoundaryTag::SonicPlus: return phi2p.eval_pseudo(p);
            case BoundaryTag::SonicMinus: return phi2m.eval_pseudo(p);
            case BoundaryTag::Shock:
                if (mode == ShockBc::DirichletPhi1) return phi1.eval_pseudo(p);
                return std::nullopt;
            default: return std::nullopt;
        }
    };
    if (mode == ShockBc::RhOblique) {
        // rho psi_n = rho1 grad(psi1) . n on the shock.  The curve is the
        // graph xi = f(eta); its outward (leftward) normal is
        // (-1, f'(eta)) / sqrt(1 + f'^2).
        const ShockCurve sc = db.shock;
        bc.flux = [phi1, rho1, sc](BoundaryTag tag, Point p) -> std::optional<double> {
            if (tag != BoundaryTag::Shock) return std::nullopt;
            const double h = 1e-6;
            const double fp = (sc.xi_at(p.eta + h) - sc.xi_at(p.eta - h)) / (2.0 * h);
            const double inv = 1.0 / std::sqrt(1.0 + fp * fp);
            const Point n{-inv, fp * inv};
            return rho1 * dot(phi1.grad_pseudo(p), n);
        };
    }
    return bc;
}

} // namespace

SolutionField solve_fixed_shock(const DomainBuild& db, ShockBc mode, const GasParams& gp,
                                const PicardOptions& opt, const Eigen::VectorXd* init) {
    return solve_bvp(db.mesh, physical_bc(db, mode, gp), gp, opt, init);
}

double weak_residual(const DomainBuild& db, const SolutionField& field, ShockBc mode,
                     const GasParams& gp, const PicardOptions& opt) {
    BcSpec bc = physical_bc(db, mode, gp);
    const Mesh& m = *db.mesh;
    const DirichletSet d = dirichlet_nodes(m, bc);
    Assembled as = assemble(m, field.psi, bc, gp, opt);
    return free_node_residual(as, d, field.psi);
}

} // namespace pde
} // namespace wedge
