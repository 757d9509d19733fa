#include "wedgeflow/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wedgeflow/errors.hpp"

namespace wedge {
namespace pde {

double Mesh::tri_area(int t) const {
    const Point& a = nodes[tris[t][0]];
    const Point& b = nodes[tris[t][1]];
    const Point& c = nodes[tris[t][2]];
    return 0.5 * ((b.xi - a.xi) * (c.eta - a.eta) - (c.xi - a.xi) * (b.eta - a.eta));
}

namespace {

double tri_min_angle(const Point& a, const Point& b, const Point& c) {
    const double la = norm(c - b), lb = norm(a - c), lc = norm(b - a);
    const auto ang = [](double opp, double s1, double s2) {
        const double cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        return std::acos(std::clamp(cosv, -1.0, 1.0));
    };
    return std::min({ang(la, lb, lc), ang(lb, lc, la), ang(lc, la, lb)}) * 180.0 / M_PI;
}

} // namespace

double Mesh::min_angle_deg() const {
    double m = 180.0;
    for (const auto& t : tris) {
        m = std::min(m, tri_min_angle(nodes[t[0]], nodes[t[1]], nodes[t[2]]));
    }
    return m;
}

double Mesh::typical_h() const {
    double area = 0.0;
    for (size_t t = 0; t < tris.size(); ++t) area += std::abs(tri_area(int(t)));
    return std::sqrt(2.0 * area / double(tris.size()));
}

std::vector<int> Mesh::nodes_with_tag(BoundaryTag tag) const {
    std::vector<char> mark(nodes.size(), 0);
    for (const auto& e : boundary) {
        if (e.tag == tag) {
            mark[e.a] = 1;
            mark[e.b] = 1;
        }
    }
    std::vector<int> out;
    for (size_t i = 0; i < mark.size(); ++i) {
        if (mark[i]) out.push_back(int(i));
    }
    return out;
}

std::vector<Point> Mesh::boundary_polygon(int oversample) const {
    (void)oversample;
    // Boundary edges are stored side by side in traversal order; chain them.
    std::vector<Point> poly;
    for (const auto& e : boundary) poly.push_back(nodes[e.a]);
    return poly;
}

namespace {

std::vector<double> graded_nodes_toward(int n, bool toward_end) {
    // Interval widths: uniform with two geometric levels (ratio 0.7) at the
    // refined end; normalized afterward.
    std::vector<double> w(n, 1.0);
    if (n >= 4) {
        if (toward_end) {
            w[n - 1] = 0.49;
            w[n - 2] = 0.7;
        } else {
            w[0] = 0.49;
            w[1] = 0.7;
        }
    }
    std::vector<double> x(n + 1, 0.0);
    for (int i = 0; i < n; ++i) x[i + 1] = x[i] + w[i];
    for (auto& v : x) v /= x[n];
    return x;
}

} // namespace

std::vector<double> graded_s_nodes(int ns) { return graded_nodes_toward(ns, true); }

std::vector<double> graded_t_nodes(int nt) {
    // Uniform across rows: grading the t-direction would modulate the free
    // boundary rows and leave a spurious wiggle in the front at the fixed
    // point.  Corner refinement comes from the s-grading toward the wall.
    if (nt % 2 != 0) ++nt;
    std::vector<double> x(nt + 1);
    for (int j = 0; j <= nt; ++j) x[j] = j / double(nt);
    return x;
}

Mesh build_transfinite(const CurveFn& left, const CurveFn& right, const CurveFn& bottom,
                       const CurveFn& top, int ns, int nt,
                       const std::array<BoundaryTag, 5>& tags, double quality_floor) {
    if (nt % 2 != 0) ++nt;
    Mesh m;
    m.ns = ns;
    m.nt = nt;
    const std::vector<double> svals = graded_s_nodes(ns);
    const std::vector<double> tvals = graded_t_nodes(nt);

    const Point c00 = bottom(0.0), c10 = bottom(1.0), c01 = top(0.0), c11 = top(1.0);
    m.nodes.resize((ns + 1) * (nt + 1));
    for (int j = 0; j <= nt; ++j) {
        const double t = tvals[j];
        const Point L = left(t), R = right(t);
        for (int i = 0; i <= ns; ++i) {
            const double s = svals[i];
            const Point B = bottom(s), T = top(s);
            Point p = (1.0 - s) * L + s * R + (1.0 - t) * B + t * T;
            const Point corr = (1.0 - s) * (1.0 - t) * c00 + s * (1.0 - t) * c10 +
                               (1.0 - s) * t * c01 + s * t * c11;
            p = p - corr;
            m.nodes[m.node_id(i, j)] = p;
        }
    }

    // Crisscross split: four triangles through a center node per quad.
    // The stencil is mirror-symmetric and row-uniform, so no diagonal seam
    // modulates the free boundary or the symmetry axis.
    m.nodes.resize(size_t(ns + 1) * (nt + 1) + size_t(ns) * nt);
    for (int j = 0; j < nt; ++j) {
        for (int i = 0; i < ns; ++i) {
            const int n00 = m.node_id(i, j), n10 = m.node_id(i + 1, j);
            const int n01 = m.node_id(i, j + 1), n11 = m.node_id(i + 1, j + 1);
            const int nc = int(size_t(ns + 1) * (nt + 1)) + j * ns + i;
            m.nodes[nc] = 0.25 * (m.nodes[n00] + m.nodes[n10] + m.nodes[n01] + m.nodes[n11]);
            m.tris.push_back({n00, n10, nc});
            m.tris.push_back({n10, n11, nc});
            m.tris.push_back({n11, n01, nc});
            m.tris.push_back({n01, n00, nc});
        }
    }

    // Boundary edges in traversal order (domain kept on the right of
    // a -> b): left edge upward, top edge toward the wall, right edge
    // downward, bottom edge back toward the left edge.
    for (int j = 0; j < nt; ++j) {
        m.boundary.push_back({m.node_id(0, j), m.node_id(0, j + 1), tags[0]});
    }
    for (int i = 0; i < ns; ++i) {
        m.boundary.push_back({m.node_id(i, nt), m.node_id(i + 1, nt), tags[4]});
    }
    for (int j = nt - 1; j >= 0; --j) {
        const BoundaryTag tag = (j >= nt / 2) ? tags[2] : tags[1];
        m.boundary.push_back({m.node_id(ns, j + 1), m.node_id(ns, j), tag});
    }
    for (int i = ns - 1; i >= 0; --i) {
        m.boundary.push_back({m.node_id(i + 1, 0), m.node_id(i, 0), tags[3]});
    }

    for (size_t t = 0; t < m.tris.size(); ++t) {
        if (!(m.tri_area(int(t)) > 0.0)) {
            throw MeshQualityError("transfinite map produced an inverted element");
        }
    }
    const double q = m.min_angle_deg();
    if (q < quality_floor) {
        throw MeshQualityError("mesh minimum angle " + std::to_string(q) +
                               " below floor " + std::to_string(quality_floor));
    }
    return m;
}

FieldSampler::FieldSampler(std::shared_ptr<const Mesh> mesh, int bins)
    : mesh_(std::move(mesh)), bins_(bins) {
    double x1 = std::numeric_limits<double>::infinity(), y1 = x1;
    double x2 = -x1, y2 = -x1;
    for (const Point& p : mesh_->nodes) {
        x1 = std::min(x1, p.xi);
        y1 = std::min(y1, p.eta);
        x2 = std::max(x2, p.xi);
        y2 = std::max(y2, p.eta);
    }
    x0_ = x1;
    y0_ = y1;
    dx_ = (x2 - x1) / bins_;
    dy_ = (y2 - y1) / bins_;
    cells_.resize(size_t(bins_) * bins_);
    for (size_t t = 0; t < mesh_->tris.size(); ++t) {
        const auto& tri = mesh_->tris[t];
        double tx1 = x2, ty1 = y2, tx2 = x1, ty2 = y1;
        for (int k = 0; k < 3; ++k) {
            const Point& p = mesh_->nodes[tri[k]];
            tx1 = std::min(tx1, p.xi);
            ty1 = std::min(ty1, p.eta);
            tx2 = std::max(tx2, p.xi);
            ty2 = std::max(ty2, p.eta);
        }
        const int i1 = std::clamp(int((tx1 - x0_) / dx_), 0, bins_ - 1);
        const int i2 = std::clamp(int((tx2 - x0_) / dx_), 0, bins_ - 1);
        const int j1 = std::clamp(int((ty1 - y0_) / dy_), 0, bins_ - 1);
        const int j2 = std::clamp(int((ty2 - y0_) / dy_), 0, bins_ - 1);
        for (int j = j1; j <= j2; ++j) {
            for (int i = i1; i <= i2; ++i) {
                cells_[size_t(j) * bins_ + i].push_back(int(t));
            }
        }
    }
}

int FieldSampler::locate(Point p) const {
    const int i = int((p.xi - x0_) / dx_);
    const int j = int((p.eta - y0_) / dy_);
    if (i < 0 || i >= bins_ || j < 0 || j >= bins_) return -1;
    for (int t : cells_[size_t(j) * bins_ + i]) {
        const auto& tri = mesh_->tris[t];
        const Point& a = mesh_->nodes[tri[0]];
        const Point& b = mesh_->nodes[tri[1]];
        const Point& c = mesh_->nodes[tri[2]];
        const double det = (b.xi - a.xi) * (c.eta - a.eta) - (c.xi - a.xi) * (b.eta - a.eta);
        const double l1 = ((p.xi - a.xi) * (c.eta - a.eta) - (c.xi - a.xi) * (p.eta - a.eta)) / det;
        const double l2 = ((b.xi - a.xi) * (p.eta - a.eta) - (p.xi - a.xi) * (b.eta - a.eta)) / det;
        const double tol = -1e-11;
        if (l1 >= tol && l2 >= tol && (1.0 - l1 - l2) >= tol) return t;
    }
    return -1;
}

double FieldSampler::interpolate(const std::vector<double>& nodal, Point p) const {
    const int t = locate(p);
    if (t < 0) throw DomainError("interpolation point outside the mesh");
    const auto& tri = mesh_->tris[t];
    const Point& a = mesh_->nodes[tri[0]];
    const Point& b = mesh_->nodes[tri[1]];
    const Point& c = mesh_->nodes[tri[2]];
    const double det = (b.xi - a.xi) * (c.eta - a.eta) - (c.xi - a.xi) * (b.eta - a.eta);
    const double l1 = ((p.xi - a.xi) * (c.eta - a.eta) - (c.xi - a.xi) * (p.eta - a.eta)) / det;
    const double l2 = ((b.xi - a.xi) * (p.eta - a.eta) - (p.xi - a.xi) * (b.eta - a.eta)) / det;
    const double l0 = 1.0 - l1 - l2;
    return l0 * nodal[tri[0]] + l1 * nodal[tri[1]] + l2 * nodal[tri[2]];
}

Point FieldSampler::gradient(const std::vector<double>& nodal, Point p) const {
    const int t = locate(p);
    if (t < 0) throw DomainError("gradient point outside the mesh");
    const auto& tri = mesh_->tris[t];
    const Point& a = mesh_->nodes[tri[0]];
    const Point& b = mesh_->nodes[tri[1]];
    const Point& c = mesh_->nodes[tri[2]];
    const double det = (b.xi - a.xi) * (c.eta - a.eta) - (c.xi - a.xi) * (b.eta - a.eta);
    const double fa = nodal[tri[0]], fb = nodal[tri[1]], fc = nodal[tri[2]];
    return {(fb - fa) * (c.eta - a.eta) / det - (fc - fa) * (b.eta - a.eta) / det,
            -(fb - fa) * (c.xi - a.xi) / det + (fc - fa) * (b.xi - a.xi) / det};
}

} // namespace pde
} // namespace wedge
