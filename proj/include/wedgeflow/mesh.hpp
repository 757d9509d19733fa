#ifndef WEDGEFLOW_MESH_HPP
#define WEDGEFLOW_MESH_HPP

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "wedgeflow/gasdyn.hpp"

namespace wedge {
namespace pde {

enum class BoundaryTag { Shock, SonicPlus, SonicMinus, WedgePlus, WedgeMinus };

struct BoundaryEdge {
    int a, b;  // ordered so the domain lies right of a -> b
    BoundaryTag tag;
};

// Conforming triangulation of the reflection region, built from a
// structured (ns+1) x (nt+1) transfinite map.  s runs from the shock (s=0)
// to the wedge wall (s=1), t from the lower sonic arc (t=0) to the upper
// one (t=1); the wedge corner sits exactly at (s, t) = (1, 1/2).
struct Mesh {
    std::vector<Point> nodes;
    std::vector<std::array<int, 3>> tris;
    std::vector<BoundaryEdge> boundary;
    int ns = 0;
    int nt = 0;

    int node_id(int i, int j) const { return j * (ns + 1) + i; }
    int corner_node() const { return node_id(ns, nt / 2); }

    double tri_area(int t) const;
    double min_angle_deg() const;
    double typical_h() const;
    std::vector<int> nodes_with_tag(BoundaryTag tag) const;
    std::vector<Point> boundary_polygon(int oversample = 1) const;
};

using CurveFn = std::function<Point(double)>;

// Coons-patch mesh of the curvilinear quad (left, right, bottom, top); each
// cell is split along the diagonal that maximizes the minimum angle.
// Tags: {left, right lower half, right upper half, bottom, top}.
// min_angle_deg below `quality_floor` raises MeshQualityError.
Mesh build_transfinite(const CurveFn& left, const CurveFn& right, const CurveFn& bottom,
                       const CurveFn& top, int ns, int nt,
                       const std::array<BoundaryTag, 5>& tags,
                       double quality_floor = 20.0);

// Nodal parameter grids with mild geometric clustering (ratio 0.7, two
// levels) toward the wedge corner: t toward 1/2, s toward 1.
std::vector<double> graded_t_nodes(int nt);
std::vector<double> graded_s_nodes(int ns);

// Brute-force-with-bins point location + P1 interpolation.
class FieldSampler {
public:
    FieldSampler(std::shared_ptr<const Mesh> mesh, int bins = 64);

    // Element containing p, or -1.
    int locate(Point p) const;
    bool inside(Point p) const { return locate(p) >= 0; }
    // P1 interpolation of nodal values; throws DomainError if p is outside.
    double interpolate(const std::vector<double>& nodal, Point p) const;
    // Gradient of the P1 interpolant in the containing element.
    Point gradient(const std::vector<double>& nodal, Point p) const;

private:
    std::shared_ptr<const Mesh> mesh_;
    int bins_;
    double x0_, y0_, dx_, dy_;
    std::vector<std::vector<int>> cells_;
};

} // namespace pde
} // namespace wedge

#endif
