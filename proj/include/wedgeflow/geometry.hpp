#ifndef WEDGEFLOW_GEOMETRY_HPP
#define WEDGEFLOW_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "wedgeflow/gasdyn.hpp"
#include "wedgeflow/states.hpp"

namespace wedge {
namespace geom {

// The four canonical orientations used throughout.  Rotation angles are
// measured counterclockwise relative to the symmetric-wedge frame.
enum class Frame {
    SymmetricWedge,   // wedge axis along +xi, upstream flow at angle delta
    FlowAligned,      // upstream flow along +xi
    WallPlusVertical, // upper wedge wall along +eta
    ShockNormalH      // upper reflected-shock line along +eta
};

struct WedgeConfig {
    double sigma0;
    double delta;
    Frame frame = Frame::SymmetricWedge;

    void validate() const;
    // Rotation carrying the symmetric-wedge frame into `to`.  theta_plus is
    // the shock/wall angle of the sigma0+delta solve (only used by
    // ShockNormalH).
    double frame_angle(Frame to, double theta_plus) const;
};

// Circular arc: center, radius, angular window [alpha_lo, alpha_hi].
struct SonicArc {
    Point center;
    double radius;
    double alpha_lo;
    double alpha_hi;
    Frame frame = Frame::SymmetricWedge;

    Point at(double alpha) const {
        return {center.xi + radius * std::cos(alpha),
                center.eta + radius * std::sin(alpha)};
    }
    std::vector<Point> sample(int n) const;
};

// Straight reflected-shock line: anchor on the symmetry axis, unit direction.
struct ShockRay {
    Point anchor;
    Point direction;
    Frame frame = Frame::SymmetricWedge;

    Point at(double t) const { return anchor + t * direction; }
    double slope_dxi_deta() const { return direction.xi / direction.eta; }
};

// Witness-carrying predicate result.
struct ClearanceReport {
    bool predicate = false;
    double clearance = 0.0;  // minimal signed vertical clearance
    Point witness{};
    double shock_clearance = 0.0;  // min distance, reflected minus-shock ray
    Point shock_witness{};
};

// The parametrization constant alpha0 = pi/2 - arccos(Z/c2)/2 of the sonic
// arc angular window.
double arc_alpha0(double Z, double c2);

// J from the circle / potential-continuity system of the symmetric solve.
// Throws NoIntersection when the discriminant is nonpositive.
Point sonic_intersection(const states::RegularReflection& rr, const GasParams& gp);

// Sonic arc of the plus (upper) state in the wedge frame: from the wall
// crossing to J_plus.
SonicArc sonic_arc_plus(const states::NonSymmetricStates& ns);
// Same for the minus (lower) state: from J_minus to the wall crossing.
SonicArc sonic_arc_minus(const states::NonSymmetricStates& ns);

// Straight reflected-shock lines through J+- in the wedge frame.
ShockRay shock_ray_plus(const states::NonSymmetricStates& ns);
ShockRay shock_ray_minus(const states::NonSymmetricStates& ns);

// eta -> -eta.  Objects must be expressed in the symmetric-wedge frame.
Point reflect_across_axis(Point p, Frame frame = Frame::SymmetricWedge);
SonicArc reflect_across_axis(const SonicArc& arc);
ShockRay reflect_across_axis(const ShockRay& ray);

// Fig-12 configuration check: the plus arc stays above the reflected minus
// arc, and the reflected minus shock ray keeps clear of the plus arc.
ClearanceReport relative_position(const SonicArc& plus, const SonicArc& minus_reflected,
                                  const ShockRay& minus_shock_reflected, int samples = 256);

struct ShiftedSonic {
    Point J_hat_plus;
    Point J_hat_minus;
    SonicArc arc_hat_plus;
    SonicArc arc_hat_minus;
    Point shift_plus;   // subtracted from the plus objects
    Point shift_minus;  // subtracted from the minus objects
};

// J_hat+- = J+- - (+-u1 sin d tan s0, u1 sin d), arcs shifted the same way.
ShiftedSonic shifted_sonic(const states::NonSymmetricStates& ns, const GasParams& gp);

// Rigid rotation about the corner between canonical frames.
Point frame_transform(Point p, const WedgeConfig& cfg, Frame from, Frame to,
                      double theta_plus = 0.0);
SonicArc frame_transform(const SonicArc& arc, const WedgeConfig& cfg, Frame to,
                         double theta_plus = 0.0);
ShockRay frame_transform(const ShockRay& ray, const WedgeConfig& cfg, Frame to,
                         double theta_plus = 0.0);

// Tagged polyline row for CSV export.
struct TaggedPoint {
    Point p;
    std::string tag;
};

void export_polylines_csv(const std::vector<TaggedPoint>& rows, const std::string& path);

} // namespace geom
} // namespace wedge

#endif
