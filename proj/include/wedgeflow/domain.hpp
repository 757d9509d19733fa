#ifndef WEDGEFLOW_DOMAIN_HPP
#define WEDGEFLOW_DOMAIN_HPP

#include <memory>
#include <string>
#include <vector>

#include "wedgeflow/geometry.hpp"
#include "wedgeflow/mesh.hpp"
#include "wedgeflow/states.hpp"

namespace wedge {
namespace pde {

// Free boundary as a single-valued graph xi = f(eta) on a fixed eta grid
// spanning [eta(J-), eta(J+)].
struct ShockCurve {
    std::vector<double> eta;
    std::vector<double> xi;

    double xi_at(double e) const;      // piecewise-linear evaluation
    double slope_at(int i) const;      // d xi / d eta at interior sample i
    std::vector<double> second_differences() const;
    void write_csv(const std::string& path) const;
};

// Cubic-Hermite initial shock from J- to J+, tangent to the straight
// reflected-shock lines at both ends.
ShockCurve initial_shock(const states::NonSymmetricStates& ns, int n_samples);

// Everything the solver needs about one (sigma0, delta) configuration.
struct DomainBuild {
    std::shared_ptr<const Mesh> mesh;
    ShockCurve shock;
    states::NonSymmetricStates ns;
    states::NormalReflection nr;
    states::StatePotential phi1;    // upstream potential, wedge frame
    states::StatePotential phi2p;
    states::StatePotential phi2m;
    geom::SonicArc arc_plus;
    geom::SonicArc arc_minus;
    Point wall_plus_end;   // sonic-circle crossing on the upper wall
    Point wall_minus_end;
    double sigma0;
    double delta;

    // Analytic boundary lengths (shock by fine quadrature of the curve).
    double analytic_arc_plus_len() const;
    double analytic_arc_minus_len() const;
    double wall_plus_len() const;
    double wall_minus_len() const;
};

// Meshes the region bounded by the shock curve, the two sonic arcs and the
// two wall segments.  `resolution` is the approximate element count.
DomainBuild build_domain(const GasParams& gp, double sigma0, double delta, int resolution);

// Same, but with an externally supplied shock curve (used by the free
// boundary iteration when re-meshing around an updated front).
DomainBuild build_domain_with_shock(const GasParams& gp, double sigma0, double delta,
                                    int resolution, const ShockCurve& shock);

} // namespace pde
} // namespace wedge

#endif
