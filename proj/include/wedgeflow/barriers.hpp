#ifndef WEDGEFLOW_BARRIERS_HPP
#define WEDGEFLOW_BARRIERS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wedgeflow/errors.hpp"
#include "wedgeflow/gasdyn.hpp"

namespace wedge {
namespace barriers {

// Coefficient bounds of the linear singular-coefficient operators near a
// cone corner of opening A = pi/2 + sigma:
//   lambda <= (a_ij) <= Lambda,  |a_ij - delta_ij| <= C_E r^alpha,
//   |b| <= C_E r^{alpha-1}.
struct SingularCoeffBounds {
    double lambda;
    double Lambda;
    double C_E;
    double alpha;
    double r0;
    double sigma = 0.0;

    void validate() const;
    double cone_angle() const { return M_PI / 2.0 + sigma; }
};

struct EpsA1 {
    double value;
    bool overflowed;  // exponential branch underflowed; value clamped to 0
};

// eps_A1 = min{ sqrt(alpha)/(8 C_E sqrt(pi)) *
//               (exp(4(1 + pi C_E^2/alpha)/(pi lambda^2)) - 1)^{-1/2}, e^{-4} }.
EpsA1 eps_A1(const SingularCoeffBounds& b);

// One coefficient sample in polar form and its conformal image.
struct CoeffSample {
    double r;
    double a;  // polar angle within the cone
    double a11, a12, a22;
    double b1, b2, b3;
};
struct TransformedSample {
    double a11, a12, a22;
    double b1, b2, b3;
    double eig_min, eig_max;
};
struct ConformalResult {
    std::vector<TransformedSample> samples;
    double eig_min;   // over all samples
    double eig_max;
    double b_bound;   // measured sup |b~_i|
};

// (a~) = (Theta/A)^2 P^T (a) P with P the angle-dependent rotation; b~ per
// the mapped first-order displays.  Theta = alpha*A/2 gives the claimed
// lambda alpha^2/4 <= (a~) <= Lambda alpha^2/4 bounds.
ConformalResult conformal_coeffs(const std::vector<CoeffSample>& samples, double Theta,
                                 double A, double alpha);

// Smallest exponent satisfying -4 g^2 lambda + 4 Lambda g + 4 C g + 1 < 0.
// Throws ParameterInfeasible when lambda <= 0.
double feasible_gamma_exp(double lambda, double Lambda, double C_b);

struct A2Verdict {
    bool ok;
    bool interior_ok;
    bool ray_ok;
    bool outer_ok;
    bool r0_condition_ok;  // r0 <= e^{-9g}/(12 g C)
    std::optional<Point> witness;
    std::string failed_check;
};

// Grid verification of the exponential barrier
//   w^t = M [1 - e^{-g[(xi-t)^2+(eta+1)^2-1]}] sup|h|
// in the conformally mapped wedge of opening Theta = alpha*A/2 and radius
// rho0 = r0^{alpha/2}: worst-case differential inequality at interior
// samples, slope condition on the ray, and w^t >= sup|h| on the outer arc.
// bounds.lambda/Lambda are the mapped operator's ellipticity bounds; C_b the
// mapped first-order bound.
A2Verdict verify_A2_barrier(const SingularCoeffBounds& bounds, double C_b, double t,
                            double gamma_exp, double M, int grid_n = 200);

struct A3Verdict {
    bool ok;
    bool interior_ok;
    bool outer_ok;   // barrier-vs-(y - eps) chain on the outer arc
    bool ray_ok;     // D_n w <= 0 on the oblique ray
    std::optional<Point> witness;
    std::string failed_check;
};

struct A3Result {
    double gamma_log;
    double mu;
    double C1;
    double C2;
    double eps_A3;             // min{r0^2 mu/4, r0/2} as displayed
    double eps_A3_consistent;  // min{r0^2 mu/4, r0/4} used by the argument
    bool eps_formula_mismatch; // the two candidates differ
    bool r0_exceeds_eps_A1;    // flagged, not fatal
    A3Verdict verdict;
};

// Log-power barrier w = y/(-log y)^gamma - mu x^2: constants via
// golden-section suprema, then grid verification of the subsolution
// inequality and the boundary comparison chain.
A3Result barrier_A3(const SingularCoeffBounds& bounds, int grid_n = 200);

// Verification at externally chosen (gamma, mu); used to probe perturbed
// exponents.
A3Verdict verify_A3(const SingularCoeffBounds& bounds, double gamma_log, double mu,
                    double eps, int grid_n = 200);

struct KSConstants {
    double C_beta;
    double H;       // 1 - 1/(64 C^4)
    double eps_K;   // 1/(64 C^4)
    double r_K;     // 1/(4 C^2)
};

KSConstants ks_constants(double C_beta);

struct KsVerdict {
    bool ok;
    bool eps_ok;            // eps <= eps_K
    double min_paper_bound; // min over samples of 1/(2C) - 2|x| C
    double min_exact;       // min over samples of -2|x|C + 2(H-y)/C
    std::optional<Point> witness;
};

// Worst-case directional-derivative check of g = 1 - x^2 - (y-H)^2 on
// Lipschitz boundary samples, over all beta with |beta1| <= C, beta2 >= 1/C.
KsVerdict verify_ks_testfn(double C_beta, double eps, const std::vector<Point>& samples);

} // namespace barriers
} // namespace wedge

#endif
