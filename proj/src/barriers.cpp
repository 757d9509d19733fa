#include "wedgeflow/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wedge {
namespace barriers {

void SingularCoeffBounds::validate() const {
    if (!(lambda > 0.0) || !(Lambda >= lambda)) {
        throw DomainError("require 0 < lambda <= Lambda");
    }
    if (!(alpha > 0.0) || !(alpha < 1.0)) {
        throw DomainError("require 0 < alpha < 1");
    }
    if (!(C_E >= 0.0)) {
        throw DomainError("require C_E >= 0");
    }
    if (!(r0 > 0.0)) {
        throw DomainError("require r0 > 0");
    }
}

EpsA1 eps_A1(const SingularCoeffBounds& b) {
    b.validate();
    const double e4 = std::exp(-4.0);
    if (b.C_E == 0.0) {
        return {e4, false};
    }
    const double E = 4.0 / (M_PI * b.lambda * b.lambda) *
                     (1.0 + M_PI * b.C_E * b.C_E / b.alpha);
    const double pre = std::sqrt(b.alpha) / (8.0 * b.C_E * std::sqrt(M_PI));
    // (e^E - 1)^{-1/2} evaluated in log space to survive extreme lambda.
    double branch;
    if (E > 700.0) {
        branch = pre > 0.0 ? std::exp(std::log(pre) - 0.5 * E) : 0.0;
        if (branch == 0.0) {
            return {0.0, true};
        }
        return {std::min(branch, e4), false};
    }
    branch = pre / std::sqrt(std::expm1(E));
    return {std::min(branch, e4), false};
}

ConformalResult conformal_coeffs(const std::vector<CoeffSample>& samples, double Theta,
                                 double A, double alpha) {
    (void)alpha;
    ConformalResult out;
    out.eig_min = std::numeric_limits<double>::infinity();
    out.eig_max = -out.eig_min;
    out.b_bound = 0.0;
    const double q = Theta / A;
    for (const CoeffSample& s : samples) {
        const double w1 = s.a * (q - 1.0);
        const double w2 = s.a * (q - 2.0);
        const double c1 = std::cos(w1), s1 = std::sin(w1);
        const double c2 = std::cos(w2), s2 = std::sin(w2);
        // (a~) = q^2 P^T (a) P with P = [[c1, s1], [-s1, c1]].
        const double m11 = s.a11 * c1 - s.a12 * s1;
        const double m12 = s.a11 * s1 + s.a12 * c1;
        const double m21 = s.a12 * c1 - s.a22 * s1;
        const double m22 = s.a12 * s1 + s.a22 * c1;
        TransformedSample t;
        t.a11 = q * q * (c1 * m11 - s1 * m21);
        t.a12 = q * q * (c1 * m12 - s1 * m22);
        t.a22 = q * q * (s1 * m12 + c1 * m22);
        const double rpow = std::pow(s.r, -q);
        const double rpow1 = std::pow(s.r, 1.0 - q);
        t.b1 = q * (q - 1.0) * (c2 * s.a11 - 2.0 * s2 * s.a12 - c2 * s.a22) * rpow +
               q * rpow1 * (s.b1 * c1 - s.b2 * s1);
        t.b2 = q * (q - 1.0) * (s2 * s.a11 + 2.0 * c2 * s.a12 - s2 * s.a22) * rpow +
               q * rpow1 * (s.b1 * s1 + s.b2 * c1);
        t.b3 = s.b3 * std::pow(s.r, 2.0 - 2.0 * q);
        const double tr = t.a11 + t.a22;
        const double det = t.a11 * t.a22 - t.a12 * t.a12;
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        t.eig_min = 0.5 * tr - disc;
        t.eig_max = 0.5 * tr + disc;
        out.eig_min = std::min(out.eig_min, t.eig_min);
        out.eig_max = std::max(out.eig_max, t.eig_max);
        out.b_bound = std::max({out.b_bound, std::abs(t.b1), std::abs(t.b2)});
        out.samples.push_back(t);
    }
    return out;
}

double feasible_gamma_exp(double lambda, double Lambda, double C_b) {
    if (!(lambda > 0.0)) {
        // Quadratic 4 l g^2 - 4 (L + C) g - 1 has no positive root.
        throw ParameterInfeasible("no barrier exponent: lambda <= 0", Lambda + C_b);
    }
    const double LC = Lambda + C_b;
    return (LC + std::sqrt(LC * LC + lambda)) / (2.0 * lambda);
}

A2Verdict verify_A2_barrier(const SingularCoeffBounds& bounds, double C_b, double t,
                            double gamma_exp, double M, int grid_n) {
    bounds.validate();
    A2Verdict v;
    v.interior_ok = true;
    v.ray_ok = true;
    v.outer_ok = true;
    const double g = gamma_exp;
    const double A = bounds.cone_angle();
    const double Theta = 0.5 * bounds.alpha * A;
    const double rho0 = std::pow(bounds.r0, Theta / A);

    v.r0_condition_ok = true;
    if (C_b > 0.0) {
        v.r0_condition_ok = bounds.r0 <= std::exp(-9.0 * g) / (12.0 * g * C_b);
    }

    // Interior: worst-case differential expression divided by M s E.
    for (int i = 1; i <= grid_n && v.interior_ok; ++i) {
        const double rho = rho0 * i / double(grid_n);
        for (int j = 0; j <= grid_n; ++j) {
            const double th = Theta * j / double(grid_n);
            const Point p{rho * std::cos(th), rho * std::sin(th)};
            const double q1 = p.xi - t;
            const double q2 = p.eta + 1.0;
            const double qq = q1 * q1 + q2 * q2;
            const double zero_order = bounds.C_E * std::pow(rho, 2.0 / bounds.alpha);
            const double expr = 2.0 * g * (2.0 * bounds.Lambda - 2.0 * g * bounds.lambda * qq) +
                                2.0 * g * C_b * (std::abs(q1) + std::abs(q2)) +
                                zero_order * std::expm1(g * (qq - 1.0));
            if (expr > 0.0) {
                v.interior_ok = false;
                v.witness = p;
                v.failed_check = "interior differential inequality";
                break;
            }
        }
    }

    // Ray {theta = Theta}: outward slope of w^t must be nonnegative.
    for (int i = 1; i <= grid_n && v.ray_ok; ++i) {
        const double rho = rho0 * i / double(grid_n);
        const Point p{rho * std::cos(Theta), rho * std::sin(Theta)};
        const double dn = -(p.xi - t) * std::sin(Theta) + (p.eta + 1.0) * std::cos(Theta);
        if (dn < 0.0) {
            v.ray_ok = false;
            v.witness = p;
            v.failed_check = "ray slope condition";
        }
    }

    // Outer arc: w^t >= sup|h| under the normalization sup|h| = 1.
    for (int j = 0; j <= grid_n && v.outer_ok; ++j) {
        const double th = Theta * j / double(grid_n);
        const Point p{rho0 * std::cos(th), rho0 * std::sin(th)};
        const double q1 = p.xi - t;
        const double q2 = p.eta + 1.0;
        const double w = M * (1.0 - std::exp(-g * (q1 * q1 + q2 * q2 - 1.0)));
        if (w < 1.0) {
            v.outer_ok = false;
            v.witness = p;
            v.failed_check = "outer boundary comparison";
        }
    }

    v.ok = v.interior_ok && v.ray_ok && v.outer_ok && v.r0_condition_ok;
    if (!v.r0_condition_ok && v.failed_check.empty()) {
        v.failed_check = "r0 smallness condition";
    }
    return v;
}

namespace {

// Golden-section maximum of f on [lo, hi]; assumes unimodality, compares
// against the endpoint values.
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
        throw SearchFailure("golden-section evaluation not finite");
    }
    for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::abs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        }
    }
    return std::max({f(0.5 * (a + b)), f(lo), f(hi)});
}

double barrier_w(double x, double y, double g, double mu) {
    return y / std::pow(-std::log(y), g) - mu * x * x;
}

} // namespace

A3Verdict verify_A3(const SingularCoeffBounds& bounds, double gamma_log, double mu,
                    double eps, int grid_n) {
    bounds.validate();
    if (!(bounds.r0 < std::exp(-0.25))) {
        throw DomainError("A3 requires r0 below the e^{-1/4} guard");
    }
    A3Verdict v;
    v.interior_ok = true;
    v.outer_ok = true;
    v.ray_ok = true;
    const double g = gamma_log;
    const double r0 = bounds.r0;

    // Interior inequality after the sign-worst substitutions; everything
    // reduces to a one-dimensional expression in y sampled on a log grid.
    const double mu_terms = 2.0 * bounds.Lambda * mu +
                            2.0 * bounds.C_E * mu * std::pow(r0, bounds.alpha) +
                            bounds.C_E * mu * std::pow(r0, bounds.alpha + 1.0);
    for (int i = 0; i <= grid_n && v.interior_ok; ++i) {
        const double y = r0 * std::pow(1e-9, 1.0 - i / double(grid_n));
        const double L = -std::log(y);
        const double first = bounds.lambda * g / (y * std::pow(L, g + 1.0)) - mu_terms;
        const double second =
            (bounds.lambda * g * (g + 1.0) -
             bounds.C_E * std::pow(y, bounds.alpha) * L * L -
             bounds.C_E * g * std::pow(y, bounds.alpha) * L -
             bounds.C_E * std::pow(y, bounds.alpha + 1.0) * L * L) /
            (y * std::pow(L, g + 2.0));
        if (first + second < 0.0) {
            v.interior_ok = false;
            v.witness = Point{0.0, y};
            v.failed_check = "interior subsolution inequality";
        }
    }

    // Outer arc comparison chain, sampled over the cone angles.
    const double A = bounds.cone_angle();
    for (int j = 0; j <= grid_n && v.outer_ok; ++j) {
        const double phi = A * j / double(grid_n);
        const double x = r0 * std::cos(phi);
        const double y = r0 * std::sin(phi);
        if (!(y > 0.0)) continue;
        const double w = barrier_w(x, y, g, mu);
        bool ok = w <= y - eps;
        if (x >= 0.5 * r0) {
            ok = ok && (w <= y - mu * r0 * r0 / 4.0);
        } else {
            // w <= y/2 - mu x^2 and y/2 >= r0/4 close the displayed chain.
            ok = ok && (y / std::pow(-std::log(y), g) <= 0.5 * y) && (y >= 0.5 * r0);
        }
        if (!ok) {
            v.outer_ok = false;
            v.witness = Point{x, y};
            v.failed_check = "outer boundary comparison chain";
        }
    }

    // Oblique ray {a = A}: D_n w <= 0.
    for (int i = 1; i <= grid_n && v.ray_ok; ++i) {
        const double r = r0 * i / double(grid_n);
        const double x = r * std::cos(A);
        const double y = r * std::sin(A);
        if (!(y > 0.0) || !(y < 1.0)) continue;
        const double L = -std::log(y);
        const double wy = std::pow(L, -g) + g * std::pow(L, -g - 1.0);
        const double wx = -2.0 * mu * x;
        const double dn = -std::cos(bounds.sigma) * wx - std::sin(bounds.sigma) * wy;
        if (dn > 1e-14) {
            v.ray_ok = false;
            v.witness = Point{x, y};
            v.failed_check = "oblique ray slope condition";
        }
    }

    v.ok = v.interior_ok && v.outer_ok && v.ray_ok;
    return v;
}

A3Result barrier_A3(const SingularCoeffBounds& bounds, int grid_n) {
    bounds.validate();
    if (!(bounds.r0 < std::exp(-0.25))) {
        throw DomainError("A3 requires r0 below the e^{-1/4} guard");
    }
    A3Result res;
    const double r0 = bounds.r0;
    const double s_lo = -std::log(r0);

    // Suprema over y in (0, r0) via golden-section on s = -log y.
    const auto c1_fn = [&](double s) {
        const double y = std::exp(-s);
        return 2.0 * bounds.C_E * std::pow(y, bounds.alpha) * s / bounds.lambda;
    };
    const auto c2_fn = [&](double s) {
        const double y = std::exp(-s);
        return bounds.C_E *
               (std::pow(y, bounds.alpha) + std::pow(y, bounds.alpha + 1.0)) * s * s /
               bounds.lambda;
    };
    const double s_hi = std::max(s_lo + 1.0, 8.0 / bounds.alpha) + 40.0;
    res.C1 = golden_max(c1_fn, s_lo, s_hi);
    res.C2 = golden_max(c2_fn, s_lo, s_hi);
    res.gamma_log = std::max(res.C1, res.C2) + 1.0;

    const auto denom_fn = [&](double s) {
        return std::exp(-s) * std::pow(s, res.gamma_log + 1.0);
    };
    const double denom_sup = golden_max(denom_fn, s_lo, std::max(s_lo + 1.0, res.gamma_log + 1.0) + 60.0);
    res.mu = bounds.lambda * res.gamma_log /
             ((2.0 * bounds.Lambda + 3.0 * bounds.C_E + 1.0) * denom_sup);

    res.eps_A3 = std::min(r0 * r0 * res.mu / 4.0, r0 / 2.0);
    res.eps_A3_consistent = std::min(r0 * r0 * res.mu / 4.0, r0 / 4.0);
    res.eps_formula_mismatch = res.eps_A3 != res.eps_A3_consistent;
    res.r0_exceeds_eps_A1 = r0 > eps_A1(bounds).value;
    res.verdict = verify_A3(bounds, res.gamma_log, res.mu, res.eps_A3_consistent, grid_n);
    return res;
}

KSConstants ks_constants(double C_beta) {
    if (!(C_beta >= 1.0)) {
        throw DomainError("Krylov-Safonov constants require C_beta >= 1");
    }
    const double c4 = C_beta * C_beta * C_beta * C_beta;
    return {C_beta, 1.0 - 1.0 / (64.0 * c4), 1.0 / (64.0 * c4),
            1.0 / (4.0 * C_beta * C_beta)};
}

KsVerdict verify_ks_testfn(double C_beta, double eps, const std::vector<Point>& samples) {
    const KSConstants k = ks_constants(C_beta);
    KsVerdict v;
    v.eps_ok = eps <= k.eps_K;
    v.min_paper_bound = std::numeric_limits<double>::infinity();
    v.min_exact = v.min_paper_bound;
    v.ok = v.eps_ok;
    if (!v.eps_ok && !samples.empty()) {
        v.witness = samples.front();
    }
    for (const Point& p : samples) {
        const double gval = 1.0 - p.xi * p.xi - (p.eta - k.H) * (p.eta - k.H);
        if (gval < 0.0) continue;  // outside the test function's support
        const double paper = 1.0 / (2.0 * C_beta) - 2.0 * std::abs(p.xi) * C_beta;
        const double exact = -2.0 * std::abs(p.xi) * C_beta + 2.0 * (k.H - p.eta) / C_beta;
        v.min_paper_bound = std::min(v.min_paper_bound, paper);
        v.min_exact = std::min(v.min_exact, exact);
        if (paper < 0.0 && v.ok) {
            v.ok = false;
            v.witness = p;
        }
    }
    return v;
}

} // namespace barriers
} // namespace wedge
