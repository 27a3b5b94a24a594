// Bowl solitons for cylindrical anisotropies phi(x,z) = F(xi(x), z),
// psi(x,z) = G(xi(x), z): the profile ODE solved by shooting, the comparison
// curve alpha(r), and the polar factorization check.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aniso/norm.hpp"
#include "aniso/xi.hpp"

namespace aniso {

struct CylindricalAnisotropy {
    PlanarNorm F;  // surface-tension factor
    PlanarNorm G;  // mobility factor
    int N = 2;     // dimension of the horizontal space
    XiDescriptor xi;

    CylindricalAnisotropy(PlanarNorm F_, PlanarNorm G_, int N_, XiDescriptor xi_);
};

// f(alpha) = 1 / (G(alpha,1) F_t(alpha,1)); strictly decreasing on (0, inf).
double f_eval(const PlanarNorm& F, const PlanarNorm& G, double alpha);

// Solves f(alpha) = y by bisection on a geometrically grown bracket.
double f_inverse(const PlanarNorm& F, const PlanarNorm& G, double y);

// alpha(r) = f^{-1}((N-1)/r), the level where the profile derivative vanishes.
double alpha_of_r(const PlanarNorm& F, const PlanarNorm& G, int N, double r);

struct BowlDiagnostics {
    std::vector<double> rhos;
    std::vector<double> sup_diffs;  // consecutive shooting profile differences
    int refinements = 0;
    bool converged = false;
};

struct BowlProfile {
    std::vector<double> r, w, dw;  // ascending grid on [rho_final, R_max]
    std::vector<double> alpha;     // alpha(r) at the grid nodes
    double R_max = 0;
    double asym_slope = 0;  // w(R_max) / R_max
    BowlDiagnostics diag;

    double w_at(double rq) const;  // cubic Hermite
    double u_at(double s) const;   // integral of w from 0 (w extended by 0 below the grid)

private:
    friend BowlProfile bowl_profile(const CylindricalAnisotropy&, double, double);
    std::vector<double> ucum_;  // cumulative trapezoid of w
};

constexpr double kBowlDefaultTol = 1e-7;

// Shooting construction: profiles started at w(rho_k) = alpha(rho_k)/2 for
// rho_k = 2^{-k}, refined until consecutive profiles are tol-close in sup norm
// on [1, R_max] and the starting value has dropped below 1e-4.
BowlProfile bowl_profile(const CylindricalAnisotropy& a, double R_max,
                         double tol = kBowlDefaultTol);

// Trapezoidal integral of w from 0 to s (s = xi^0(x)); rejects s > R_max.
double bowl_u_eval(const BowlProfile& p, double s);

// Right-hand side of the profile ODE; exposed for the isotropic reduction check.
double bowl_rhs(const PlanarNorm& F, const PlanarNorm& G, int N, double r, double w);

// Compares the sampled dual of the slice norm t -> F(xi(e) t, z) with the
// factored dual F^0 evaluated at the dual-sliced argument, over random
// directions e and sample points. For euclidean xi this is exactly the polar
// factorization phi^0(x,z) = F^0(xi^0(x), z) restricted to planes through the
// z-axis. Returns the max relative deviation.
double polar_factor_check(const PlanarNorm& F, const PlanarNorm& xi, int samples,
                          std::uint64_t seed = 0x5eed5eedULL);

// Smoothed-limit path for non-smooth F, G: mirrors approx_limit.
struct BowlApproxReport {
    std::vector<double> epsilons;
    std::vector<double> sup_diffs;
    std::vector<double> asym_slopes;
    bool cauchy_ok = true;
};

struct BowlApproxResult {
    BowlProfile finest;
    BowlApproxReport report;
};

BowlApproxResult bowl_approx_limit(const CylindricalAnisotropy& a, std::vector<double> epsilons,
                                   double R_max, double tol = kBowlDefaultTol);

}  // namespace aniso
