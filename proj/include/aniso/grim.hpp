// Grim reapers: the planar translator profile ODE, its maximal interval,
// residual and Wulff-inscription verification, and the lifts to higher
// dimension and tilted variants.
//
// No entire Lipschitz graph translates with nonzero speed under a regular
// anisotropy (such a graph is necessarily a stationary half-space), so every
// profile here lives on a bounded maximal interval with vertical asymptotes,
// and the higher-dimensional graphs on slabs.
#pragma once

#include <span>
#include <string>
#include <vector>

#include "aniso/norm.hpp"
#include "aniso/wulff.hpp"
#include "aniso/xi.hpp"

namespace aniso {

constexpr double kGrimDefaultTol = 1e-10;
constexpr double kGrimVMax = 1e6;  // slope threshold treated as blow-up

struct GrimDiagnostics {
    double fbar_min = 0, fbar_max = 0;  // extremes of f(v) seen by the solver
    bool v_threshold_pos = false, v_threshold_neg = false;
    double tail_pos = 0, tail_neg = 0;  // extrapolated interval remainders
    std::size_t steps = 0;
};

struct GrimProfile {
    std::string phi_desc, psi_desc;
    double c = 1.0;
    std::vector<double> x, v, u;  // ascending grid, v = u'
    std::vector<double> dv;       // v'(x) at the nodes (for interpolation)
    double a = 0, b = 0;          // estimated maximal interval (a, b)
    GrimDiagnostics diag;

    double u_at(double xq) const;  // cubic Hermite on the stored grid
    double v_at(double xq) const;
    double length() const { return b - a; }
};

// Solves v' = (1+v^2)/f(v), u' = v with u(0) = v(0) = 0 for unit speed, then
// dilates to speed c > 0. tol in [1e-12, 1e-3].
GrimProfile reaper_profile(const PlanarNorm& phi, const PlanarNorm& psi, double c = 1.0,
                           double tol = kGrimDefaultTol);

// Upper bound 4 (phi(1,0) + phi(0,1)) max_{S^1} psi on the unit-speed interval.
double interval_bound(const PlanarNorm& phi, const PlanarNorm& psi);

struct ResidualReport {
    double max_abs = 0;
    double x_at_max = 0;
    double spacing = 0;  // largest grid spacing of the profile
};

// Max over interior grid points of psi(-v,1) * d/dx[phi_x(-v,1)] + c.
ResidualReport reaper_residual(const GrimProfile& p, const PlanarNorm& phi,
                               const PlanarNorm& psi);

struct InscriptionPoint {
    double x0 = 0;
    bool pass = false;
    double worst = 0;  // most negative epigraph margin over the sampled body
};

struct InscriptionReport {
    std::vector<InscriptionPoint> points;
    bool all_pass = true;
    double c = 0;
};

// Places the translated Wulff body c*W tangent from above at sampled graph
// points and verifies containment in the epigraph. Requires
// 0 <= c < min_{S^1} psi / profile speed.
InscriptionReport wulff_inscription_check(const GrimProfile& p, const PlanarNorm& phi,
                                          const PlanarNorm& psi, double c,
                                          int graph_samples = 33, int wulff_samples = 256);

// Profile checks shared by tests and the verification CLI.
bool v_strictly_increasing(const GrimProfile& p);
double u_convexity_defect(const GrimProfile& p);  // min difference of consecutive slopes

// --- higher-dimensional lifts -------------------------------------------------

// Planar projection of a cylindrical anisotropy along direction e:
// phi^e(t, z) = F(xi(e) |t|, z), which needs only the scalar xi(e).
PlanarNorm cylindrical_slice(const PlanarNorm& F, double xi_e);

// Translator graph u_e(x . e) over the slab {a < x . e < b}.
class NdReaper {
public:
    NdReaper(PlanarNorm phi_slice, PlanarNorm psi_slice, std::vector<double> e, double c = 1.0,
             double tol = kGrimDefaultTol);

    double eval(std::span<const double> x) const;  // throws std::domain_error outside the slab
    const GrimProfile& profile() const { return profile_; }

private:
    std::vector<double> e_;
    GrimProfile profile_;
};

// Tilted translator v(x) = u(x . e) + lambda (x . t) with t orthogonal to e.
// u solves the planar problem for the sliced pair
//   chi(a, z)   = F(xi_phi(a e - lambda z t), z)
//   omega(a, z) = G(xi_psi(a e - lambda z t), z),
// so the slab residual of the full equation is exactly the planar residual of
// (chi, omega).
class TiltedReaper {
public:
    TiltedReaper(const PlanarNorm& F, const PlanarNorm& G, const XiDescriptor& xi_phi,
                 const XiDescriptor& xi_psi, std::vector<double> e, std::vector<double> t,
                 double lambda, double c = 1.0, double tol = kGrimDefaultTol);

    double eval(std::span<const double> x) const;
    const GrimProfile& profile() const { return profile_; }
    const PlanarNorm& chi() const { return chi_; }
    const PlanarNorm& omega() const { return omega_; }

private:
    std::vector<double> e_, t_;
    double lambda_;
    PlanarNorm chi_, omega_;
    GrimProfile profile_;
};

// One-shot forms of the lifted evaluations (each solves the profile afresh;
// use the classes above to amortize the solve over many points).
double reaper_nd_eval(const PlanarNorm& phi_slice, const PlanarNorm& psi_slice,
                      std::vector<double> e, std::span<const double> x, double c = 1.0,
                      double tol = kGrimDefaultTol);
double tilted_eval(const PlanarNorm& F, const PlanarNorm& G, const XiDescriptor& xi_phi,
                   const XiDescriptor& xi_psi, std::vector<double> e, std::vector<double> t,
                   double lambda, std::span<const double> x, double c = 1.0,
                   double tol = kGrimDefaultTol);

// --- crystalline limit by smoothing ---------------------------------------------

struct ApproxReport {
    std::vector<double> epsilons;
    // Width of {|u'| <= eps^{-1/2}} per profile: the estimator of the limit
    // translator's maximal interval (see approx_limit).
    std::vector<double> interval_lengths;
    std::vector<double> blowup_lengths;  // raw b - a of each smoothed profile
    std::vector<double> sup_diffs;       // consecutive profile differences
    bool cauchy_ok = true;
    double extrapolated_length = 0;  // linear-in-eps limit of the interval lengths
    std::string note;
};

struct ApproxResult {
    GrimProfile finest;
    ApproxReport report;
};

// Solves the profile for smooth_norm(phi, eps_k) along a decreasing eps
// sequence (>= 3 values) and reports convergence of the profiles.
ApproxResult approx_limit(const PlanarNorm& phi, const PlanarNorm& psi,
                          std::vector<double> epsilons, double c = 1.0,
                          double tol = kGrimDefaultTol);

}  // namespace aniso
