#include "aniso/bowl.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "aniso/ode.hpp"

namespace aniso {

namespace {

void check_axis_even(const PlanarNorm& n, const char* name) {
    for (double th = 0.05; th < 1.6; th += 0.17) {
        double c = std::cos(th), s = std::sin(th);
        double v = n.eval(c, s);
        if (std::abs(n.eval(-c, s) - v) > 1e-9 * v || std::abs(n.eval(c, -s) - v) > 1e-9 * v)
            throw std::invalid_argument(std::string(name) +
                                        " must be even in each argument for a cylindrical "
                                        "anisotropy");
    }
}

}  // namespace

CylindricalAnisotropy::CylindricalAnisotropy(PlanarNorm F_, PlanarNorm G_, int N_,
                                             XiDescriptor xi_)
    : F(std::move(F_)), G(std::move(G_)), N(N_), xi(std::move(xi_)) {
    if (N < 2) throw std::invalid_argument("CylindricalAnisotropy: N must be >= 2");
    if (xi.dim() != N) throw std::invalid_argument("CylindricalAnisotropy: xi dimension != N");
    check_axis_even(F, "F");
    check_axis_even(G, "G");
}

double f_eval(const PlanarNorm& F, const PlanarNorm& G, double alpha) {
    if (!(alpha > 0.0))
        throw std::invalid_argument("f_eval: alpha must be positive (F_t(0,1) = 0)");
    double ft = F.grad(alpha, 1.0).x;
    return 1.0 / (G.eval(alpha, 1.0) * ft);
}

namespace {

double f_inverse_bracketed(const PlanarNorm& F, const PlanarNorm& G, double y, double lo,
                           double hi) {
    // grow the bracket geometrically until it straddles the target
    int guard = 0;
    while (f_eval(F, G, hi) > y) {
        hi *= 2.0;
        if (++guard > 600) throw SolverError("f_inverse: bracket growth failed (upper)");
    }
    guard = 0;
    while (f_eval(F, G, lo) < y) {
        lo *= 0.5;
        if (++guard > 600) throw SolverError("f_inverse: bracket growth failed (lower)");
    }
    while (hi - lo > 1e-12 * lo) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // double resolution exhausted
        if (f_eval(F, G, mid) > y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double f_inverse(const PlanarNorm& F, const PlanarNorm& G, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("f_inverse: target must be positive");
    return f_inverse_bracketed(F, G, y, 1e-12, 1.0);
}

double alpha_of_r(const PlanarNorm& F, const PlanarNorm& G, int N, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("alpha_of_r: r must be positive");
    return f_inverse(F, G, (N - 1) / r);
}

double bowl_rhs(const PlanarNorm& F, const PlanarNorm& G, int N, double r, double w) {
    // raw form avoids the 0 * inf at w = 0 of the factored f(w) expression
    double ftt = F.section_d2(w);
    double ft = (w == 0.0) ? 0.0 : F.grad(w, 1.0).x;
    return (1.0 / ftt) * (1.0 / G.eval(w, 1.0) - (N - 1) * ft / r);
}

double BowlProfile::w_at(double rq) const { return hermite_eval(r, w, dw, rq); }

double BowlProfile::u_at(double s) const {
    if (s < 0.0 || s > R_max + 1e-12) throw std::invalid_argument("bowl_u_eval: s outside [0, R_max]");
    if (s <= r.front()) return 0.0;  // w extended by 0 below the first node
    auto it = std::upper_bound(r.begin(), r.end(), s);
    std::size_t i = (it - r.begin()) - 1;
    if (i >= r.size() - 1) return ucum_.back();
    // linear interpolation of w keeps u exactly convex
    double t = (s - r[i]) / (r[i + 1] - r[i]);
    double ws = w[i] + t * (w[i + 1] - w[i]);
    return ucum_[i] + 0.5 * (w[i] + ws) * (s - r[i]);
}

double bowl_u_eval(const BowlProfile& p, double s) { return p.u_at(s); }

BowlProfile bowl_profile(const CylindricalAnisotropy& a, double R_max, double tol) {
    if (!a.F.smooth() || !a.G.smooth())
        throw std::invalid_argument(
            "bowl_profile: F and G must be smooth; use smooth_norm or bowl_approx_limit");
    if (!(R_max >= 10.0)) throw std::invalid_argument("bowl_profile: R_max must be >= 10");
    if (!(tol >= 1e-12 && tol <= 1e-3))
        throw std::invalid_argument("bowl_profile: tol must lie in [1e-12, 1e-3]");

    auto rhs = [&](double r, const std::array<double, 1>& y) -> std::array<double, 1> {
        return {bowl_rhs(a.F, a.G, a.N, r, y[0])};
    };

    OdeOptions opt;
    opt.rtol = 1e-11;
    opt.atol = 1e-14;
    opt.hmax = 0.02;
    opt.hmax_rel_x = 0.25;  // logarithmic-style refinement near the origin
    opt.h0 = 1e-5;
    opt.max_steps = 2000000;

    struct Shot {
        std::vector<double> r, w, dw;
    };
    auto shoot = [&](double rho, double w0) -> Shot {
        auto path = integrate_rk45<1>(rhs, rho, {w0}, R_max, opt);
        Shot s;
        s.r = std::move(path.x);
        s.w.resize(s.r.size());
        s.dw.resize(s.r.size());
        for (std::size_t i = 0; i < s.r.size(); ++i) {
            s.w[i] = path.y[i][0];
            s.dw[i] = path.dy[i][0];
        }
        return s;
    };

    const int kMaxRefine = 20;
    const int kCompare = 512;
    std::vector<double> cmp(kCompare);
    for (int i = 0; i < kCompare; ++i) cmp[i] = 1.0 + (R_max - 1.0) * i / (kCompare - 1);

    BowlDiagnostics diag;
    Shot prev, cur;
    bool have_prev = false;
    bool converged = false;
    double rho = 1.0;
    for (int k = 0; k <= kMaxRefine; ++k, rho *= 0.5) {
        double w0 = 0.5 * alpha_of_r(a.F, a.G, a.N, rho);
        cur = shoot(rho, w0);
        diag.rhos.push_back(rho);
        diag.refinements = k;
        if (have_prev) {
            double sup = 0;
            for (double rq : cmp)
                sup = std::max(sup, std::abs(hermite_eval(prev.r, prev.w, prev.dw, rq) -
                                             hermite_eval(cur.r, cur.w, cur.dw, rq)));
            diag.sup_diffs.push_back(sup);
            converged = sup < tol;
        }
        if (converged && w0 <= 1e-4) break;
        prev = std::move(cur);
        cur = Shot{};
        have_prev = true;
    }
    if (!converged)
        throw SolverError("bowl_profile: shooting did not converge within " +
                          std::to_string(kMaxRefine) + " refinements (last sup-difference " +
                          (diag.sup_diffs.empty() ? std::string("n/a")
                                                  : std::to_string(diag.sup_diffs.back())) +
                          ")");
    diag.converged = true;

    BowlProfile p;
    p.R_max = R_max;
    p.diag = std::move(diag);
    p.r = std::move(cur.r);
    p.w = std::move(cur.w);
    p.dw = std::move(cur.dw);
    std::size_t n = p.r.size();

    // alpha(r) column with a warm-started bracket (alpha is increasing in r)
    p.alpha.resize(n);
    double prev_alpha = 1e-12;
    for (std::size_t i = 0; i < n; ++i) {
        double y = (a.N - 1) / p.r[i];
        p.alpha[i] = prev_alpha = f_inverse_bracketed(
            a.F, a.G, y, std::max(prev_alpha * 0.5, 1e-14), std::max(prev_alpha * 2.0, 1e-12));
    }

    p.ucum_.resize(n);
    p.ucum_[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        p.ucum_[i] = p.ucum_[i - 1] + 0.5 * (p.w[i] + p.w[i - 1]) * (p.r[i] - p.r[i - 1]);

    p.asym_slope = p.w.back() / R_max;
    return p;
}

double polar_factor_check(const PlanarNorm& F, const PlanarNorm& xi, int samples,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * 3.14159265358979323846);
    std::uniform_real_distribution<double> rad(0.25, 2.0);
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        double the = ang(rng);
        double xi_e = xi.eval(std::cos(the), std::sin(the));
        PlanarNorm slice = axis_scaled_norm(F, xi_e);
        double qth = ang(rng), qr = rad(rng);
        double t = qr * std::cos(qth), z = qr * std::sin(qth);
        double lhs = dual_eval_scan(slice, {t, z});
        // dual of the sliced pair: xi restricted to the ray through e has dual
        // value |t| / xi(e); for euclidean xi this equals xi^0(t e) = |t|.
        double rhs = F.dual(t / xi_e, z);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-12, std::abs(rhs)));
    }
    return worst;
}

BowlApproxResult bowl_approx_limit(const CylindricalAnisotropy& a, std::vector<double> epsilons,
                                   double R_max, double tol) {
    if (epsilons.size() < 3)
        throw std::invalid_argument("bowl_approx_limit: need at least 3 epsilon values");
    for (std::size_t i = 1; i < epsilons.size(); ++i)
        if (!(epsilons[i] < epsilons[i - 1]) || !(epsilons[i] > 0))
            throw std::invalid_argument("bowl_approx_limit: epsilons must decrease and stay positive");

    BowlApproxReport rep;
    rep.epsilons = epsilons;
    std::vector<BowlProfile> profiles;
    for (double eps : epsilons) {
        CylindricalAnisotropy sm(smooth_norm(a.F, eps), smooth_norm(a.G, eps), a.N, a.xi);
        profiles.push_back(bowl_profile(sm, R_max, tol));
        rep.asym_slopes.push_back(profiles.back().asym_slope);
    }
    for (std::size_t k = 1; k < profiles.size(); ++k) {
        double lo = std::max(profiles[k - 1].r.front(), profiles[k].r.front());
        double sup = 0;
        const int m = 512;
        for (int i = 0; i < m; ++i) {
            double rq = lo + (R_max - lo) * i / (m - 1);
            sup = std::max(sup, std::abs(profiles[k - 1].w_at(rq) - profiles[k].w_at(rq)));
        }
        rep.sup_diffs.push_back(sup);
    }
    for (std::size_t k = 1; k < rep.sup_diffs.size(); ++k)
        if (rep.sup_diffs[k] > 0.9 * rep.sup_diffs[k - 1] && rep.sup_diffs[k] > 1e-12)
            rep.cauchy_ok = false;
    return {std::move(profiles.back()), std::move(rep)};
}

}  // namespace aniso
