#include "aniso/grim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aniso/ode.hpp"

namespace aniso {

namespace {

constexpr double kPi = std::numbers::pi;

// f(v) = (1 + v^2) psi(-v, 1) phi_xx(-v, 1); bounded between positive
// constants for smooth phi, which drives the finite-time blow-up of v.
double f_of_v(const PlanarNorm& phi, const PlanarNorm& psi, double v) {
    return (1.0 + v * v) * psi.eval(-v, 1.0) * phi.section_d2(-v);
}

// Remaining interval length past the blow-up threshold:
// integral of f(s)/(1+s^2) ds over (v_end, inf), via s = tan(alpha).
double tail_integral(const PlanarNorm& phi, const PlanarNorm& psi, double v_end, double sign) {
    static const double gx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double gw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    double lo = std::atan(std::abs(v_end));
    double hi = kPi / 2;
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    double acc = 0;
    for (int i = 0; i < 8; ++i) {
        for (double s : {-gx[i], gx[i]}) {
            double alpha = mid + half * s;
            acc += gw[i] * f_of_v(phi, psi, sign * std::tan(alpha));
        }
    }
    return half * acc;
}

}  // namespace

double GrimProfile::u_at(double xq) const { return hermite_eval(x, u, v, xq); }

double GrimProfile::v_at(double xq) const { return hermite_eval(x, v, dv, xq); }

double interval_bound(const PlanarNorm& phi, const PlanarNorm& psi) {
    return 4.0 * (phi.eval(1, 0) + phi.eval(0, 1)) * circle_max(psi);
}

GrimProfile reaper_profile(const PlanarNorm& phi, const PlanarNorm& psi, double c, double tol) {
    if (!phi.smooth())
        throw std::invalid_argument(
            "reaper_profile: surface tension must be smooth; apply smooth_norm or use "
            "approx_limit");
    if (!(tol >= 1e-12 && tol <= 1e-3))
        throw std::invalid_argument("reaper_profile: tol must lie in [1e-12, 1e-3]");
    if (!(c > 0.0))
        throw std::invalid_argument(
            "reaper_profile: speed must be positive (downward translators are the reflection "
            "z -> -z)");

    double fmin = std::numeric_limits<double>::infinity();
    double fmax = 0.0;
    auto rhs = [&](double, const std::array<double, 2>& y) -> std::array<double, 2> {
        double fv = f_of_v(phi, psi, y[0]);
        fmin = std::min(fmin, fv);
        fmax = std::max(fmax, fv);
        return {(1.0 + y[0] * y[0]) / fv, y[0]};
    };
    auto stop = [](double, const std::array<double, 2>& y) { return std::abs(y[0]) >= kGrimVMax; };

    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = 1e-12;
    opt.hmax = 0.01;
    opt.h0 = 1e-3;
    opt.max_steps = 500000;

    // unit-speed solve; the bound guarantees blow-up strictly inside +-guard
    double guard = interval_bound(phi, psi) + 1.0;
    auto pos = integrate_rk45<2>(rhs, 0.0, {0.0, 0.0}, +guard, opt, stop);
    auto neg = integrate_rk45<2>(rhs, 0.0, {0.0, 0.0}, -guard, opt, stop);
    if (!pos.stopped_by_event || !neg.stopped_by_event)
        throw SolverError("reaper_profile: slope did not reach the blow-up threshold " +
                          std::to_string(kGrimVMax) + " within the step budget");

    GrimProfile p;
    p.phi_desc = phi.describe();
    p.psi_desc = psi.describe();
    p.c = c;
    std::size_t n = neg.x.size() + pos.x.size() - 1;
    p.x.reserve(n);
    p.v.reserve(n);
    p.u.reserve(n);
    p.dv.reserve(n);
    for (std::size_t i = neg.x.size(); i-- > 1;) {
        p.x.push_back(neg.x[i]);
        p.v.push_back(neg.y[i][0]);
        p.u.push_back(neg.y[i][1]);
        p.dv.push_back(neg.dy[i][0]);
    }
    for (std::size_t i = 0; i < pos.x.size(); ++i) {
        p.x.push_back(pos.x[i]);
        p.v.push_back(pos.y[i][0]);
        p.u.push_back(pos.y[i][1]);
        p.dv.push_back(pos.dy[i][0]);
    }

    p.diag.fbar_min = fmin;
    p.diag.fbar_max = fmax;
    p.diag.v_threshold_pos = pos.stopped_by_event;
    p.diag.v_threshold_neg = neg.stopped_by_event;
    p.diag.tail_pos = tail_integral(phi, psi, pos.y.back()[0], +1.0);
    p.diag.tail_neg = tail_integral(phi, psi, neg.y.back()[0], -1.0);
    p.diag.steps = pos.steps + neg.steps;
    p.b = pos.x.back() + p.diag.tail_pos;
    p.a = neg.x.back() - p.diag.tail_neg;

    if (c != 1.0) {
        // dilation: u_c(x) = u_1(c x) / c
        for (auto& xv : p.x) xv /= c;
        for (auto& uv : p.u) uv /= c;
        for (auto& dvv : p.dv) dvv *= c;
        p.a /= c;
        p.b /= c;
        p.diag.tail_pos /= c;
        p.diag.tail_neg /= c;
    }
    return p;
}

namespace {

// Fornberg weights for the first derivative at z over n nodes.
void fd1_weights(const double* xs, int n, double z, double* wts) {
    std::vector<std::array<double, 2>> c(n, {0.0, 0.0});
    double c1 = 1.0, c4 = xs[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, 1);
        double c2 = 1.0, c5 = c4;
        c4 = xs[i] - z;
        for (int j = 0; j < i; ++j) {
            double c3 = xs[i] - xs[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    for (int i = 0; i < n; ++i) wts[i] = c[i][1];
}

}  // namespace

ResidualReport reaper_residual(const GrimProfile& p, const PlanarNorm& phi,
                               const PlanarNorm& psi) {
    if (!phi.smooth()) throw std::invalid_argument("reaper_residual: phi must be smooth");
    std::size_t n = p.x.size();
    if (n < 18) throw std::invalid_argument("reaper_residual: grid too coarse (< 16 interior points)");

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = phi.grad(-p.v[i], 1.0).x;

    // Fourth-order five-point stencils. The node spacing is kept above delta:
    // adaptive steps shrink like 1/v^2 near the blow-up, where differencing
    // over the raw spacing would leave the (psi ~ v)-amplified residual
    // roundoff-limited; delta grows with psi so the roundoff term
    // psi*eps/delta stays below the truncation allowance at slopes ~ 1e6.
    auto step_down = [&](std::size_t i, double delta, std::size_t& out) {
        auto it = std::lower_bound(p.x.begin(), p.x.begin() + i, p.x[i] - delta);
        if (it == p.x.begin()) return false;
        out = (it - p.x.begin()) - 1;
        return true;
    };
    auto step_up = [&](std::size_t i, double delta, std::size_t& out) {
        auto it = std::lower_bound(p.x.begin() + i + 1, p.x.end(), p.x[i] + delta);
        if (it == p.x.end()) return false;
        out = it - p.x.begin();
        return true;
    };

    ResidualReport rep;
    std::size_t evaluated = 0;
    for (std::size_t i = 2; i + 2 < n; ++i) {
        double delta = std::max(1e-7, 3e-11 * psi.eval(-p.v[i], 1.0));
        std::size_t jm1, jm2, jp1, jp2;
        if (!step_down(i, delta, jm1) || !step_down(jm1, delta, jm2)) continue;
        if (!step_up(i, delta, jp1) || !step_up(jp1, delta, jp2)) continue;

        double xs[5] = {p.x[jm2], p.x[jm1], p.x[i], p.x[jp1], p.x[jp2]};
        double ws[5] = {w[jm2], w[jm1], w[i], w[jp1], w[jp2]};
        double cwt[5];
        fd1_weights(xs, 5, p.x[i], cwt);
        double d = 0;
        for (int k = 0; k < 5; ++k) d += cwt[k] * ws[k];

        double res = psi.eval(-p.v[i], 1.0) * d + p.c;
        ++evaluated;
        if (std::abs(res) > rep.max_abs) {
            rep.max_abs = std::abs(res);
            rep.x_at_max = p.x[i];
        }
        rep.spacing = std::max(rep.spacing, p.x[i + 1] - p.x[i]);
    }
    if (evaluated < 16)
        throw std::invalid_argument("reaper_residual: grid too coarse (< 16 interior points)");
    return rep;
}

bool v_strictly_increasing(const GrimProfile& p) {
    for (std::size_t i = 1; i < p.v.size(); ++i)
        if (!(p.v[i] > p.v[i - 1])) return false;
    return true;
}

double u_convexity_defect(const GrimProfile& p) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 2; i < p.x.size(); ++i) {
        double s0 = (p.u[i - 1] - p.u[i - 2]) / (p.x[i - 1] - p.x[i - 2]);
        double s1 = (p.u[i] - p.u[i - 1]) / (p.x[i] - p.x[i - 1]);
        worst = std::min(worst, s1 - s0);
    }
    return worst;
}

InscriptionReport wulff_inscription_check(const GrimProfile& p, const PlanarNorm& phi,
                                          const PlanarNorm& psi, double c, int graph_samples,
                                          int wulff_samples) {
    InscriptionReport rep;
    rep.c = c;
    double limit = circle_min(psi) / p.c;
    if (!(c >= 0.0) || !(c < limit))
        throw std::invalid_argument(
            "wulff_inscription_check: need 0 <= c < min_{S^1} psi / speed = " +
            std::to_string(limit));
    if (c == 0.0) {  // zero body: vacuous pass
        rep.points.push_back({0.0, true, 0.0});
        return rep;
    }

    WulffPolyline w = wulff_boundary(phi, wulff_samples);
    double body_halfwidth = c * w.half_width();
    double lo = p.x.front() + body_halfwidth * 1.01 + 1e-12;
    double hi = p.x.back() - body_halfwidth * 1.01 - 1e-12;
    if (!(lo < hi))
        throw std::invalid_argument(
            "wulff_inscription_check: Wulff body does not fit inside the stored grid");

    for (int k = 0; k < graph_samples; ++k) {
        double x0 = lo + (hi - lo) * k / std::max(1, graph_samples - 1);
        double v0 = p.v_at(x0);
        double u0 = p.u_at(x0);
        double nrm = std::sqrt(1.0 + v0 * v0);
        Vec2 nu{v0 / nrm, -1.0 / nrm};
        Vec2 contact{x0, u0};
        Vec2 anchor = contact - c * phi.grad(nu);  // support point of W in direction nu

        double worst = std::numeric_limits<double>::infinity();
        for (Vec2 q : w.points) {
            Vec2 pt = anchor + c * q;
            if (pt.x < p.x.front() || pt.x > p.x.back()) continue;
            worst = std::min(worst, pt.z - p.u_at(pt.x));
        }
        bool pass = worst >= -1e-9 * (1.0 + std::abs(u0));
        rep.points.push_back({x0, pass, worst});
        rep.all_pass = rep.all_pass && pass;
    }
    return rep;
}

// --- higher-dimensional lifts ----------------------------------------------------

PlanarNorm cylindrical_slice(const PlanarNorm& F, double xi_e) {
    if (!(xi_e > 0.0)) throw std::invalid_argument("cylindrical_slice: xi(e) must be positive");
    return axis_scaled_norm(F, xi_e);
}

namespace {

std::vector<double> unit_checked(std::vector<double> v, const char* what) {
    double s = 0;
    for (double c : v) s += c * c;
    if (std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(what) + " must be a unit vector");
    return v;
}

double dot_n(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

NdReaper::NdReaper(PlanarNorm phi_slice, PlanarNorm psi_slice, std::vector<double> e, double c,
                   double tol)
    : e_(unit_checked(std::move(e), "NdReaper: e")),
      profile_(reaper_profile(phi_slice, psi_slice, c, tol)) {}

double NdReaper::eval(std::span<const double> x) const {
    if (x.size() != e_.size()) throw std::invalid_argument("NdReaper::eval: wrong dimension");
    double s = dot_n(x, e_);
    if (s < profile_.x.front() || s > profile_.x.back())
        throw std::domain_error("NdReaper::eval: x . e outside the slab (a, b)");
    return profile_.u_at(s);
}

TiltedReaper::TiltedReaper(const PlanarNorm& F, const PlanarNorm& G, const XiDescriptor& xi_phi,
                           const XiDescriptor& xi_psi, std::vector<double> e,
                           std::vector<double> t, double lambda, double c, double tol)
    : e_(unit_checked(std::move(e), "TiltedReaper: e")),
      t_(unit_checked(std::move(t), "TiltedReaper: t")),
      lambda_(lambda) {
    if (e_.size() != t_.size()) throw std::invalid_argument("TiltedReaper: e, t dimensions differ");
    if (static_cast<int>(e_.size()) != xi_phi.dim() ||
        static_cast<int>(e_.size()) != xi_psi.dim())
        throw std::invalid_argument("TiltedReaper: xi descriptor dimension mismatch");
    if (std::abs(dot_n(e_, t_)) > 1e-9)
        throw std::invalid_argument(
            "TiltedReaper: t must be orthogonal to e (fold any parallel component of the tilt "
            "into the profile direction first)");

    auto xiF = [d = xi_phi](std::span<const double> v) { return d.xi(v); };
    auto xiG = [d = xi_psi](std::span<const double> v) { return d.xi(v); };
    chi_ = tilt_slice_norm(F, xiF, e_, t_, lambda_, F.smooth() && xi_phi.smooth());
    omega_ = tilt_slice_norm(G, xiG, e_, t_, lambda_, G.smooth() && xi_psi.smooth());
    profile_ = reaper_profile(chi_, omega_, c, tol);
}

double TiltedReaper::eval(std::span<const double> x) const {
    if (x.size() != e_.size()) throw std::invalid_argument("TiltedReaper::eval: wrong dimension");
    double s = dot_n(x, e_);
    if (s < profile_.x.front() || s > profile_.x.back())
        throw std::domain_error("TiltedReaper::eval: x . e outside the slab (a, b)");
    return profile_.u_at(s) + lambda_ * dot_n(x, t_);
}

double reaper_nd_eval(const PlanarNorm& phi_slice, const PlanarNorm& psi_slice,
                      std::vector<double> e, std::span<const double> x, double c, double tol) {
    return NdReaper(phi_slice, psi_slice, std::move(e), c, tol).eval(x);
}

double tilted_eval(const PlanarNorm& F, const PlanarNorm& G, const XiDescriptor& xi_phi,
                   const XiDescriptor& xi_psi, std::vector<double> e, std::vector<double> t,
                   double lambda, std::span<const double> x, double c, double tol) {
    return TiltedReaper(F, G, xi_phi, xi_psi, std::move(e), std::move(t), lambda, c, tol).eval(x);
}

// --- crystalline limit ------------------------------------------------------------

namespace {

// x at which the (increasing) slope v crosses `target`, by grid interpolation
double slope_crossing(const GrimProfile& p, double target) {
    auto it = std::lower_bound(p.v.begin(), p.v.end(), target);
    if (it == p.v.begin()) return p.x.front();
    if (it == p.v.end()) return p.x.back();
    std::size_t j = it - p.v.begin();
    double t = (target - p.v[j - 1]) / (p.v[j] - p.v[j - 1]);
    return p.x[j - 1] + t * (p.x[j] - p.x[j - 1]);
}

double slope_window_width(const GrimProfile& p, double vcut) {
    return slope_crossing(p, vcut) - slope_crossing(p, -vcut);
}

}  // namespace

ApproxResult approx_limit(const PlanarNorm& phi, const PlanarNorm& psi,
                          std::vector<double> epsilons, double c, double tol) {
    if (epsilons.size() < 3)
        throw std::invalid_argument("approx_limit: need at least 3 epsilon values");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0)) throw std::invalid_argument("approx_limit: epsilons must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
            throw std::invalid_argument("approx_limit: epsilons must be strictly decreasing");
    }

    std::vector<GrimProfile> profiles;
    profiles.reserve(epsilons.size());
    ApproxReport rep;
    rep.epsilons = epsilons;
    for (double eps : epsilons) {
        profiles.push_back(reaper_profile(smooth_norm(phi, eps), psi, c, tol));
        // Interval estimate for the limit translator: the width of the
        // bounded-slope region {|u'| <= eps^{-1/2}}. Mollification smears
        // corner mass of phi from the horizontal directions to finite slopes
        // ~ 1/eps, which adds wings where u_eps -> infinity pointwise; the
        // raw blow-up width therefore tends to 2(phi(1,0)+phi(0,1))-type
        // constants for every smoothing family, not to the limit interval.
        // The diagonal cut eps^{-1/2} stays below the smeared-corner slopes
        // and recovers the maximal interval of the limit profile.
        rep.interval_lengths.push_back(
            slope_window_width(profiles.back(), 1.0 / std::sqrt(eps)));
        rep.blowup_lengths.push_back(profiles.back().length());
    }

    // Compare consecutive u where both slopes stay moderate (a compact subset
    // of the limit interval); near the endpoints u diverges and the sup would
    // be dominated by the wall mismatch.
    for (std::size_t k = 1; k < profiles.size(); ++k) {
        const GrimProfile& p0 = profiles[k - 1];
        const GrimProfile& p1 = profiles[k];
        double lo = std::max(slope_crossing(p0, -10.0), slope_crossing(p1, -10.0));
        double hi = std::min(slope_crossing(p0, 10.0), slope_crossing(p1, 10.0));
        double sup = 0;
        const int m = 1001;
        for (int i = 0; i < m; ++i) {
            double xq = lo + (hi - lo) * i / (m - 1);
            sup = std::max(sup, std::abs(p0.u_at(xq) - p1.u_at(xq)));
        }
        rep.sup_diffs.push_back(sup);
    }
    for (std::size_t k = 1; k < rep.sup_diffs.size(); ++k) {
        if (rep.sup_diffs[k] < 1e-12) continue;
        if (rep.sup_diffs[k] > 0.9 * rep.sup_diffs[k - 1]) {
            rep.cauchy_ok = false;
            rep.note = "convergence failure: sup-differences did not decrease by 10%";
        }
    }

    std::size_t n = epsilons.size();
    double Ln = rep.interval_lengths[n - 1], Lp = rep.interval_lengths[n - 2];
    double en = epsilons[n - 1], ep = epsilons[n - 2];
    rep.extrapolated_length = Ln + en * (Ln - Lp) / (ep - en);

    return {std::move(profiles.back()), std::move(rep)};
}

}  // namespace aniso
