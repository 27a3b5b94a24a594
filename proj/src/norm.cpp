#include "aniso/norm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace aniso {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class F>
double golden_max(F&& f, double lo, double hi, double xtol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
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
    return std::max(f1, f2);
}

// Scans f over the circle with `cells` uniform samples, then refines every
// local maximum bracket by golden section. Returns the best value found.
template <class F>
double circle_scan_max(F&& f, int cells, double xtol) {
    std::vector<double> s(cells);
    for (int i = 0; i < cells; ++i) s[i] = f(kTwoPi * i / cells);
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < cells; ++i) {
        double sm = s[(i + cells - 1) % cells], sp = s[(i + 1) % cells];
        if (s[i] >= sm && s[i] >= sp) {
            double lo = kTwoPi * (i - 1) / cells;
            double hi = kTwoPi * (i + 1) / cells;
            best = std::max(best, golden_max(f, lo, hi, xtol));
        }
    }
    return best;
}

double dual_scan_impl(const NormImpl& n, double qx, double qz) {
    if (qx == 0.0 && qz == 0.0) return 0.0;
    auto val = [&](double th) {
        double c = std::cos(th), s = std::sin(th);
        return (qx * c + qz * s) / n.eval(c, s);
    };
    return circle_scan_max(val, 1024, 1e-10);
}

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

// --- NormImpl defaults ------------------------------------------------------

double NormImpl::circle_value(double theta) const {
    return eval(std::cos(theta), std::sin(theta));
}

Vec2 NormImpl::grad(double x, double z) const {
    // gradient in polar form: grad = G e_rho + G' e_theta for eval = rho G(theta)
    double theta = std::atan2(z, x);
    double g = circle_value(theta);
    const double h = 1e-5;
    double gp = (circle_value(theta - 2 * h) - 8 * circle_value(theta - h) +
                 8 * circle_value(theta + h) - circle_value(theta + 2 * h)) /
                (12 * h);
    double c = std::cos(theta), s = std::sin(theta);
    return {g * c - gp * s, g * s + gp * c};
}

double NormImpl::circle_d2(double theta) const {
    const double h = 1e-4;
    return (-circle_value(theta - 2 * h) + 16 * circle_value(theta - h) -
            30 * circle_value(theta) + 16 * circle_value(theta + h) -
            circle_value(theta + 2 * h)) /
           (12 * h * h);
}

double NormImpl::section_d2(double t) const {
    // For eval(p) = |p| G(theta), the section s -> eval(s, 1) has second
    // derivative (G + G'')(theta) / (1 + t^2)^{3/2} at s = t. The angular
    // variable stays bounded, so this remains accurate for large |t|.
    double theta = std::atan2(1.0, t);
    double g = circle_value(theta);
    double g2 = circle_d2(theta);
    double r2 = 1.0 + t * t;
    return (g + g2) / (r2 * std::sqrt(r2));
}

double NormImpl::dual(double x, double z) const { return dual_scan_impl(*this, x, z); }

// --- euclidean ----------------------------------------------------------------

namespace {

class EuclideanNorm final : public NormImpl {
public:
    double eval(double x, double z) const override { return std::hypot(x, z); }
    Vec2 grad(double x, double z) const override {
        double r = std::hypot(x, z);
        return {x / r, z / r};
    }
    double section_d2(double t) const override {
        double r2 = 1.0 + t * t;
        return 1.0 / (r2 * std::sqrt(r2));
    }
    double circle_d2(double) const override { return 0.0; }
    double dual(double x, double z) const override { return std::hypot(x, z); }
    bool smooth() const override { return true; }
    std::string describe() const override { return "euclidean"; }
};

// --- p-norms -------------------------------------------------------------------

class PNorm final : public NormImpl {
public:
    explicit PNorm(double p) : p_(p) {}

    double eval(double x, double z) const override {
        double ax = std::abs(x), az = std::abs(z);
        if (std::isinf(p_)) return std::max(ax, az);
        if (p_ == 1.0) return ax + az;
        double m = std::max(ax, az);
        if (m == 0.0) return 0.0;
        return m * std::pow(std::pow(ax / m, p_) + std::pow(az / m, p_), 1.0 / p_);
    }

    Vec2 grad(double x, double z) const override {
        double ax = std::abs(x), az = std::abs(z);
        if (std::isinf(p_)) {
            if (ax > az) return {sgn(x), 0.0};
            if (az > ax) return {0.0, sgn(z)};
            return {0.5 * sgn(x), 0.5 * sgn(z)};  // centroid on the tie ray
        }
        if (p_ == 1.0) return {sgn(x), sgn(z)};  // centroid where a component vanishes
        double f = eval(x, z);
        return {sgn(x) * std::pow(ax / f, p_ - 1.0), sgn(z) * std::pow(az / f, p_ - 1.0)};
    }

    double dual(double x, double z) const override {
        if (std::isinf(p_)) return std::abs(x) + std::abs(z);
        if (p_ == 1.0) return std::max(std::abs(x), std::abs(z));
        double q = p_ / (p_ - 1.0);
        return PNorm(q).eval(x, z);
    }

    bool smooth() const override { return false; }
    std::string describe() const override {
        std::ostringstream os;
        os << "pnorm(p=" << p_ << ")";
        return os.str();
    }

private:
    double p_;
};

// --- scaled / axis-scaled wrappers ----------------------------------------------

class ScaledNorm final : public NormImpl {
public:
    ScaledNorm(PlanarNorm base, double lambda) : base_(std::move(base)), lambda_(lambda) {}
    double eval(double x, double z) const override { return lambda_ * base_.eval(x, z); }
    Vec2 grad(double x, double z) const override { return lambda_ * base_.impl().grad(x, z); }
    double section_d2(double t) const override { return lambda_ * base_.section_d2(t); }
    double circle_d2(double theta) const override { return lambda_ * base_.impl().circle_d2(theta); }
    double dual(double x, double z) const override { return base_.dual(x, z) / lambda_; }
    bool smooth() const override { return base_.smooth(); }
    std::string describe() const override {
        std::ostringstream os;
        os << "scaled(lambda=" << lambda_ << ", base=" << base_.describe() << ")";
        return os.str();
    }

private:
    PlanarNorm base_;
    double lambda_;
};

class AxisScaledNorm final : public NormImpl {
public:
    AxisScaledNorm(PlanarNorm base, double sx) : base_(std::move(base)), sx_(sx) {}
    double eval(double x, double z) const override { return base_.eval(sx_ * x, z); }
    Vec2 grad(double x, double z) const override {
        Vec2 g = base_.impl().grad(sx_ * x, z);
        return {sx_ * g.x, g.z};
    }
    double section_d2(double t) const override { return sx_ * sx_ * base_.section_d2(sx_ * t); }
    double dual(double x, double z) const override { return base_.dual(x / sx_, z); }
    bool smooth() const override { return base_.smooth(); }
    std::string describe() const override {
        std::ostringstream os;
        os << "axis_scaled(sx=" << sx_ << ", base=" << base_.describe() << ")";
        return os.str();
    }

private:
    PlanarNorm base_;
    double sx_;
};

}  // namespace

// --- polygon gauge ---------------------------------------------------------------

namespace {

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.z < b.z);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Vec2 a, Vec2 b) { return a.x == b.x && a.z == b.z; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {  // lower
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 1e-14)
            --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 1e-14)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;  // counterclockwise
}

}  // namespace

PolygonBall PolygonBall::from_vertices(std::vector<Vec2> vs, bool repair) {
    if (repair) {
        std::vector<Vec2> pts = vs;
        for (Vec2 v : vs) pts.push_back({-v.x, -v.z});
        vs = convex_hull(pts);
    }
    if (vs.size() < 3)
        throw std::invalid_argument("polygon ball needs at least 3 distinct vertices");

    if (!repair) {
        // validate convexity and orientation; accept clockwise input by reversing
        double pos = 0, neg = 0;
        std::size_t m = vs.size();
        for (std::size_t i = 0; i < m; ++i) {
            Vec2 a = vs[i], b = vs[(i + 1) % m], c = vs[(i + 2) % m];
            double cr = cross(b - a, c - b);
            (cr >= 0 ? pos : neg) += std::abs(cr);
        }
        if (neg > pos) {
            std::reverse(vs.begin(), vs.end());
            std::swap(pos, neg);
        }
        if (neg > 1e-12 * (pos + 1.0))
            throw std::invalid_argument("polygon ball vertices are not convex");
        // drop collinear vertices
        std::vector<Vec2> clean;
        for (std::size_t i = 0; i < m; ++i) {
            Vec2 a = vs[(i + m - 1) % m], b = vs[i], c = vs[(i + 1) % m];
            if (std::abs(cross(b - a, c - b)) > 1e-14) clean.push_back(b);
        }
        vs = clean;
        if (vs.size() < 3)
            throw std::invalid_argument("polygon ball is degenerate (collinear vertices)");
        // central symmetry
        double scale = 0;
        for (Vec2 v : vs) scale = std::max(scale, std::abs(v.x) + std::abs(v.z));
        for (Vec2 v : vs) {
            bool found = false;
            for (Vec2 w : vs)
                if (std::abs(w.x + v.x) + std::abs(w.z + v.z) <= 1e-9 * scale) {
                    found = true;
                    break;
                }
            if (!found)
                throw std::invalid_argument(
                    "polygon ball must be centrally symmetric (vertex without reflection)");
        }
    }

    PolygonBall ball;
    ball.vertices_ = vs;
    std::size_t m = vs.size();
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = vs[i], b = vs[(i + 1) % m];
        Vec2 e = b - a;
        double len = std::hypot(e.x, e.z);
        if (len < 1e-14) throw std::invalid_argument("degenerate polygon edge");
        Vec2 n{e.z / len, -e.x / len};  // outward for counterclockwise order
        double d = dot(n, a);
        if (d <= 1e-12)
            throw std::invalid_argument("polygon ball must contain the origin strictly inside");
        ball.edges_.push_back({n, d});
    }
    return ball;
}

double PolygonBall::gauge(double x, double z) const {
    double best = 0.0;
    for (const Edge& e : edges_) best = std::max(best, (e.n.x * x + e.n.z * z) / e.d);
    return best;
}

Vec2 PolygonBall::subgradient_centroid(double x, double z) const {
    double m = gauge(x, z);
    double tol = 1e-12 * (std::abs(m) + 1.0);
    Vec2 acc{0, 0};
    int cnt = 0;
    for (const Edge& e : edges_) {
        if ((e.n.x * x + e.n.z * z) / e.d >= m - tol) {
            acc = acc + (1.0 / e.d) * e.n;
            ++cnt;
        }
    }
    return (1.0 / cnt) * acc;
}

double PolygonBall::support(double x, double z) const {
    double best = -std::numeric_limits<double>::infinity();
    for (Vec2 v : vertices_) best = std::max(best, v.x * x + v.z * z);
    return best;
}

std::vector<Vec2> PolygonBall::polar_vertices() const {
    std::vector<Vec2> ps;
    ps.reserve(edges_.size());
    for (const Edge& e : edges_) ps.push_back((1.0 / e.d) * e.n);
    return ps;
}

namespace {

class PolyNorm final : public NormImpl {
public:
    PolyNorm(std::shared_ptr<const PolygonBall> ball, std::string kind)
        : ball_(std::move(ball)), kind_(std::move(kind)) {}
    double eval(double x, double z) const override { return ball_->gauge(x, z); }
    Vec2 grad(double x, double z) const override { return ball_->subgradient_centroid(x, z); }
    double dual(double x, double z) const override { return ball_->support(x, z); }
    bool smooth() const override { return false; }
    const PolygonBall* polygon() const override { return ball_.get(); }
    std::string describe() const override {
        std::ostringstream os;
        os << kind_ << "(k=" << ball_->vertices().size() << ")";
        return os.str();
    }

private:
    std::shared_ptr<const PolygonBall> ball_;
    std::string kind_;
};

// --- mollified norms ------------------------------------------------------------

// Stores the even-harmonic cosine/sine coefficients of the mollified circle
// restriction g_eps = g * K_eps and evaluates the blended norm
// |p| * sqrt((1-eps) g_eps(theta)^2 + eps) with analytic derivatives.
class MollifiedNorm final : public NormImpl {
public:
    MollifiedNorm(const NormImpl& base, double eps) : eps_(eps), base_desc_(base.describe()) {
        int kmax = static_cast<int>(std::ceil(9.3 / eps));
        kmax += kmax % 2;
        int nsamp = 16384;
        while (nsamp < 8 * kmax) nsamp *= 2;
        std::vector<double> g(nsamp);
        for (int j = 0; j < nsamp; ++j) g[j] = base.circle_value(kTwoPi * j / nsamp);

        int M = kmax / 2 + 1;
        A_.assign(M, 0.0);
        B_.assign(M, 0.0);
        for (int j = 0; j < nsamp; ++j) {
            double th2 = 2.0 * kTwoPi * j / nsamp;
            double cstep = std::cos(th2), sstep = std::sin(th2);
            double c = 1.0, s = 0.0;
            for (int m = 0; m < M; ++m) {
                A_[m] += g[j] * c;
                B_[m] += g[j] * s;
                double cn = c * cstep - s * sstep;
                s = s * cstep + c * sstep;
                c = cn;
            }
        }
        for (int m = 0; m < M; ++m) {
            double k = 2.0 * m;
            double symbol = std::exp(-0.5 * (k * eps) * (k * eps));
            double scale = (m == 0 ? 1.0 : 2.0) / nsamp;
            A_[m] *= scale * symbol;
            B_[m] *= scale * symbol;
        }
        B_[0] = 0.0;
    }

    double eval(double x, double z) const override {
        double r = std::hypot(x, z);
        if (r == 0.0) return 0.0;
        double G, Gp;
        gvals(std::atan2(z, x), G, Gp, nullptr);
        return r * G;
    }

    Vec2 grad(double x, double z) const override {
        double theta = std::atan2(z, x);
        double G, Gp;
        gvals(theta, G, Gp, nullptr);
        double c = std::cos(theta), s = std::sin(theta);
        return {G * c - Gp * s, G * s + Gp * c};
    }

    double circle_d2(double theta) const override {
        double G, Gp, Gpp;
        gvals(theta, G, Gp, &Gpp);
        return Gpp;
    }

    bool smooth() const override { return true; }
    double epsilon() const { return eps_; }
    std::string describe() const override {
        std::ostringstream os;
        os << "mollified(eps=" << eps_ << ", base=" << base_desc_ << ")";
        return os.str();
    }

private:
    void series(double theta, double& g, double& gp, double& gpp) const {
        double cstep = std::cos(2 * theta), sstep = std::sin(2 * theta);
        double c = 1.0, s = 0.0;
        g = gp = gpp = 0.0;
        for (std::size_t m = 0; m < A_.size(); ++m) {
            double k = 2.0 * m;
            double term = A_[m] * c + B_[m] * s;
            g += term;
            gp += k * (B_[m] * c - A_[m] * s);
            gpp -= k * k * term;
            double cn = c * cstep - s * sstep;
            s = s * cstep + c * sstep;
            c = cn;
        }
    }

    void gvals(double theta, double& G, double& Gp, double* Gpp) const {
        double g, gp, gpp;
        series(theta, g, gp, gpp);
        double q = (1.0 - eps_) * g * g + eps_;
        G = std::sqrt(q);
        Gp = (1.0 - eps_) * g * gp / G;
        if (Gpp) *Gpp = ((1.0 - eps_) * (gp * gp + g * gpp) - Gp * Gp) / G;
    }

    double eps_;
    std::vector<double> A_, B_;
    std::string base_desc_;
};

// --- tilted slice ---------------------------------------------------------------

class TiltSliceNorm final : public NormImpl {
public:
    TiltSliceNorm(PlanarNorm F, std::function<double(std::span<const double>)> xi,
                  std::vector<double> e, std::vector<double> t, double lambda, bool smooth_hint)
        : F_(std::move(F)),
          xi_(std::move(xi)),
          e_(std::move(e)),
          t_(std::move(t)),
          lambda_(lambda),
          smooth_(smooth_hint) {
        if (e_.size() != t_.size() || e_.empty() || e_.size() > 16)
            throw std::invalid_argument("tilt_slice_norm: e and t must have equal dimension <= 16");
    }

    double eval(double a, double z) const override {
        std::array<double, 16> w{};
        for (std::size_t i = 0; i < e_.size(); ++i) w[i] = a * e_[i] - lambda_ * z * t_[i];
        double m = xi_(std::span<const double>(w.data(), e_.size()));
        return F_.eval(m, z);
    }

    bool smooth() const override { return smooth_; }
    std::string describe() const override {
        std::ostringstream os;
        os << "tilt_slice(lambda=" << lambda_ << ", F=" << F_.describe() << ")";
        return os.str();
    }

private:
    PlanarNorm F_;
    std::function<double(std::span<const double>)> xi_;
    std::vector<double> e_, t_;
    double lambda_;
    bool smooth_;
};

std::shared_ptr<const NormImpl> euclidean_impl() {
    static const auto impl = std::make_shared<const EuclideanNorm>();
    return impl;
}

}  // namespace

// --- handle and factories ---------------------------------------------------------

PlanarNorm::PlanarNorm() : impl_(euclidean_impl()) {}

Vec2 PlanarNorm::grad(double x, double z) const {
    if (x == 0.0 && z == 0.0)
        throw std::invalid_argument(
            "norm_grad: the subdifferential at 0 is the whole dual unit ball");
    return impl_->grad(x, z);
}

PlanarNorm euclidean_norm() { return PlanarNorm(euclidean_impl()); }

PlanarNorm pnorm(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("pnorm: p must be >= 1");
    if (p == 2.0) return euclidean_norm();
    return PlanarNorm(std::make_shared<const PNorm>(p));
}

PlanarNorm scaled_norm(PlanarNorm base, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("scaled_norm: lambda must be positive");
    return PlanarNorm(std::make_shared<const ScaledNorm>(std::move(base), lambda));
}

PlanarNorm axis_scaled_norm(PlanarNorm base, double sx) {
    if (!(sx > 0.0)) throw std::invalid_argument("axis_scaled_norm: scale must be positive");
    return PlanarNorm(std::make_shared<const AxisScaledNorm>(std::move(base), sx));
}

PlanarNorm polyhedral_norm(std::vector<Vec2> ball_vertices) {
    auto ball = std::make_shared<const PolygonBall>(
        PolygonBall::from_vertices(std::move(ball_vertices), false));
    return PlanarNorm(std::make_shared<const PolyNorm>(std::move(ball), "polyhedral"));
}

PlanarNorm tabulated_norm(std::vector<std::pair<double, double>> theta_radius) {
    if (theta_radius.size() < 3)
        throw std::invalid_argument("tabulated_norm: need at least 3 samples");
    std::vector<Vec2> pts;
    pts.reserve(theta_radius.size());
    for (auto [th, r] : theta_radius) {
        if (!(r > 0.0)) throw std::invalid_argument("tabulated_norm: radii must be positive");
        pts.push_back({r * std::cos(th), r * std::sin(th)});
    }
    auto ball = std::make_shared<const PolygonBall>(PolygonBall::from_vertices(std::move(pts), true));
    return PlanarNorm(std::make_shared<const PolyNorm>(std::move(ball), "tabulated"));
}

PlanarNorm l1_norm() { return polyhedral_norm({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }

PlanarNorm linf_norm() { return polyhedral_norm({{1, -1}, {1, 1}, {-1, 1}, {-1, -1}}); }

PlanarNorm tilt_slice_norm(PlanarNorm F, std::function<double(std::span<const double>)> xi,
                           std::vector<double> e, std::vector<double> t, double lambda,
                           bool smooth_hint) {
    return PlanarNorm(std::make_shared<const TiltSliceNorm>(
        std::move(F), std::move(xi), std::move(e), std::move(t), lambda, smooth_hint));
}

// --- free operations -----------------------------------------------------------

double norm_eval(const PlanarNorm& n, Vec2 p) { return n.eval(p); }

Vec2 norm_grad(const PlanarNorm& n, Vec2 p) { return n.grad(p); }

double phi_xx(const PlanarNorm& n, double t) {
    if (!n.smooth())
        throw std::invalid_argument(
            "phi_xx: second derivative needs a smooth norm; apply smooth_norm first");
    return n.section_d2(t);
}

double dual_eval(const PlanarNorm& n, Vec2 q) { return n.dual(q); }

double dual_eval_scan(const PlanarNorm& n, Vec2 q) { return dual_scan_impl(n.impl(), q.x, q.z); }

double circle_max(const PlanarNorm& n) {
    auto val = [&](double th) { return n.eval(std::cos(th), std::sin(th)); };
    return circle_scan_max(val, 2048, 1e-12);
}

double circle_min(const PlanarNorm& n) {
    auto val = [&](double th) { return -n.eval(std::cos(th), std::sin(th)); };
    return -circle_scan_max(val, 2048, 1e-12);
}

PlanarNorm smooth_norm(const PlanarNorm& n, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("smooth_norm: eps must be positive");
    if (eps < 1e-3)
        throw std::invalid_argument(
            "smooth_norm: eps below 1e-3 exceeds the mollifier's harmonic resolution");
    return PlanarNorm(std::make_shared<const MollifiedNorm>(n.impl(), eps));
}

}  // namespace aniso
