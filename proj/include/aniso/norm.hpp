// Norm calculus on the plane: evaluation, subgradients, second derivatives
// along the section z = 1, dual norms and mollification. All types are
// immutable after construction and safe for concurrent use.
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace aniso {

struct Vec2 {
    double x = 0.0;
    double z = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.z + b.z}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.z - b.z}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.z}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.z * b.z; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.z - a.z * b.x; }

// Convex, centrally symmetric polygon with the origin strictly inside.
// Serves as the unit ball of polyhedral and tabulated norms.
class PolygonBall {
public:
    struct Edge {
        Vec2 n;    // outward unit normal
        double d;  // support distance, > 0
    };

    // vertices must describe a convex polygon; `repair` replaces the input by
    // the convex hull of the points and their reflections (used for tabulated
    // data), otherwise the list is validated as-is.
    static PolygonBall from_vertices(std::vector<Vec2> vs, bool repair);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    double gauge(double x, double z) const;              // the norm value
    Vec2 subgradient_centroid(double x, double z) const; // selection rule
    double support(double x, double z) const;            // the dual norm value
    std::vector<Vec2> polar_vertices() const;            // vertices of the polar polygon

private:
    std::vector<Vec2> vertices_;  // counterclockwise
    std::vector<Edge> edges_;
};

class NormImpl {
public:
    virtual ~NormImpl() = default;
    virtual double eval(double x, double z) const = 0;
    virtual Vec2 grad(double x, double z) const;       // default: polar-form gradient
    virtual double section_d2(double t) const;         // d^2/ds^2 eval(s,1) at s=t
    virtual double circle_d2(double theta) const;      // g''(theta), g = eval on the circle
    virtual double dual(double x, double z) const;     // default: angular scan
    virtual bool smooth() const = 0;
    virtual const PolygonBall* polygon() const { return nullptr; }
    virtual std::string describe() const = 0;

    double circle_value(double theta) const;
};

// Value-semantic handle. Default-constructed handles hold the euclidean norm.
class PlanarNorm {
public:
    PlanarNorm();
    explicit PlanarNorm(std::shared_ptr<const NormImpl> impl) : impl_(std::move(impl)) {}

    double eval(double x, double z) const { return impl_->eval(x, z); }
    double eval(Vec2 p) const { return impl_->eval(p.x, p.z); }
    double operator()(double x, double z) const { return impl_->eval(x, z); }
    Vec2 grad(double x, double z) const;  // rejects (0, 0)
    Vec2 grad(Vec2 p) const { return grad(p.x, p.z); }
    double section_d2(double t) const { return impl_->section_d2(t); }
    double dual(double x, double z) const { return impl_->dual(x, z); }
    double dual(Vec2 q) const { return impl_->dual(q.x, q.z); }
    bool smooth() const { return impl_->smooth(); }
    const PolygonBall* polygon() const { return impl_->polygon(); }
    std::string describe() const { return impl_->describe(); }
    const NormImpl& impl() const { return *impl_; }

private:
    std::shared_ptr<const NormImpl> impl_;
};

// --- constructors ---------------------------------------------------------

PlanarNorm euclidean_norm();
PlanarNorm pnorm(double p);  // p in [1, inf]; p = 2 yields the euclidean norm
PlanarNorm scaled_norm(PlanarNorm base, double lambda);
PlanarNorm axis_scaled_norm(PlanarNorm base, double sx);  // p -> base(sx*x, z)
PlanarNorm polyhedral_norm(std::vector<Vec2> ball_vertices);
PlanarNorm tabulated_norm(std::vector<std::pair<double, double>> theta_radius);
PlanarNorm l1_norm();    // polyhedral diamond
PlanarNorm linf_norm();  // polyhedral square

// Norm (a, z) -> F(xi(a*e - lambda*z*t), z) used by tilted reaper slices.
// xi must be a norm on R^dim; e, t are dim-vectors.
PlanarNorm tilt_slice_norm(PlanarNorm F,
                           std::function<double(std::span<const double>)> xi,
                           std::vector<double> e, std::vector<double> t,
                           double lambda, bool smooth_hint);

// --- operations -------------------------------------------------------------

double norm_eval(const PlanarNorm& n, Vec2 p);
Vec2 norm_grad(const PlanarNorm& n, Vec2 p);    // rejects p = 0
double phi_xx(const PlanarNorm& n, double t);   // rejects non-smooth norms
double dual_eval(const PlanarNorm& n, Vec2 q);
// The sampled route (1024-cell angular scan + golden-section refinement),
// regardless of any closed form the norm kind may have.
double dual_eval_scan(const PlanarNorm& n, Vec2 q);

double circle_max(const PlanarNorm& n);  // max of the norm over the unit circle
double circle_min(const PlanarNorm& n);

// Smooth, uniformly convex approximant: mollifies the restriction of the norm
// to the unit circle with a periodic Gaussian kernel of angular width eps and
// blends in an eps-fraction of the euclidean norm. Output supports phi_xx.
PlanarNorm smooth_norm(const PlanarNorm& n, double eps);

}  // namespace aniso
