#include "aniso/wulff.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace aniso {

namespace {

std::vector<WulffFacet> facets_of(const std::vector<Vec2>& pts) {
    std::vector<WulffFacet> fs;
    std::size_t m = pts.size();
    fs.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 a = pts[i], b = pts[(i + 1) % m];
        Vec2 e = b - a;
        double len = std::hypot(e.x, e.z);
        Vec2 n = len > 0 ? Vec2{e.z / len, -e.x / len} : Vec2{0, 0};
        fs.push_back({n, len});
    }
    return fs;
}

}  // namespace

double WulffPolyline::area() const {
    double s = 0;
    std::size_t m = points.size();
    for (std::size_t i = 0; i < m; ++i) s += cross(points[i], points[(i + 1) % m]);
    return 0.5 * s;
}

double WulffPolyline::half_width() const {
    double w = 0;
    for (Vec2 p : points) w = std::max(w, std::abs(p.x));
    return w;
}

WulffPolyline wulff_boundary(const PlanarNorm& n, int samples) {
    WulffPolyline w;
    if (const PolygonBall* ball = n.polygon()) {
        w.points = ball->polar_vertices();
        w.exact = true;
    } else {
        if (samples < 8) throw std::invalid_argument("wulff_boundary: need at least 8 samples");
        w.points.reserve(samples);
        for (int i = 0; i < samples; ++i) {
            double th = 2.0 * std::numbers::pi * i / samples;
            Vec2 u{std::cos(th), std::sin(th)};
            double d = n.dual(u);
            w.points.push_back((1.0 / d) * u);
        }
    }
    w.facets = facets_of(w.points);
    return w;
}

PlanarNorm norm_with_wulff(const WulffPolyline& w) {
    // the polar of the Wulff polygon is the unit ball of the norm itself
    PolygonBall wb = PolygonBall::from_vertices(w.points, false);
    return polyhedral_norm(wb.polar_vertices());
}

WulffPolyline regular_wulff_polygon(int k, double circumradius) {
    if (k < 3) throw std::invalid_argument("regular_wulff_polygon: need k >= 3");
    WulffPolyline w;
    if (k == 4) {
        // exact axis-aligned square; trig-generated coordinates carry 1-ulp noise
        double c = circumradius / std::sqrt(2.0);
        w.points = {{c, -c}, {c, c}, {-c, c}, {-c, -c}};
    } else {
        double phase = -std::numbers::pi / 2 + std::numbers::pi / k;
        for (int j = 0; j < k; ++j) {
            double th = phase + 2.0 * std::numbers::pi * j / k;
            w.points.push_back({circumradius * std::cos(th), circumradius * std::sin(th)});
        }
    }
    w.exact = true;
    w.facets = facets_of(w.points);
    return w;
}

HProfile h_profile(const PlanarNorm& n, double t_max, int grid) {
    if (!n.smooth()) throw std::invalid_argument("h_profile: norm must be smooth");
    if (!(t_max >= 10.0)) throw std::invalid_argument("h_profile: t_max must be >= 10");
    if (grid < 100) throw std::invalid_argument("h_profile: grid must have >= 100 points");

    HProfile hp;
    hp.phi10 = n.eval(1, 0);
    hp.phi01 = n.eval(0, 1);
    hp.t.resize(grid);
    hp.h.resize(grid);
    hp.hp.resize(grid);
    hp.c1 = std::numeric_limits<double>::infinity();
    hp.c2 = 0.0;
    for (int i = 0; i < grid; ++i) {
        double t = -t_max + 2.0 * t_max * i / (grid - 1);
        double phi = n.eval(t, 1);
        hp.t[i] = t;
        hp.h[i] = phi - hp.phi10 * std::abs(t);
        double sg = t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0);
        hp.hp[i] = n.grad(t, 1).x - hp.phi10 * sg;
        double ratio = n.section_d2(t) * phi * phi * phi;
        hp.c1 = std::min(hp.c1, ratio);
        hp.c2 = std::max(hp.c2, ratio);
    }
    return hp;
}

}  // namespace aniso
