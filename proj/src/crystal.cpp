#include "aniso/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aniso {

CrystalReaper crystal_reaper(const WulffPolyline& w, const PlanarNorm& phi) {
    if (!phi.polygon())
        throw std::invalid_argument("crystal_reaper: phi must be polyhedral");
    if (w.points.size() < 3 || w.facets.size() != w.points.size())
        throw std::invalid_argument("crystal_reaper: malformed Wulff polygon");

    struct Entry {
        Vec2 nu;
        double delta;
        double angle;
    };
    std::vector<Entry> down;
    for (const WulffFacet& f : w.facets) {
        if (f.nu.z < -1e-12)
            down.push_back({f.nu, f.delta, std::atan2(f.nu.z, f.nu.x)});
    }
    if (down.empty())
        throw std::invalid_argument("crystal_reaper: Wulff polygon has no downward edge");
    // increasing angle in (-pi, 0) orders the facets by increasing slope
    std::sort(down.begin(), down.end(),
              [](const Entry& a, const Entry& b) { return a.angle < b.angle; });

    CrystalReaper r;
    r.vertices.push_back({0.0, 0.0});
    for (const Entry& e : down) {
        double L = -phi.eval(e.nu.x, e.nu.z) * e.delta / e.nu.z;
        double speed = phi.eval(e.nu.x, e.nu.z) * e.delta / (L * std::abs(e.nu.z));
        r.facets.push_back({e.nu, e.delta, L, speed});
        Vec2 tau{-e.nu.z, e.nu.x};  // unit tangent with increasing x
        r.vertices.push_back(r.vertices.back() + L * tau);
    }
    r.horizontal_extent = r.vertices.back().x;
    r.height_offset = r.vertices.back().z;
    return r;
}

CrystalReaper crystal_reaper(const PlanarNorm& phi_polyhedral) {
    return crystal_reaper(wulff_boundary(phi_polyhedral, 8), phi_polyhedral);
}

std::vector<Vec2> CrystalReaper::polyline(double plot_length) const {
    std::vector<Vec2> pts;
    pts.reserve(vertices.size() + 2);
    pts.push_back({0.0, plot_length});
    for (Vec2 v : vertices) pts.push_back(v);
    pts.push_back({horizontal_extent, height_offset + plot_length});
    return pts;
}

std::vector<double> facet_speed_check(const CrystalReaper& r, const PlanarNorm& phi) {
    std::vector<double> speeds;
    speeds.reserve(r.facets.size());
    for (const CrystalFacet& f : r.facets) {
        double curvature = -f.delta / f.length;  // crystalline curvature of the facet
        speeds.push_back(phi.eval(f.nu.x, f.nu.z) * curvature / f.nu.z);
    }
    return speeds;
}

double CrystalBowl::u(double s) const {
    if (s < 0) throw std::invalid_argument("CrystalBowl::u: s must be nonnegative");
    if (kind == Case::Cylinder)
        return s <= r0 ? 0.0 : (s * s - r0 * r0) / (2.0 * (N - 1)) - s + r0;
    return s <= r0 ? s : (s * s - r0 * r0) / (2.0 * (N - 1)) + r0;
}

double CrystalBowl::w(double s) const {
    if (s < 0) throw std::invalid_argument("CrystalBowl::w: s must be nonnegative");
    if (kind == Case::Cylinder) return s <= r0 ? 0.0 : s / (N - 1) - 1.0;
    return s <= r0 ? 1.0 : s / (N - 1);
}

CrystalBowl crystal_bowl_cylinder(const XiDescriptor& xi, int N) {
    if (N < 2) throw std::invalid_argument("crystal_bowl_cylinder: N must be >= 2");
    double vol = xi.wulff_volume();
    // Per({xi^0 <= r}) = N r^{N-1} |W| and |{xi^0 <= r}| = r^N |W|; the root of
    // their difference is independent of |W|.
    auto g = [&](double r) { return vol * (N * std::pow(r, N - 1) - std::pow(r, N)); };
    double lo = 1e-8, hi = static_cast<double>(N);
    while (g(hi) > 0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        if (g(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    CrystalBowl b;
    b.kind = CrystalBowl::Case::Cylinder;
    b.N = N;
    b.r0 = 0.5 * (lo + hi);
    return b;
}

CrystalBowl crystal_bowl_cone(const XiDescriptor& xi, int N) {
    if (N < 2) throw std::invalid_argument("crystal_bowl_cone: N must be >= 2");
    (void)xi;  // curvature matching N / r0 = 1 fixes r0 = N for every horizontal norm
    CrystalBowl b;
    b.kind = CrystalBowl::Case::Cone;
    b.N = N;
    b.r0 = static_cast<double>(N);
    return b;
}

}  // namespace aniso
