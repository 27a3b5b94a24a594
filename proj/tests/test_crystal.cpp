#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aniso/crystal.hpp"
#include "aniso/grim.hpp"

using namespace aniso;

TEST_CASE("square Wulff: single facet of length 2") {
    WulffPolyline w = regular_wulff_polygon(4, std::sqrt(2.0));
    // vertices are exactly (+-1, +-1)
    for (Vec2 q : w.points) {
        CHECK(std::abs(q.x) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(q.z) == doctest::Approx(1.0).epsilon(1e-14));
    }
    PlanarNorm phi = norm_with_wulff(w);  // the diamond-ball norm
    CHECK(phi.eval(1, 1) == doctest::Approx(2.0).epsilon(1e-13));

    CrystalReaper r = crystal_reaper(w, phi);
    REQUIRE(r.facets.size() == 1);
    CHECK(r.facets[0].nu.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r.facets[0].nu.z == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.facets[0].delta == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.facets[0].length == 2.0);  // exact in double arithmetic
    CHECK(r.horizontal_extent == 2.0);
    CHECK(r.facets[0].speed == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hexagon Wulff: three downward facets, convex polyline") {
    WulffPolyline w = regular_wulff_polygon(6, 1.0);
    PlanarNorm phi = norm_with_wulff(w);
    CrystalReaper r = crystal_reaper(w, phi);
    REQUIRE(r.facets.size() == 3);

    for (const auto& f : r.facets) {
        CHECK(f.nu.z < 0.0);
        CHECK(f.length > 0.0);
        CHECK(std::abs(f.speed - 1.0) <= 1e-12);
    }
    // normals ordered by increasing slope; assembled polyline convex
    for (std::size_t i = 2; i < r.vertices.size(); ++i) {
        Vec2 d0 = r.vertices[i - 1] - r.vertices[i - 2];
        Vec2 d1 = r.vertices[i] - r.vertices[i - 1];
        CHECK(d1.z / d1.x > d0.z / d0.x);
    }
    // the polyline with anchors starts and ends with vertical rays
    auto pts = r.polyline(3.0);
    CHECK(pts.front().x == 0.0);
    CHECK(pts.back().x == doctest::Approx(r.horizontal_extent).epsilon(1e-14));
    CHECK(pts.front().z > pts[1].z);
}

TEST_CASE("octagon Wulff: all three speeds equal one") {
    WulffPolyline w = regular_wulff_polygon(8, 1.0);
    PlanarNorm phi = norm_with_wulff(w);
    CrystalReaper r = crystal_reaper(w, phi);
    REQUIRE(r.facets.size() == 3);
    std::vector<double> speeds = facet_speed_check(r, phi);
    for (double s : speeds) CHECK(std::abs(s - 1.0) <= 1e-12);

    // the middle facet is the horizontal one (normal at angle 270 degrees)
    CHECK(r.facets[1].nu.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.facets[1].nu.z == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("facet_speed_check responds to hand perturbations") {
    CrystalReaper r = crystal_reaper(norm_with_wulff(regular_wulff_polygon(8, 1.0)));
    PlanarNorm phi = norm_with_wulff(regular_wulff_polygon(8, 1.0));

    CrystalReaper doubled = r;
    doubled.facets[1].length *= 2.0;
    std::vector<double> speeds = facet_speed_check(doubled, phi);
    CHECK(speeds[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(speeds[0] == doctest::Approx(1.0).epsilon(1e-12));

    CrystalReaper scaled = r;
    for (auto& f : scaled.facets) f.length *= 4.0;
    for (double s : facet_speed_check(scaled, phi))
        CHECK(s == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("crystal_reaper rejects invalid input") {
    CHECK_THROWS_AS(crystal_reaper(euclidean_norm()), std::invalid_argument);
    WulffPolyline w = regular_wulff_polygon(4, std::sqrt(2.0));
    CHECK_THROWS_AS(crystal_reaper(w, euclidean_norm()), std::invalid_argument);

    // malformed polygon data: facet table missing or no downward normals
    WulffPolyline broken = w;
    broken.facets.clear();
    CHECK_THROWS_AS(crystal_reaper(broken, l1_norm()), std::invalid_argument);
    WulffPolyline updown = w;
    for (auto& f : updown.facets) f.nu.z = std::abs(f.nu.z);
    CHECK_THROWS_AS(crystal_reaper(updown, l1_norm()), std::invalid_argument);
}

TEST_CASE("cylinder bowls: the perimeter/volume root is N") {
    for (int N = 2; N <= 6; ++N) {
        CrystalBowl b = crystal_bowl_cylinder(XiDescriptor::Euclidean(N), N);
        CHECK(std::abs(b.r0 - N) <= 1e-8 * N);
        CHECK(b.u(b.r0) == 0.0);
        // flat core, then the quadratic branch
        CHECK(b.u(0.5 * b.r0) == 0.0);
        double s = 2.0 * b.r0;
        double expect = (s * s - b.r0 * b.r0) / (2.0 * (N - 1)) - s + b.r0;
        CHECK(b.u(s) == doctest::Approx(expect).epsilon(1e-12));
    }

    // spec example: N = 2, profile value at s = 2 r0 is 3 r0^2 / 2 - r0
    CrystalBowl b2 = crystal_bowl_cylinder(XiDescriptor::Euclidean(2), 2);
    double r0 = b2.r0;
    CHECK(b2.u(2 * r0) == doctest::Approx(1.5 * r0 * r0 - r0).epsilon(1e-10));

    // polyhedral horizontal norm (N = 2): the root is still N
    CrystalBowl bx = crystal_bowl_cylinder(XiDescriptor::Planar(l1_norm()), 2);
    CHECK(std::abs(bx.r0 - 2.0) <= 1e-8);

    // abstract descriptor supplying only xi(e) and the Wulff volume
    XiDescriptor custom = XiDescriptor::Custom(
        3,
        [](std::span<const double> v) {
            double s = 0;
            for (double c : v) s += c * c;
            return std::sqrt(s);
        },
        unit_ball_volume(3), true);
    CrystalBowl bc = crystal_bowl_cylinder(custom, 3);
    CHECK(std::abs(bc.r0 - 3.0) <= 1e-8);

    // junction continuity and convexity
    for (const CrystalBowl& b : {b2, bx}) {
        double eps = 1e-9 * b.r0;
        CHECK(std::abs(b.u(b.r0 + eps) - b.u(b.r0 - eps)) <= 1e-7);
        CHECK(b.w(b.r0 * (1 + 1e-12)) >= b.w(b.r0 * (1 - 1e-12)));
    }
}

TEST_CASE("cone bowls: r0 = N exactly") {
    for (int N = 2; N <= 6; ++N) {
        CrystalBowl b = crystal_bowl_cone(XiDescriptor::Euclidean(N), N);
        CHECK(b.r0 == static_cast<double>(N));
        // conical core u = s
        CHECK(b.u(0.4 * N) == doctest::Approx(0.4 * N).epsilon(1e-14));
        // continuity at the junction
        CHECK(b.u(b.r0) == doctest::Approx(static_cast<double>(N)).epsilon(1e-14));
        // slope rises from 1 to N/(N-1) across the junction
        CHECK(b.w(b.r0 * (1 - 1e-12)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(b.w(b.r0 * (1 + 1e-12)) ==
              doctest::Approx(static_cast<double>(N) / (N - 1)).epsilon(1e-9));
        CHECK(b.w(b.r0 * (1 + 1e-12)) >= 1.0);
        // core Wulff curvature N / r0 = 1
        CHECK(static_cast<double>(N) / b.r0 == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("quadratic branch matches the smooth growth coefficient") {
    // both crystalline factor norms satisfy F(1,0) = G(1,0) = 1, so the
    // quadratic coefficient is 1/(2(N-1)) in every case
    for (int N : {2, 3, 5}) {
        CrystalBowl cyl = crystal_bowl_cylinder(XiDescriptor::Euclidean(N), N);
        CrystalBowl cone = crystal_bowl_cone(XiDescriptor::Euclidean(N), N);
        double s = 1e4;
        double coeff = 1.0 / (2.0 * (N - 1));
        CHECK(cyl.u(s) / (s * s) == doctest::Approx(coeff).epsilon(1e-3));
        CHECK(cone.u(s) / (s * s) == doctest::Approx(coeff).epsilon(1e-3));
    }
}

TEST_CASE("smoothed square reaper approaches the crystalline extent") {
    CrystalReaper r = crystal_reaper(l1_norm());
    ApproxResult res = approx_limit(l1_norm(), l1_norm(), {0.2, 0.1, 0.05, 0.025}, 1.0, 1e-9);
    CHECK(std::abs(res.report.extrapolated_length - r.horizontal_extent) <=
          0.05 * r.horizontal_extent);
}
