#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aniso/norm.hpp"
#include "aniso/wulff.hpp"
#include "test_util.hpp"

using namespace aniso;
using aniso::testing::seeded_rng;

namespace {

std::vector<PlanarNorm> analytic_test_norms() {
    return {euclidean_norm(), l1_norm(), linf_norm(), pnorm(3.0), pnorm(1.5),
            scaled_norm(euclidean_norm(), 1.7)};
}

std::vector<PlanarNorm> smooth_test_norms() {
    auto rng = seeded_rng(7);
    return {euclidean_norm(), scaled_norm(euclidean_norm(), 1.7), smooth_norm(l1_norm(), 0.1),
            smooth_norm(linf_norm(), 0.15), aniso::testing::random_smooth_norm(rng)};
}

}  // namespace

TEST_CASE("norm_eval closed-form examples") {
    CHECK(euclidean_norm().eval(3, 4) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(l1_norm().eval(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(euclidean_norm().eval(6, 8) ==
          doctest::Approx(2.0 * euclidean_norm().eval(3, 4)).epsilon(1e-14));
    CHECK(linf_norm().eval(2, -3) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(pnorm(3.0).eval(1, 1) == doctest::Approx(std::pow(2.0, 1.0 / 3)).epsilon(1e-14));
}

TEST_CASE("homogeneity, convexity, positivity hold for every kind") {
    auto rng = seeded_rng(11);
    std::uniform_real_distribution<double> lam(-3.0, 3.0);
    std::vector<PlanarNorm> norms = analytic_test_norms();
    norms.push_back(smooth_norm(l1_norm(), 0.1));
    norms.push_back(aniso::testing::random_polygon_norm(rng));

    for (const auto& n : norms) {
        for (int k = 0; k < 200; ++k) {
            Vec2 p = aniso::testing::random_point(rng);
            Vec2 q = aniso::testing::random_point(rng);
            double l = lam(rng);
            if (l == 0) continue;
            double tol = n.polygon() ? 1e-12 : 1e-10;
            CHECK(n.eval(l * p.x, l * p.z) ==
                  doctest::Approx(std::abs(l) * n.eval(p.x, p.z)).epsilon(tol));
            double mid = n.eval(0.5 * (p.x + q.x), 0.5 * (p.z + q.z));
            CHECK(mid <= 0.5 * (n.eval(p.x, p.z) + n.eval(q.x, q.z)) + 1e-12);
            CHECK(n.eval(p.x, p.z) > 0.0);
        }
    }
}

TEST_CASE("norm_grad selection and symmetry") {
    Vec2 g = euclidean_norm().grad(3, 4);
    CHECK(g.x == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(g.z == doctest::Approx(0.8).epsilon(1e-14));

    // centroid of the subdifferential segment {1} x [-1, 1] on the vertex ray
    Vec2 c = l1_norm().grad(2, 0);
    CHECK(c.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.z == doctest::Approx(0.0).epsilon(1e-14));

    auto rng = seeded_rng(13);
    for (const auto& n : analytic_test_norms()) {
        for (int k = 0; k < 100; ++k) {
            Vec2 p = aniso::testing::random_point(rng);
            Vec2 gp = n.grad(p.x, p.z);
            Vec2 gm = n.grad(-p.x, -p.z);
            CHECK(gp.x == doctest::Approx(-gm.x).epsilon(1e-12));
            CHECK(gp.z == doctest::Approx(-gm.z).epsilon(1e-12));
        }
    }

    CHECK_THROWS_AS(euclidean_norm().grad(0, 0), std::invalid_argument);
}

TEST_CASE("Euler identity and finite-difference gradient check") {
    auto rng = seeded_rng(17);
    std::vector<PlanarNorm> norms = smooth_test_norms();
    norms.push_back(l1_norm());
    norms.push_back(pnorm(3.0));
    for (const auto& n : norms) {
        for (int k = 0; k < 60; ++k) {
            Vec2 p = aniso::testing::random_point(rng, 0.3, 3.0);
            // stay away from the kink rays of the polyhedral kinds
            if (std::abs(p.x) < 0.05 || std::abs(p.z) < 0.05 ||
                std::abs(std::abs(p.x) - std::abs(p.z)) < 0.05)
                continue;
            Vec2 g = n.grad(p.x, p.z);
            CHECK(g.x * p.x + g.z * p.z == doctest::Approx(n.eval(p.x, p.z)).epsilon(1e-8));
            const double h = 1e-6;
            double fx = (n.eval(p.x + h, p.z) - n.eval(p.x - h, p.z)) / (2 * h);
            double fz = (n.eval(p.x, p.z + h) - n.eval(p.x, p.z - h)) / (2 * h);
            CHECK(g.x == doctest::Approx(fx).epsilon(1e-5));
            CHECK(g.z == doctest::Approx(fz).epsilon(1e-5));
        }
    }
}

TEST_CASE("phi_xx closed forms and Lemma-type bounds") {
    CHECK(phi_xx(euclidean_norm(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(phi_xx(euclidean_norm(), 1.0) ==
          doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));
    for (double t : {-7.0, -0.4, 0.9, 30.0})
        CHECK(phi_xx(euclidean_norm(), t) ==
              doctest::Approx(std::pow(1.0 + t * t, -1.5)).epsilon(1e-10));

    CHECK_THROWS_AS(phi_xx(l1_norm(), 0.5), std::invalid_argument);

    // c1 <= phi_xx * phi^3 <= c2 with positive c1 for every smooth test norm
    for (const auto& n : smooth_test_norms()) {
        HProfile hp = h_profile(n, 100.0, 1501);
        CHECK(hp.c1 > 0.0);
        CHECK(hp.c1 <= hp.c2);
        for (int i = 0; i < 1501; ++i) {
            double t = -100.0 + 200.0 * i / 1500.0;
            double ratio = phi_xx(n, t) * std::pow(n.eval(t, 1.0), 3);
            CHECK(ratio >= hp.c1 - 1e-12);
            CHECK(ratio <= hp.c2 + 1e-12);
        }
    }
}

TEST_CASE("dual_eval examples and scan agreement") {
    CHECK(dual_eval(euclidean_norm(), {3, 4}) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(dual_eval(l1_norm(), {2, -3}) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(dual_eval(linf_norm(), {2, -3}) == doctest::Approx(5.0).epsilon(1e-12));

    auto rng = seeded_rng(19);
    for (const auto& n : analytic_test_norms()) {
        for (int k = 0; k < 40; ++k) {
            Vec2 q = aniso::testing::random_point(rng);
            CHECK(dual_eval_scan(n, q) == doctest::Approx(dual_eval(n, q)).epsilon(1e-9));
        }
    }
    // p-norm duality: (p, q) conjugate exponents
    for (int k = 0; k < 40; ++k) {
        Vec2 q = aniso::testing::random_point(rng);
        CHECK(dual_eval(pnorm(3.0), q) == doctest::Approx(pnorm(1.5).eval(q.x, q.z)).epsilon(1e-12));
    }

    // scan route against a brute-force supremum over the circle
    PlanarNorm moll = smooth_norm(aniso::testing::random_polygon_norm(rng), 0.08);
    for (int k = 0; k < 5; ++k) {
        Vec2 q = aniso::testing::random_point(rng);
        double brute = 0;
        const int m = 200000;
        for (int i = 0; i < m; ++i) {
            double th = 2.0 * 3.14159265358979323846 * i / m;
            double c = std::cos(th), s = std::sin(th);
            brute = std::max(brute, (q.x * c + q.z * s) / moll.eval(c, s));
        }
        CHECK(dual_eval_scan(moll, q) == doctest::Approx(brute).epsilon(1e-8));
        CHECK(dual_eval_scan(moll, q) >= brute - 1e-12);  // scan never undercuts the sup
    }
}

TEST_CASE("duality involution through a tabulated dual") {
    std::vector<PlanarNorm> norms = {euclidean_norm(), l1_norm(), linf_norm(), pnorm(3.0),
                                     scaled_norm(euclidean_norm(), 1.7),
                                     smooth_norm(l1_norm(), 0.2)};
    for (const auto& n : norms) {
        const int m = 16384;
        std::vector<std::pair<double, double>> samples;
        samples.reserve(m);
        for (int i = 0; i < m; ++i) {
            double th = 2.0 * 3.14159265358979323846 * i / m;
            samples.push_back({th, 1.0 / n.dual(std::cos(th), std::sin(th))});
        }
        PlanarNorm dual_tab = tabulated_norm(samples);
        double worst = 0;
        for (int i = 0; i < 512; ++i) {
            double th = 2.0 * 3.14159265358979323846 * (i + 0.21) / 512;
            Vec2 u{std::cos(th), std::sin(th)};
            worst = std::max(worst, std::abs(dual_eval(dual_tab, u) - n.eval(u.x, u.z)));
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("wulff_boundary examples") {
    WulffPolyline disc = wulff_boundary(euclidean_norm(), 360);
    CHECK(disc.area() == doctest::Approx(3.14159265358979).epsilon(1e-3));
    for (Vec2 q : disc.points)
        CHECK(euclidean_norm().dual(q.x, q.z) == doctest::Approx(1.0).epsilon(1e-10));

    WulffPolyline square = wulff_boundary(l1_norm(), 8);
    CHECK(square.exact);
    REQUIRE(square.points.size() == 4);
    for (Vec2 q : square.points) {
        CHECK(std::abs(q.x) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(q.z) == doctest::Approx(1.0).epsilon(1e-14));
    }

    PlanarNorm m = smooth_norm(linf_norm(), 0.1);
    WulffPolyline wm = wulff_boundary(m, 256);
    for (Vec2 q : wm.points) CHECK(m.dual(q.x, q.z) == doctest::Approx(1.0).epsilon(1e-8));
    // convex, closed polyline
    std::size_t k = wm.points.size();
    for (std::size_t i = 0; i < k; ++i) {
        Vec2 a = wm.points[i], b = wm.points[(i + 1) % k], c = wm.points[(i + 2) % k];
        CHECK(cross(b - a, c - b) >= -1e-12);
    }

    CHECK_THROWS_AS(wulff_boundary(euclidean_norm(), 4), std::invalid_argument);
}

TEST_CASE("smooth_norm approximation behaviour") {
    // mollifying the euclidean norm reproduces it
    PlanarNorm se = smooth_norm(euclidean_norm(), 0.3);
    double worst = 0;
    for (int i = 0; i < 720; ++i) {
        double th = 2.0 * 3.14159265358979323846 * i / 720;
        worst = std::max(worst, std::abs(se.eval(std::cos(th), std::sin(th)) - 1.0));
    }
    CHECK(worst <= 2.0 * 0.3);
    CHECK(worst <= 1e-10);  // exact for a constant circle restriction

    // sup-distance to l1 on the circle decreases along the eps sequence
    PlanarNorm l1 = l1_norm();
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {0.1, 0.05, 0.025}) {
        PlanarNorm s = smooth_norm(l1, eps);
        double sup = 0;
        for (int i = 0; i < 1440; ++i) {
            double th = 2.0 * 3.14159265358979323846 * i / 1440;
            sup = std::max(sup,
                           std::abs(s.eval(std::cos(th), std::sin(th)) -
                                    l1.eval(std::cos(th), std::sin(th))));
        }
        CHECK(sup < prev);
        prev = sup;
    }

    // output is uniformly convex: positive c1 in the two-sided bound
    HProfile hp = h_profile(smooth_norm(l1, 0.05), 100.0, 1001);
    CHECK(hp.c1 > 0.0);

    // one-homogeneous convexity needs G + G'' >= 0 on the circle; the
    // euclidean blend should keep it strictly positive for every base
    auto rng = seeded_rng(53);
    for (int trial = 0; trial < 6; ++trial) {
        PlanarNorm base = aniso::testing::random_polygon_norm(rng);
        std::uniform_real_distribution<double> ed(0.02, 0.3);
        PlanarNorm s = smooth_norm(base, ed(rng));
        for (int i = 0; i < 1024; ++i) {
            double th = 2.0 * 3.14159265358979323846 * i / 1024;
            double g = s.eval(std::cos(th), std::sin(th));
            CHECK(g + s.impl().circle_d2(th) > 0.0);
        }
    }

    CHECK_THROWS_AS(smooth_norm(l1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(smooth_norm(l1, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(smooth_norm(l1, 1e-4), std::invalid_argument);
}

TEST_CASE("h_profile matches the structure of the section function") {
    for (const auto& n : smooth_test_norms()) {
        HProfile hp = h_profile(n, 20.0, 801);
        // h(0) = phi(0,1)
        double h0 = n.eval(0, 1);
        std::size_t mid = hp.t.size() / 2;
        CHECK(hp.h[mid] == doctest::Approx(h0).epsilon(1e-12));
        for (std::size_t i = 0; i < hp.t.size(); ++i) {
            if (hp.t[i] > 1e-9) CHECK(hp.hp[i] <= 1e-10);
            if (hp.t[i] < -1e-9) CHECK(hp.hp[i] >= -1e-10);
            CHECK(hp.h[i] <= h0 + 1e-10);
            CHECK(hp.h[i] >= -h0 - 1e-10);
        }
        // convexity of h via second differences, per half-line: the linear
        // |t| term flips sign at 0, so stencils must not straddle the origin
        for (std::size_t i = 2; i < hp.t.size(); ++i) {
            if (hp.t[i - 2] < 0.0 && hp.t[i] > 0.0) continue;
            double d2 = hp.h[i] - 2 * hp.h[i - 1] + hp.h[i - 2];
            CHECK(d2 >= -1e-8);
        }
        // |h'(0+)| <= 2 phi(1,0)
        CHECK(std::abs(hp.hp[mid + 1]) <= 2.0 * n.eval(1, 0) + 1e-8);
    }

    // euclidean closed form: h(t) = sqrt(1+t^2) - |t|
    HProfile he = h_profile(euclidean_norm(), 10.0, 501);
    for (std::size_t i = 0; i < he.t.size(); ++i) {
        double t = he.t[i];
        CHECK(he.h[i] == doctest::Approx(std::sqrt(1 + t * t) - std::abs(t)).epsilon(1e-12));
    }
    CHECK(he.h.back() / 10.0 < 2.0 / 10.0);

    CHECK_THROWS_AS(h_profile(l1_norm(), 20.0, 500), std::invalid_argument);
    CHECK_THROWS_AS(h_profile(euclidean_norm(), 5.0, 500), std::invalid_argument);
    CHECK_THROWS_AS(h_profile(euclidean_norm(), 20.0, 50), std::invalid_argument);
}

TEST_CASE("tabulated norms repair to valid balls") {
    auto rng = seeded_rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        PlanarNorm n = aniso::testing::random_polygon_norm(rng);
        for (int k = 0; k < 50; ++k) {
            Vec2 p = aniso::testing::random_point(rng);
            CHECK(n.eval(p.x, p.z) > 0);
            CHECK(n.eval(-p.x, -p.z) == doctest::Approx(n.eval(p.x, p.z)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(tabulated_norm({{0.0, 1.0}, {1.0, -0.5}, {2.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("polyhedral validation rejects bad input") {
    CHECK_THROWS_AS(polyhedral_norm({{1, 0}, {0, 1}, {-1, 0}}), std::invalid_argument);  // asymmetric
    CHECK_THROWS_AS(polyhedral_norm({{1, 0}, {2, 0}, {-1, 0}, {-2, 0}}), std::invalid_argument);
}
