#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aniso/bowl.hpp"
#include "aniso/ode.hpp"
#include "test_util.hpp"

using namespace aniso;
using aniso::testing::seeded_rng;

TEST_CASE("f_eval closed forms and shape") {
    // euclidean factors: f(alpha) = 1/alpha
    CHECK(f_eval(euclidean_norm(), euclidean_norm(), 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f_eval(euclidean_norm(), euclidean_norm(), 0.25) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK_THROWS_AS(f_eval(euclidean_norm(), euclidean_norm(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(f_eval(euclidean_norm(), euclidean_norm(), -1.0), std::invalid_argument);

    PlanarNorm F = smooth_norm(l1_norm(), 0.1);
    PlanarNorm G = smooth_norm(linf_norm(), 0.1);

    // strictly decreasing on a positive grid
    double prev = std::numeric_limits<double>::infinity();
    for (double a = 0.05; a < 40.0; a *= 1.45) {
        double v = f_eval(F, G, a);
        CHECK(v < prev);
        prev = v;
    }
    // limits: f(0+) = +inf probed at 1e-8, f(inf) = 0 probed at 1e8
    CHECK(f_eval(F, G, 1e-8) > 1e6 * f_eval(F, G, 1.0));
    CHECK(f_eval(F, G, 1e8) < 1e-6);

    // alpha f(alpha) -> 1/(G(1,0) F_t(1,0)) with F_t(1,0) = F(1,0)
    double a = 1e6;
    CHECK(a * f_eval(euclidean_norm(), euclidean_norm(), a) == doctest::Approx(1.0).epsilon(1e-5));
    double target = 1.0 / (G.eval(1, 0) * F.eval(1, 0));
    CHECK(a * f_eval(F, G, a) == doctest::Approx(target).epsilon(1e-4));

    // Euler identity at (1,0)
    for (const PlanarNorm& n : {F, G, euclidean_norm()})
        CHECK(n.grad(1, 0).x == doctest::Approx(n.eval(1, 0)).epsilon(1e-8));
}

TEST_CASE("alpha_of_r closed forms, monotonicity and inversion") {
    CHECK(alpha_of_r(euclidean_norm(), euclidean_norm(), 2, 3.0) ==
          doctest::Approx(3.0).epsilon(1e-10));
    CHECK(alpha_of_r(euclidean_norm(), euclidean_norm(), 3, 4.0) ==
          doctest::Approx(2.0).epsilon(1e-10));
    CHECK_THROWS_AS(alpha_of_r(euclidean_norm(), euclidean_norm(), 2, 0.0), std::invalid_argument);

    PlanarNorm F = smooth_norm(l1_norm(), 0.15);
    PlanarNorm G = smooth_norm(l1_norm(), 0.15);

    // f(f^{-1}(y)) = y across six orders of magnitude
    for (double y = 1e-3; y <= 1e3; y *= 10.0) {
        double a = f_inverse(F, G, y);
        CHECK(f_eval(F, G, a) == doctest::Approx(y).epsilon(1e-10));
    }

    // alpha strictly increasing in r, vanishing at 0+
    double prev = 0.0;
    for (double r : {1e-4, 1e-2, 0.5, 2.0, 20.0, 500.0}) {
        double a = alpha_of_r(F, G, 2, r);
        CHECK(a > prev);
        prev = a;
    }
    CHECK(alpha_of_r(F, G, 2, 1e-8) < 1e-4);

    // alpha(r)/r -> 1/((N-1) G(1,0) F(1,0))
    for (int N : {2, 3}) {
        double r = 1e6;
        double lim = 1.0 / ((N - 1) * G.eval(1, 0) * F.eval(1, 0));
        CHECK(alpha_of_r(F, G, N, r) / r == doctest::Approx(lim).epsilon(1e-4));
    }
}

TEST_CASE("isotropic bowl profile: reduction, asymptote, shooting") {
    CylindricalAnisotropy a(euclidean_norm(), euclidean_norm(), 2, XiDescriptor::Euclidean(2));
    BowlProfile p = bowl_profile(a, 100.0, 1e-7);

    // general right-hand side reduces to w' = (1-(N-1)w/r)(1+w^2)
    for (std::size_t i = 0; i < p.r.size(); i += 7) {
        double closed = (1.0 - (a.N - 1) * p.w[i] / p.r[i]) * (1.0 + p.w[i] * p.w[i]);
        CHECK(bowl_rhs(a.F, a.G, a.N, p.r[i], p.w[i]) == doctest::Approx(closed).epsilon(1e-8));
    }

    // positive, strictly increasing, dominated by alpha
    for (std::size_t i = 0; i < p.r.size(); ++i) {
        CHECK(p.w[i] > 0.0);
        if (i) CHECK(p.w[i] > p.w[i - 1]);
        CHECK(p.w[i] <= p.alpha[i] + 1e-8);
    }
    CHECK(p.w.front() <= 1e-4);

    // w(r)/alpha(r) -> 1 toward R_max
    CHECK(p.w.back() / p.alpha.back() == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(p.asym_slope == doctest::Approx(1.0).epsilon(0.02));

    // shooting sup-differences decrease
    for (std::size_t k = 1; k < p.diag.sup_diffs.size(); ++k)
        if (p.diag.sup_diffs[k - 1] > 1e-8)
            CHECK(p.diag.sup_diffs[k] <= p.diag.sup_diffs[k - 1] * 1.05);

    CHECK_THROWS_AS(bowl_profile(a, 5.0, 1e-7), std::invalid_argument);
    CylindricalAnisotropy bad(l1_norm(), euclidean_norm(), 2, XiDescriptor::Euclidean(2));
    CHECK_THROWS_AS(bowl_profile(bad, 100.0, 1e-7), std::invalid_argument);
}

TEST_CASE("bowl profile for smooth anisotropic factors") {
    auto rng = seeded_rng(41);
    PlanarNorm F = aniso::testing::random_smooth_axis_even_norm(rng);
    PlanarNorm G = aniso::testing::random_smooth_axis_even_norm(rng);
    CylindricalAnisotropy a(F, G, 3, XiDescriptor::Euclidean(3));
    BowlProfile p = bowl_profile(a, 100.0, 1e-7);

    for (std::size_t i = 1; i < p.r.size(); ++i) {
        CHECK(p.w[i] > p.w[i - 1]);
        CHECK(p.w[i] <= p.alpha[i] + 1e-8);
    }
    double slope = 1.0 / ((a.N - 1) * G.eval(1, 0) * F.eval(1, 0));
    CHECK(p.asym_slope == doctest::Approx(slope).epsilon(0.02));
}

TEST_CASE("bowl_u_eval: integral of the profile") {
    CylindricalAnisotropy a(euclidean_norm(), euclidean_norm(), 3, XiDescriptor::Euclidean(3));
    BowlProfile p = bowl_profile(a, 100.0, 1e-7);

    CHECK(bowl_u_eval(p, 0.0) == 0.0);
    CHECK_THROWS_AS(bowl_u_eval(p, 101.0), std::invalid_argument);

    // midpoint convexity on random pairs
    auto rng = seeded_rng(43);
    std::uniform_real_distribution<double> sdist(0.0, 100.0);
    for (int k = 0; k < 300; ++k) {
        double s1 = sdist(rng), s2 = sdist(rng);
        double mid = bowl_u_eval(p, 0.5 * (s1 + s2));
        CHECK(mid <= 0.5 * (bowl_u_eval(p, s1) + bowl_u_eval(p, s2)) + 1e-12);
    }

    // quadratic growth coefficient
    double coeff = 1.0 / (2.0 * (a.N - 1));
    CHECK(bowl_u_eval(p, 100.0) / 1e4 == doctest::Approx(coeff).epsilon(0.05));
}

TEST_CASE("polar factorization on the listed slice combinations") {
    // F = l1 factor, xi euclidean: dual is max(|x|_2, |z|)
    CHECK(polar_factor_check(l1_norm(), euclidean_norm(), 2000) <= 1e-6);
    // isotropic: self-dual
    CHECK(polar_factor_check(euclidean_norm(), euclidean_norm(), 2000) <= 1e-8);
    // F = max factor, xi euclidean: dual is |x|_2 + |z|
    CHECK(polar_factor_check(linf_norm(), euclidean_norm(), 2000) <= 1e-6);

    // closed-form oracles on the slice through any direction e (|e| = 1):
    auto rng = seeded_rng(47);
    for (int k = 0; k < 200; ++k) {
        Vec2 q = aniso::testing::random_point(rng);
        double l1slice = dual_eval_scan(axis_scaled_norm(l1_norm(), 1.0), q);
        CHECK(l1slice ==
              doctest::Approx(std::max(std::abs(q.x), std::abs(q.z))).epsilon(1e-6));
        double linfslice = dual_eval_scan(axis_scaled_norm(linf_norm(), 1.0), q);
        CHECK(linfslice == doctest::Approx(std::abs(q.x) + std::abs(q.z)).epsilon(1e-6));
    }
}

TEST_CASE("cylindrical anisotropy validation") {
    // a generic symmetric polygon need not be even in each argument
    std::vector<Vec2> skew{{1.0, 0.3}, {-0.2, 1.0}, {-1.0, -0.3}, {0.2, -1.0}};
    CHECK_THROWS_AS(
        CylindricalAnisotropy(polyhedral_norm(skew), euclidean_norm(), 2, XiDescriptor::Euclidean(2)),
        std::invalid_argument);
    CHECK_THROWS_AS(
        CylindricalAnisotropy(euclidean_norm(), euclidean_norm(), 1, XiDescriptor::Euclidean(2)),
        std::invalid_argument);
    CHECK_THROWS_AS(
        CylindricalAnisotropy(euclidean_norm(), euclidean_norm(), 3, XiDescriptor::Euclidean(2)),
        std::invalid_argument);
}

TEST_CASE("bowl_approx_limit smooths non-smooth factors") {
    CylindricalAnisotropy a(l1_norm(), l1_norm(), 2, XiDescriptor::Euclidean(2));
    BowlApproxResult res = bowl_approx_limit(a, {0.2, 0.1, 0.05}, 50.0, 1e-6);
    CHECK(res.report.cauchy_ok);
    REQUIRE(res.report.sup_diffs.size() == 2);
    CHECK(res.report.sup_diffs[1] < res.report.sup_diffs[0]);
    // quadratic coefficient of the crystalline limit: both norms have
    // F(1,0) = G(1,0) = 1
    CHECK(res.finest.asym_slope == doctest::Approx(1.0).epsilon(0.05));
}
