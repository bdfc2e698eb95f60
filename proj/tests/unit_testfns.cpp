#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gstein/testfns.hpp"
#include "testutil.hpp"

using namespace gstein;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("phi_beta values at the pinned points") {
    const GParams p(1.0, 2.0);  // beta = 2
    CHECK(phi_beta(0.0, p) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (double beta : {1.5, 2.0, 3.0}) {
        const GParams q(1.0, beta);
        CHECK(std::abs(phi_beta(kPi / (1.0 + beta), q)) < 1e-15);
    }
    CHECK_THROWS_AS(phi_beta(0.0, GParams(0.0, 1.0)), config_error);
}

TEST_CASE("phi_beta is 2*pi periodic") {
    const GParams p(1.0, 2.0);
    testutil::Rng rng(21);
    for (int k = 0; k < 300; ++k) {
        const double x = rng.uniform(-30, 30);
        CHECK(phi_beta(x + 2 * kPi, p) == doctest::Approx(phi_beta(x, p)).epsilon(1e-11));
        CHECK(phi_beta_d1(x + 2 * kPi, p) == doctest::Approx(phi_beta_d1(x, p)).epsilon(1e-11));
    }
}

TEST_CASE("phi_beta is C1 across both branch junctions") {
    for (double beta : {1.5, 2.0, 4.0}) {
        const GParams p(1.0, beta);
        const double xj = kPi / (1.0 + beta);
        // value and slope from the two branches agree at the junction
        CHECK(std::abs(phi_beta(xj - 1e-13, p) - phi_beta(xj, p)) < 1e-12);
        CHECK(phi_beta_d1(xj, p) == doctest::Approx(-1.0).epsilon(1e-12));
        CHECK(phi_beta_d1(xj - 1e-13, p) == doctest::Approx(-1.0).epsilon(1e-10));
        // the cell wrap point (end of the long arc)
        const double xw = (2.0 * beta + 1.0) * kPi / (1.0 + beta);
        CHECK(std::abs(phi_beta(xw, p) - phi_beta(xw - 1e-13, p)) < 1e-12);
        CHECK(phi_beta_d1(xw, p) == doctest::Approx(1.0).epsilon(1e-10));
        // second derivative vanishes from both sides there
        CHECK(std::abs(phi_beta_d2(xj, p)) < 1e-12);
        CHECK(std::abs(phi_beta_d2(xj - 1e-13, p)) < 1e-11);
    }
}

TEST_CASE("pointwise eigenrelation G(phi'') = -(sigma^2/2) phi") {
    const GParams p(1.0, 2.0);
    const double sig = p.sigma_mid();
    testutil::Rng rng(22);
    for (int k = 0; k < 10000; ++k) {
        const double x = rng.uniform(-20, 20);
        const double lhs = g_eval(phi_beta_d2(x, p), p);
        CHECK(std::abs(lhs + 0.5 * sig * sig * phi_beta(x, p)) < 1e-10);
    }
}

TEST_CASE("sign structure behind the eigenrelation") {
    const GParams p(1.0, 2.0);
    const double beta = 2.0;
    const double xj = kPi / (1.0 + beta);
    const double xe = (2.0 * beta + 1.0) * kPi / (1.0 + beta);
    testutil::Rng rng(23);
    for (int k = 0; k < 500; ++k) {
        const double y1 = rng.uniform(-kPi / (1.0 + beta), xj);
        CHECK(phi_beta(y1, p) >= -1e-15);
        CHECK(phi_beta_d2(y1, p) <= 1e-15);
        const double y2 = rng.uniform(xj, xe);
        CHECK(phi_beta(y2, p) <= 1e-15);
        CHECK(phi_beta_d2(y2, p) >= -1e-15);
    }
}

TEST_CASE("standard battery: size, derivative consistency, bounds") {
    const GParams p(1.0, 2.0);
    const auto battery = standard_battery(p);
    REQUIRE(battery.size() == 10);

    testutil::Rng rng(24);
    for (const auto& tf : battery) {
        CHECK(std::isfinite(tf.sup_norm));
        CHECK(tf.sup_norm > 0.0);
        const double h = 1e-4;
        const double scale = std::max(1.0, tf.sup_norm);
        for (int k = 0; k < 60; ++k) {
            const double x = rng.uniform(-7, 7);
            CHECK(std::abs(tf.f(x)) <= tf.sup_norm * (1.0 + 1e-12));
            const double fd1 = (tf.f(x + h) - tf.f(x - h)) / (2 * h);
            const double fd2 = (tf.d1(x + h) - tf.d1(x - h)) / (2 * h);
            // O(h^2) with a constant wide enough for the bump edges and the
            // third-derivative kinks of the clipped members
            CHECK(std::abs(fd1 - tf.d1(x)) <= 1000 * scale * h * h + 1e-10);
            CHECK(std::abs(fd2 - tf.d2(x)) <= 1000 * scale * h * h + 1e-10);
        }
    }
    const auto& bump = battery[6];
    CHECK(bump.name == "gaussian_bump");
    CHECK(bump.d2(0.0) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("clip constructions are C2 with the advertised plateaus") {
    const auto q = make_clip_quadratic(8.0, 2.0);
    CHECK(q.f(3.0) == doctest::Approx(9.0));
    CHECK(q.f(8.0) == doctest::Approx(64.0));
    CHECK(q.f(10.0) == doctest::Approx(q.sup_norm));
    CHECK(q.f(25.0) == q.f(10.5));
    CHECK(q.d1(10.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(q.d2(7.99) == doctest::Approx(2.0));
    // d2 continuity at the seams
    CHECK(q.d2(8.0 + 1e-10) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(std::abs(q.d2(10.0 - 1e-10)) < 1e-6);

    const auto l = make_clip_linear(1.0, 2.0);
    CHECK(l.f(0.5) == doctest::Approx(0.5));
    CHECK(l.f(5.0) == doctest::Approx(2.0));
    CHECK(l.f(-5.0) == doctest::Approx(-2.0));
    CHECK(l.d1(1.0 + 1e-10) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("eigen_solve plus branch: quadratic eigenfunction with rho = 1") {
    // x/2 * 2x + G(2) = x^2 + sigma_hi^2, normalized to 1 at the origin
    const GParams p(1.0, 2.0);
    const auto tf = eigen_solve(1.0, EigenSign::plus, p, EigenParity::even, 10.0, 4000);
    for (double x : {0.0, 0.5, 1.0, 3.0, -2.5, 9.5}) {
        CHECK(tf.f(x) == doctest::Approx((x * x + 4.0) / 4.0).epsilon(1e-6));
    }
}

TEST_CASE("eigen_solve minus branch: even rho = 1 solution stays on the concave arm") {
    // from (1, 0) the argument rho*f - x/2 f' stays at 1, so f'' = -2/sigma_lo^2
    // and the table is 1 - x^2/sigma_lo^2.  The minus family carries an
    // e^{x^2/(2 sigma_lo^2)} unstable mode, so tables are only meaningful on
    // moderate windows; |x| <= 6 keeps the amplified roundoff below 1e-8.
    const GParams p(1.0, 2.0);
    const auto tf = eigen_solve(1.0, EigenSign::minus, p, EigenParity::even, 6.0, 2400);
    for (double x : {0.0, 0.5, 1.0, 3.0, -2.5, 5.5}) {
        CHECK(tf.f(x) == doctest::Approx(1.0 - x * x).epsilon(1e-6));
    }
    // x^2 - sigma_hi^2 solves the same ODE on the convex arm; positive
    // rescaling by 1/sigma_hi^2 keeps it a solution
    const double shi2 = 4.0;
    auto resid = [&](double x) {
        const double f = (x * x - shi2) / shi2, d1 = 2.0 * x / shi2, d2 = 2.0 / shi2;
        return 0.5 * x * d1 - g_eval(d2, p) - 1.0 * f;
    };
    for (double x : {0.0, 1.0, 4.0}) CHECK(std::abs(resid(x)) < 1e-12);
}

TEST_CASE("eigen_solve minus branch: odd rho = 1/2 is the identity") {
    const GParams p(1.0, 2.0);
    const auto tf = eigen_solve(0.5, EigenSign::minus, p, EigenParity::odd, 6.0, 2400);
    for (double x : {0.0, 0.5, 1.0, 3.0, -2.5, 5.5}) {
        CHECK(tf.f(x) == doctest::Approx(x).epsilon(1e-9));
    }
}

TEST_CASE("eigen_solve tables satisfy the ODE residual") {
    const GParams p(1.0, 2.0);
    for (double rho : {0.7, 1.3}) {
        for (auto sign : {EigenSign::plus, EigenSign::minus}) {
            const double sgn = sign == EigenSign::plus ? 1.0 : -1.0;
            // the stored second-derivative table closes the ODE at every node
            {
                const auto tf = eigen_solve(rho, sign, p, EigenParity::even, 5.0, 2000);
                const auto& t = *tf.table;
                for (std::size_t i = 0; i < t.xs.size(); i += 7) {
                    const double resid =
                        0.5 * t.xs[i] * t.d1[i] + sgn * g_eval(t.d2[i], p) - rho * t.f[i];
                    CHECK(std::abs(resid) <= 1e-12 * (1.0 + std::abs(t.f[i])));
                }
            }
            // an independent finite-difference route agrees where the
            // curvature scale h^2 |f''''| permits the 1e-6 bound
            {
                const auto tf = eigen_solve(rho, sign, p, EigenParity::even, 3.0, 48000);
                const auto& t = *tf.table;
                const double h = t.xs[1] - t.xs[0];
                for (std::size_t i = 2; i + 2 < t.xs.size(); i += 97) {
                    const double fd2 = (t.d1[i + 1] - t.d1[i - 1]) / (2.0 * h);
                    const double resid =
                        0.5 * t.xs[i] * t.d1[i] + sgn * g_eval(fd2, p) - rho * t.f[i];
                    CHECK(std::abs(resid) <= 1e-6 * (1.0 + std::abs(t.f[i])));
                }
            }
        }
    }
}

TEST_CASE("eigen_solve input validation and the overflow cap") {
    const GParams p(1.0, 2.0);
    CHECK_THROWS_AS(eigen_solve(1.0, EigenSign::plus, GParams(0.0, 1.0), EigenParity::even,
                                10.0, 4000),
                    config_error);
    CHECK_THROWS_AS(eigen_solve(1.0, EigenSign::plus, p, EigenParity::even, 10.0, 4001),
                    config_error);
    CHECK_THROWS_AS(eigen_solve(-1.0, EigenSign::plus, p, EigenParity::even, 10.0, 4000),
                    config_error);
    // the minus family grows super-polynomially away from the special
    // eigen-solutions and must trip the cap
    CHECK_THROWS_AS(eigen_solve(2.0, EigenSign::minus, p, EigenParity::even, 8.0, 3200, 1e3),
                    numeric_error);
}

TEST_CASE("tabulated functions round-trip through CSV") {
    const GParams p(1.0, 2.0);
    const auto tf = eigen_solve(1.0, EigenSign::plus, p, EigenParity::even, 5.0, 400);
    std::stringstream buf;
    write_tabulated_csv(tf, buf);
    const auto back = read_tabulated_csv(buf, "roundtrip");
    testutil::Rng rng(25);
    for (int k = 0; k < 100; ++k) {
        const double x = rng.uniform(-5, 5);
        CHECK(back.f(x) == doctest::Approx(tf.f(x)).epsilon(1e-14));
        CHECK(back.d1(x) == doctest::Approx(tf.d1(x)).epsilon(1e-14));
        CHECK(back.d2(x) == doctest::Approx(tf.d2(x)).epsilon(1e-14));
    }
    // interpolation is interpolatory at the nodes and clamps outside
    const auto& t = *tf.table;
    CHECK(back.f(t.xs[3]) == doctest::Approx(t.f[3]).epsilon(1e-15));
    CHECK(back.f(100.0) == doctest::Approx(t.f.back()));

    std::stringstream bad("nope\n1,2,3,4\n");
    CHECK_THROWS_AS(read_tabulated_csv(bad, "bad"), config_error);
}

TEST_CASE("make_tabulated validation") {
    CHECK_THROWS_AS(make_tabulated("t", {0.0}, {1.0}, {0.0}, {0.0}), config_error);
    CHECK_THROWS_AS(make_tabulated("t", {0.0, 1.0, 1.5}, {1, 1, 1}, {0, 0, 0}, {0, 0, 0}),
                    config_error);
}
