#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "gstein/gcore.hpp"
#include "testutil.hpp"

using namespace gstein;

TEST_CASE("g_eval on the reference band") {
    const GParams p(1.0, 2.0);
    CHECK(g_eval(1.0, p) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g_eval(-1.0, p) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(g_eval(0.0, p) == 0.0);
}

TEST_CASE("GParams validation") {
    CHECK_THROWS_AS(GParams(-0.1, 1.0), config_error);
    CHECK_THROWS_AS(GParams(2.0, 1.0), config_error);
    CHECK_THROWS_AS(GParams(1.0, std::numeric_limits<double>::infinity()), config_error);
    CHECK_THROWS_AS(GParams(0.0, 1.0).beta(), config_error);
    CHECK(GParams(1.0, 2.0).beta() == doctest::Approx(2.0));
    CHECK(GParams(1.0, 2.0).sigma_mid() == doctest::Approx(1.5));
}

TEST_CASE("G satisfies the sublinear-expectation generator axioms") {
    const GParams p(0.7, 1.9);
    testutil::Rng rng(11);
    for (int k = 0; k < 500; ++k) {
        const double a = rng.uniform(-20, 20);
        const double b = rng.uniform(-20, 20);
        const double lam = rng.uniform(0, 7);
        if (a >= b) CHECK(g_eval(a, p) >= g_eval(b, p));
        CHECK(g_eval(a + b, p) <= g_eval(a, p) + g_eval(b, p) + 1e-12);
        CHECK(g_eval(lam * a, p) == doctest::Approx(lam * g_eval(a, p)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate band reduces to the classical Laplacian coefficient") {
    const GParams p(1.3, 1.3);
    testutil::Rng rng(12);
    for (int k = 0; k < 100; ++k) {
        const double a = rng.uniform(-10, 10);
        CHECK(g_eval(a, p) == 0.5 * 1.3 * 1.3 * a);
    }
}

TEST_CASE("g_inverse examples and round trips") {
    const GParams p(1.0, 2.0);
    CHECK(g_inverse(2.0, p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g_inverse(-0.5, p) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(g_inverse(0.0, p) == 0.0);
    testutil::Rng rng(13);
    for (int k = 0; k < 200; ++k) {
        const double a = rng.uniform(-50, 50);
        CHECK(g_inverse(g_eval(a, p), p) == doctest::Approx(a).epsilon(1e-12));
        CHECK(g_eval(g_inverse(a, p), p) == doctest::Approx(a).epsilon(1e-12));
    }
    // degenerate lower bound: negative arguments have no preimage
    const GParams pz(0.0, 1.0);
    CHECK(g_inverse(1.0, pz) == doctest::Approx(2.0));
    CHECK_THROWS_AS(g_inverse(-1.0, pz), config_error);
}

TEST_CASE("Measure validation") {
    CHECK_THROWS_AS(Measure({0.0, 1.0}, {0.5, -0.5}), config_error);
    CHECK_THROWS_AS(Measure({0.0, 1.0}, {0.4, 0.4}), config_error);
    CHECK_THROWS_AS(Measure({1.0, 0.0}, {0.5, 0.5}), config_error);
    CHECK_THROWS_AS(Measure({}, {}), config_error);
    CHECK_NOTHROW(Measure({-1.0, 1.0}, {0.5, 0.5}));
}

TEST_CASE("measure_expectation examples") {
    const Measure m({-1.0, 1.0}, {0.5, 0.5});
    CHECK(measure_expectation(m, [](double x) { return x * x; }) == doctest::Approx(1.0));
    CHECK(measure_expectation(m, [](double) { return 1.0; }) == doctest::Approx(1.0));
}

TEST_CASE("discretized standard Gaussian second moment matches the quadrature oracle") {
    const Measure g = gaussian_measure(1.0, 8.0, 2001);
    const double impl = measure_expectation(g, [](double x) { return x * x; });
    const double oracle = testutil::gauss_expect([](double x) { return x * x; }, 1.0);
    CHECK(impl == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(impl == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(measure_expectation(g, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(g.mean()) < 1e-12);
}

TEST_CASE("gaussian_measure moments across sigma") {
    for (double s : {0.5, 1.5, 2.0}) {
        const Measure g = gaussian_measure(s);
        CHECK(g.variance() == doctest::Approx(s * s).epsilon(1e-8));
        CHECK(std::abs(g.mean()) < 1e-12);
    }
}

TEST_CASE("Grid validation and helpers") {
    CHECK_THROWS_AS(Grid(1.0, 2.0, 10, 1.0, 0.1), config_error);   // x_min must be < 0
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 1, 1.0, 0.1), config_error);
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 10, 1.0, 2.0), config_error);  // dt > t_max
    const Grid g(-10.0, 10.0, 2000, 1.0, 1e-4);
    CHECK(g.dx() == doctest::Approx(0.01));
    CHECK(g.n_nodes() == 2001);
    CHECK(g.nearest_node(0.0) == 1000);
    CHECK(g.nearest_node(-999.0) == 0);
    CHECK(g.node(1000) == doctest::Approx(0.0));
    CHECK_THROWS_AS(g.require_cfl(GParams(1.0, 2.0)), numeric_error);
    CHECK_NOTHROW(Grid(-10.0, 10.0, 2000, 1.0, 2e-5).require_cfl(GParams(1.0, 2.0)));
}
