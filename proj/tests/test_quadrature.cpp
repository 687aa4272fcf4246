#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "levi/quadrature.hpp"

#include <cmath>

TEST_CASE("gauss-legendre integrates polynomials exactly")
{
    const levi::Rule& r = levi::gauss_legendre(8);
    // degree 14 <= 2n-1 = 15
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); i++) {
        s += r.w[i] * std::pow(r.x[i], 14);
    }
    CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-13));

    double total_w = 0.0;
    for (double w : r.w) {
        total_w += w;
    }
    CHECK(total_w == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre mapped interval")
{
    levi::Rule r = levi::gauss_legendre_ab(12, 0.0, M_PI);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); i++) {
        s += r.w[i] * std::sin(r.x[i]);
    }
    CHECK(s == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("gauss-hermite moments")
{
    const levi::Rule& r = levi::gauss_hermite(32);
    double m0 = 0.0;
    double m2 = 0.0;
    double m4 = 0.0;
    for (std::size_t i = 0; i < r.size(); i++) {
        m0 += r.w[i];
        m2 += r.w[i] * r.x[i] * r.x[i];
        m4 += r.w[i] * std::pow(r.x[i], 4);
    }
    double sp = std::sqrt(M_PI);
    CHECK(m0 == doctest::Approx(sp).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(0.5 * sp).epsilon(1e-13));
    CHECK(m4 == doctest::Approx(0.75 * sp).epsilon(1e-13));
}

TEST_CASE("gauss-hermite against a shifted gaussian integrand")
{
    // integral of exp(-(x-1)^2/2)/sqrt(2 pi) over R = 1 via the substitution
    // x = 1 + sqrt(2) u
    const levi::Rule& r = levi::gauss_hermite(40);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); i++) {
        double x = 1.0 + std::sqrt(2.0) * r.x[i];
        double f = std::exp(-0.5 * (x - 1.0) * (x - 1.0)) / std::sqrt(2.0 * M_PI);
        s += r.w[i] * std::exp(r.x[i] * r.x[i]) * std::sqrt(2.0) * f;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adaptive quadrature on smooth integrands")
{
    double v = levi::integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-12));

    double w = levi::integrate_adaptive([](double x) { return std::exp(-x * x); }, -8.0, 8.0,
                                        1e-12);
    CHECK(w == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("dyadic panels handle an integrable endpoint singularity")
{
    bool div = false;
    double v = levi::integrate_dyadic_zero([](double x) { return 1.0 / std::sqrt(x); }, 1.0, 1e-10,
                                           &div);
    CHECK_FALSE(div);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-9));

    levi::integrate_dyadic_zero([](double x) { return 1.0 / x; }, 1.0, 1e-10, &div);
    CHECK(div);
}

TEST_CASE("graded panels toward a singular endpoint")
{
    double v = levi::integrate_graded([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 0.0,
                                      40, 16);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-6));

    double w = levi::integrate_graded([](double x) { return 1.0 / std::sqrt(1.0 - x); }, 0.0, 1.0,
                                      1.0, 40, 16);
    CHECK(w == doctest::Approx(2.0).epsilon(1e-6));
}
