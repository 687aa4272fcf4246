#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "levi/frozen_kernel.hpp"
#include "levi/group.hpp"

#include <cmath>

using levi::FrozenKernel;
using levi::Group;
using levi::SymMat;
using levi::Vec;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("euclidean closed-form values")
{
    Group g1 = Group::euclidean(1);
    FrozenKernel k(g1, SymMat::identity(1));
    CHECK(k.eval({0.0}, 1.0) == doctest::Approx(std::pow(4.0 * kPi, -0.5)).epsilon(1e-14));
    CHECK(k.eval({0.0}, 1.0) == doctest::Approx(0.2820948).epsilon(1e-6));

    Group g2 = Group::euclidean(2);
    FrozenKernel k2(g2, SymMat::diag({2.0, 0.5}));
    CHECK(k2.eval({0.0, 0.0}, 1.0) == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-14));

    CHECK(k.eval({1.0}, 0.0) == 0.0);
    CHECK(k.eval({1.0}, -1.0) == 0.0);
    CHECK_THROWS(k.jet({1.0}, 0.0));
}

TEST_CASE("euclidean derivatives against finite differences")
{
    Group g = Group::euclidean(1);
    FrozenKernel k(g, SymMat::identity(1));
    // second derivative of the 1D Gaussian at (1,1): gamma * (1/4 - 1/2)
    double expect = k.eval({1.0}, 1.0) * (0.25 - 0.5);
    CHECK(k.deriv2(0, 0, {1.0}, 1.0) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(k.deriv2(0, 0, {1.0}, 1.0) == doctest::Approx(-0.0549255).epsilon(1e-5));

    auto u = [&](const Vec& x) { return k.eval(x, 1.0); };
    CHECK(k.deriv1(0, {1.0}, 1.0) ==
          doctest::Approx(g.lie_derivative(u, 0, {1.0}, 1e-3)).epsilon(1e-8));
    CHECK(k.deriv2(0, 0, {1.0}, 1.0) ==
          doctest::Approx(g.lie_derivative2(u, 0, 0, {1.0}, 1e-3)).epsilon(1e-8));

    // odd symmetry at the origin
    CHECK(k.deriv1(0, {0.0}, 1.0) == doctest::Approx(0.0).epsilon(1e-300));
}

TEST_CASE("euclidean frozen equation holds analytically")
{
    Group g = Group::euclidean(2);
    SymMat A(2);
    A.at(0, 0) = 1.7;
    A.at(1, 1) = 0.9;
    A.at(0, 1) = A.at(1, 0) = 0.35;
    FrozenKernel k(g, A);
    for (double t : {0.2, 1.0}) {
        for (double x0 : {-0.7, 0.4}) {
            FrozenKernel::Jet j = k.jet({x0, 1.1}, t);
            double lhs = 0.0;
            for (int i = 0; i < 2; i++) {
                for (int jj = 0; jj < 2; jj++) {
                    lhs += A.at(i, jj) * j.d2[static_cast<std::size_t>(i * 4 + jj)];
                }
            }
            CHECK(lhs == doctest::Approx(j.dt).epsilon(1e-8));
        }
    }
}

TEST_CASE("euclidean sandwich ratio is exactly pi^{-1/2}")
{
    Group g = Group::euclidean(1);
    FrozenKernel k(g, SymMat::identity(1));
    for (double t : {0.01, 0.5, 2.0}) {
        for (double x : {0.0, 0.3, 2.0}) {
            double ratio = k.eval({x}, t) / g.envelope({x}, 4.0 * t);
            CHECK(ratio == doctest::Approx(std::pow(kPi, -0.5)).epsilon(1e-12));
        }
    }
}

TEST_CASE("euclidean normalization, semigroup and vanishing integrals")
{
    Group g = Group::euclidean(2);
    SymMat A(2);
    A.at(0, 0) = 1.5;
    A.at(1, 1) = 0.8;
    A.at(0, 1) = A.at(1, 0) = -0.3;
    FrozenKernel k(g, A);

    CHECK(k.normalization(0.7) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(k.chapman_kolmogorov_residual({0.0, 0.0}, 0.5, 0.5) <= 1e-10);
    CHECK(k.chapman_kolmogorov_residual({0.9, -0.4}, 0.3, 0.6) <= 1e-10);
    CHECK(std::fabs(k.vanishing_integral(0, 0, 0.5)) <= 1e-10);
    CHECK(std::fabs(k.vanishing_integral(0, 1, 0.5)) <= 1e-10);
    CHECK(std::fabs(k.vanishing_integral(-1, -1, 0.5)) <= 1e-10);

    Group g1 = Group::euclidean(1);
    FrozenKernel k1(g1, SymMat::identity(1));
    CHECK(k1.chapman_kolmogorov_residual({0.0}, 0.5, 0.5) <= 1e-12);
}

TEST_CASE("matrix sensitivity")
{
    Group g = Group::euclidean(1);
    FrozenKernel k1(g, SymMat::diag({1.0}));
    FrozenKernel k2(g, SymMat::diag({1.1}));
    double expect = std::pow(4.0 * kPi, -0.5) * (1.0 - std::pow(1.1, -0.5));
    CHECK(levi::coefficient_sensitivity(k1, k2, {0.0}, 1.0) ==
          doctest::Approx(expect).epsilon(1e-12));
    CHECK(levi::coefficient_sensitivity(k1, k2, {0.0}, 1.0) ==
          doctest::Approx(0.0131).epsilon(1e-2));
    CHECK(levi::coefficient_sensitivity(k1, k1, {0.3}, 1.0) == 0.0);

    // linear slope in the matrix perturbation
    double prev = 0.0;
    for (int s = 1; s <= 3; s++) {
        double eps = 0.1 / std::pow(2.0, s);
        FrozenKernel kp(g, SymMat::diag({1.0 + eps}));
        double d = levi::coefficient_sensitivity(k1, kp, {0.5}, 1.0) / eps;
        if (s > 1) {
            CHECK(d == doctest::Approx(prev).epsilon(0.05));
        }
        prev = d;
    }
}

TEST_CASE("heisenberg base kernel value at the origin")
{
    // int_0^inf s/sinh(s) ds = pi^2/4, so G(0,0) = 1/16
    levi::HeisPartials p = levi::heisenberg_base_partials(0.0, 0.0, 0.0);
    CHECK(p.G == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    CHECK(p.Gx == 0.0);
    CHECK(p.Gz == 0.0);
}

TEST_CASE("heisenberg dilation scaling and positivity")
{
    Group g = Group::heisenberg1();
    FrozenKernel k(g, SymMat::identity(2));
    Vec x = {0.7, -0.3, 0.2};
    for (double lam : {0.5, 2.0}) {
        double lhs = k.eval(g.dilate(lam, x), lam * lam * 1.3);
        double rhs = std::pow(lam, -4.0) * k.eval(x, 1.3);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    CHECK(k.eval(x, 0.4) > 0.0);
    CHECK(k.eval(x, -0.1) == 0.0);
}

TEST_CASE("heisenberg jet against flow finite differences")
{
    Group g = Group::heisenberg1();
    SymMat A(2);
    A.at(0, 0) = 1.4;
    A.at(1, 1) = 0.9;
    A.at(0, 1) = A.at(1, 0) = 0.25;
    FrozenKernel k(g, A);
    Vec x = {0.6, -0.4, 0.3};
    double t = 0.8;
    FrozenKernel::Jet j = k.jet(x, t);
    auto u = [&](const Vec& y) { return k.eval(y, t); };
    for (int i = 0; i < 2; i++) {
        CHECK(j.d1[static_cast<std::size_t>(i)] ==
              doctest::Approx(g.lie_derivative(u, i, x, 1e-3)).epsilon(1e-7));
        for (int jj = 0; jj < 2; jj++) {
            CHECK(j.d2[static_cast<std::size_t>(i * 4 + jj)] ==
                  doctest::Approx(g.lie_derivative2(u, i, jj, x, 1e-3)).epsilon(1e-6));
        }
    }
    double dt_fd = (k.eval(x, t + 1e-4) - k.eval(x, t - 1e-4)) / 2e-4;
    CHECK(j.dt == doctest::Approx(dt_fd).epsilon(1e-6));
}

TEST_CASE("heisenberg frozen equation")
{
    Group g = Group::heisenberg1();
    for (int which = 0; which < 2; which++) {
        SymMat A = SymMat::identity(2);
        if (which == 1) {
            A.at(0, 0) = 1.6;
            A.at(1, 1) = 0.8;
            A.at(0, 1) = A.at(1, 0) = 0.3;
        }
        FrozenKernel k(g, A);
        for (const Vec& x : {Vec{0.5, 0.2, 0.1}, Vec{-1.0, 0.7, -0.4}}) {
            for (double t : {0.3, 1.0}) {
                FrozenKernel::Jet j = k.jet(x, t);
                double lhs = 0.0;
                for (int i = 0; i < 2; i++) {
                    for (int jj = 0; jj < 2; jj++) {
                        lhs += A.at(i, jj) * j.d2[static_cast<std::size_t>(i * 4 + jj)];
                    }
                }
                CHECK(lhs == doctest::Approx(j.dt).epsilon(1e-4));
            }
        }
    }
}

TEST_CASE("heisenberg normalization and semigroup")
{
    Group g = Group::heisenberg1();
    FrozenKernel k(g, SymMat::identity(2));
    CHECK(k.normalization(0.5, 32) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(k.chapman_kolmogorov_residual(g.identity(), 0.25, 0.25, 24) <= 1e-2);
}

TEST_CASE("heisenberg vanishing integrals")
{
    Group g = Group::heisenberg1();
    FrozenKernel k(g, SymMat::identity(2));
    CHECK(std::fabs(k.vanishing_integral(0, 0, 0.5, 24)) <= 1e-2);
    CHECK(std::fabs(k.vanishing_integral(0, 1, 0.5, 24)) <= 1e-2);
    CHECK(std::fabs(k.vanishing_integral(-1, -1, 0.5, 24)) <= 1e-2);
}

TEST_CASE("two-point form and left invariance")
{
    Group g = Group::heisenberg1();
    FrozenKernel k(g, SymMat::identity(2));
    Vec xi = {0.3, -0.2, 0.1};
    Vec x = {0.8, 0.5, -0.3};
    double t = 1.1, tau = 0.4;
    CHECK(k.eval_rel(x, t, xi, tau) ==
          doctest::Approx(k.eval(g.compose(g.inverse(xi), x), t - tau)).epsilon(1e-14));
    CHECK(k.eval_rel(x, 0.3, xi, 0.4) == 0.0);

    // Lie derivatives in x of the translate agree with jet_rel
    FrozenKernel::Jet j = k.jet_rel(x, t, xi, tau);
    auto u = [&](const Vec& y) { return k.eval_rel(y, t, xi, tau); };
    CHECK(j.d1[0] == doctest::Approx(g.lie_derivative(u, 0, x, 1e-3)).epsilon(1e-7));
    CHECK(j.d2[5] == doctest::Approx(g.lie_derivative2(u, 1, 1, x, 1e-3)).epsilon(1e-6));
}

TEST_CASE("gaussian sandwich with fitted constants")
{
    Group g = Group::heisenberg1();
    FrozenKernel k(g, SymMat::identity(2));
    // gamma is comparable with the envelope E(x, ct) for some c on a
    // log-spaced grid; fit the smallest working c in {2,4,8,16}
    double best_upper = 0.0;
    for (double c : {2.0, 4.0, 8.0, 16.0}) {
        double worst = 0.0;
        for (double t : {0.1, 0.5, 2.0}) {
            for (double r : {0.0, 0.5, 1.0, 2.0, 4.0}) {
                Vec x = {r, 0.0, r * r / 4.0};
                double ratio = k.eval(x, t) / g.envelope(x, c * t);
                worst = std::fmax(worst, ratio);
            }
        }
        if (best_upper == 0.0 || worst < best_upper) {
            best_upper = worst;
        }
    }
    CHECK(std::isfinite(best_upper));
    CHECK(best_upper > 0.0);
    CHECK(best_upper < 100.0);
}
