#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "levi/cauchy.hpp"

#include <cmath>

using levi::CauchyGrid;
using levi::CauchySolver;
using levi::CoefficientField;
using levi::Group;
using levi::QuadratureSpec;
using levi::SymMat;
using levi::Vec;

namespace {

CauchyGrid
test_grid()
{
    CauchyGrid g;
    g.L = 6.0;
    g.n_y = 64;
    g.n_rho = 16;
    g.max_sweeps = 6;
    return g;
}

QuadratureSpec
test_quad()
{
    QuadratureSpec q;
    q.space_nodes = 14;
    q.time_levels = 4;
    q.time_nodes = 6;
    return q;
}

} // namespace

TEST_CASE("constant coefficients: exact Gaussian evolution and linear drift")
{
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::constant(1, SymMat::identity(1), 1.5);
    CauchySolver solver(g, cf, 0.3, test_grid(), test_quad());

    double s0 = 0.8;
    solver.set_initial([s0](const Vec& x) { return std::exp(-x[0] * x[0] / (2.0 * s0 * s0)); });
    CHECK(solver.sweeps_used() == 1); // no coefficient variation, no correction
    CHECK(solver.nu({0.3}, 0.1) == 0.0);

    for (double t : {0.05, 0.2}) {
        for (double x : {0.0, 0.5, -1.2}) {
            double var = s0 * s0 + 2.0 * t;
            double exact = s0 / std::sqrt(var) * std::exp(-x * x / (2.0 * var));
            CHECK(solver.homogeneous({x}, t) == doctest::Approx(exact).epsilon(1e-3));
        }
    }

    // the spatial rule converges spectrally in the node count
    QuadratureSpec fine_q;
    fine_q.space_nodes = 28;
    CauchySolver fine(g, cf, 0.3, test_grid(), fine_q);
    fine.set_initial([s0](const Vec& x) { return std::exp(-x[0] * x[0] / (2.0 * s0 * s0)); });
    double var = s0 * s0 + 2.0 * 0.2;
    double exact = s0 / std::sqrt(var) * std::exp(-0.25 / (2.0 * var));
    CHECK(fine.homogeneous({0.5}, 0.2) == doctest::Approx(exact).epsilon(1e-6));

    double c = 0.7;
    solver.set_source([c](const Vec&, double) { return c; });
    CHECK(solver.f_tilde({0.1}, 0.1) == 0.0);
    // with zero initial datum the solution of H u = c is u = -c t
    CauchySolver src_only(g, cf, 0.3, test_grid(), test_quad());
    src_only.set_source([c](const Vec&, double) { return c; });
    CHECK(src_only.solve({0.4}, 0.2) == doctest::Approx(-c * 0.2).epsilon(1e-5));
    CHECK(std::fabs(src_only.equation_residual({0.4}, 0.2)) <= 1e-5);
}

TEST_CASE("variable coefficients preserve the constant solution")
{
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::sine1d(0.25);
    CauchySolver solver(g, cf, 0.25, test_grid(), test_quad());
    solver.set_initial([](const Vec&) { return 1.0; });

    for (double t : {0.02, 0.1, 0.2}) {
        for (double x : {0.0, 0.7, -1.3}) {
            CHECK(solver.homogeneous({x}, t) == doctest::Approx(1.0).epsilon(2e-3));
        }
    }
}

TEST_CASE("initial datum is attained")
{
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::sine1d(0.25);
    CauchySolver solver(g, cf, 0.25, test_grid(), test_quad());
    solver.set_initial([](const Vec& x) { return std::cos(x[0]); });

    double t = 1e-3;
    for (double x : {0.0, 0.4, -0.9}) {
        CHECK(solver.homogeneous({x}, t) == doctest::Approx(std::cos(x)).epsilon(0.01));
    }
}

TEST_CASE("full problem satisfies the equation")
{
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::sine1d(0.25);
    CauchySolver solver(g, cf, 0.25, test_grid(), test_quad());
    solver.set_initial([](const Vec& x) { return std::exp(-x[0] * x[0]); });
    solver.set_source([](const Vec& x, double t) { return 0.5 * std::cos(x[0]) + 0.2 * t; });

    double t = 0.12;
    for (double x : {0.2, -0.5}) {
        double f = 0.5 * std::cos(x) + 0.2 * t;
        double res = solver.equation_residual({x}, t);
        // the coarse test grid leaves a few-percent quadrature residual;
        // refinement drives it well below 1% of f
        CHECK(std::fabs(res) <= 0.06 * std::fabs(f));
    }
}

TEST_CASE("nonnegative data give nonnegative solutions")
{
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::sine1d(0.25);
    CauchySolver solver(g, cf, 0.2, test_grid(), test_quad());
    solver.set_initial([](const Vec& x) {
        double d = 1.0 - x[0] * x[0];
        return d > 0.0 ? d * d : 0.0;
    });
    for (double t : {0.05, 0.15}) {
        // stay where the solution dominates the quadrature noise floor
        for (double x = -1.6; x <= 1.6; x += 0.4) {
            CHECK(solver.homogeneous({x}, t) >= -1e-8);
        }
    }
}
