#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "levi/coefficient_field.hpp"

#include <cmath>

using levi::CoefficientField;
using levi::Group;
using levi::SymMat;
using levi::Vec;

TEST_CASE("sine preset values and freezing")
{
    CoefficientField cf = CoefficientField::sine1d(0.25);
    SymMat A0 = cf.freeze({0.0}, 0.0);
    CHECK(A0.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    SymMat A1 = cf.freeze({std::asin(1.0)}, 0.0); // x = pi/2
    CHECK(A1.at(0, 0) == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(cf.Lambda >= 1.25);
}

TEST_CASE("freeze rejects out-of-range matrices")
{
    CoefficientField cf;
    cf.m = 1;
    cf.Lambda = 2.0;
    cf.mod = levi::Modulus::zero();
    cf.eval_fn = [](const Vec& x, double) {
        SymMat A(1);
        A.at(0, 0) = (x[0] > 0.0) ? 5.0 : 1.0;
        return A;
    };
    CHECK(cf.freeze({-1.0}, 0.0).at(0, 0) == doctest::Approx(1.0));
    CHECK_THROWS(cf.freeze({1.0}, 0.0));
}

TEST_CASE("validation passes for the shipped presets")
{
    Group e1 = Group::euclidean(1);
    Group e2 = Group::euclidean(2);

    auto rep = CoefficientField::sine1d(0.25).validate(e1, 3.0, 1.0, 4000, 7);
    CHECK(rep.ok);
    CHECK(rep.worst_continuity_ratio <= 1.0);

    auto rep2 = CoefficientField::rotating2d(0.2).validate(e2, 3.0, 1.0, 4000, 7);
    CHECK(rep2.ok);

    auto rep3 = CoefficientField::log_modulated1d(0.3, 3.0).validate(e1, 3.0, 1.0, 4000, 7);
    CHECK(rep3.ok);

    auto rep4 = CoefficientField::holder1d(0.4, 0.5).validate(e1, 3.0, 1.0, 4000, 7);
    CHECK(rep4.ok);

    auto rep5 = CoefficientField::constant(1, SymMat::identity(1), 1.5).validate(e1, 3.0, 1.0, 500, 7);
    CHECK(rep5.ok);
    CHECK(rep5.worst_continuity_ratio == 0.0);
}

TEST_CASE("validation flags a non-symmetric field")
{
    CoefficientField cf;
    cf.m = 2;
    cf.Lambda = 2.0;
    cf.mod = levi::Modulus::holder(1.0, 1.0);
    cf.eval_fn = [](const Vec&, double) {
        SymMat A(2);
        A.at(0, 0) = 1.0;
        A.at(1, 1) = 1.0;
        A.at(0, 1) = 0.1;
        A.at(1, 0) = -0.1;
        return A;
    };
    auto rep = cf.validate(Group::euclidean(2), 1.0, 1.0, 50, 3);
    CHECK(rep.worst_symmetry_residual > 0.1 - 1e-12);
    CHECK(!rep.ok);
}

TEST_CASE("preset lookup by name")
{
    CHECK(CoefficientField::by_name("constant", 0, 0, 0, 0).is_constant());
    CHECK(CoefficientField::by_name("sine", 0.25, 0, 0, 0).m == 1);
    CHECK(CoefficientField::by_name("rotating2d", 0.2, 0, 0, 0).m == 2);
    CHECK(CoefficientField::by_name("log_dini", 0, 0.3, 3.0, 0).m == 1);
    CHECK(CoefficientField::by_name("holder", 0, 0.4, 0, 0.5).m == 1);
    CHECK_THROWS(CoefficientField::by_name("nope", 0, 0, 0, 0));
}
