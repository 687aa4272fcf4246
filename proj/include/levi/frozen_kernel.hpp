#pragma once

/** \file frozen_kernel.hpp
 *  \brief Constant-coefficient heat kernel on the preset groups, with Lie
 *         derivatives up to order two and the time derivative.
 *
 *  Euclidean backend: the explicit anisotropic Gaussian
 *      gamma(x,t) = (4 pi t)^{-n/2} (det A)^{-1/2} exp(-<A^{-1}x, x>/(4t)).
 *
 *  Heisenberg backend: the sub-Laplacian kernel for sum a_ij X_i X_j, reduced
 *  to the identity-matrix kernel by the horizontal automorphism
 *  (w, z) -> (A^{-1/2} w, z / sqrt(det A)), the identity kernel being
 *  evaluated from a one-dimensional integral representation in the
 *  center-dual variable (numerically integrated); dilation scaling collapses
 *  all times to t = 1.
 */

#include "levi/group.hpp"
#include "levi/linalg.hpp"

#include <array>

namespace levi {

/// Plain partial derivatives of the Heisenberg base kernel value at t = 1.
struct HeisPartials {
    double G = 0.0;
    double Gx = 0.0, Gy = 0.0, Gz = 0.0;
    double Gxx = 0.0, Gxy = 0.0, Gyy = 0.0;
    double Gxz = 0.0, Gyz = 0.0;
    double Gzz = 0.0;
};

/// Identity-matrix Heisenberg kernel and partials at time 1 from the
/// oscillatory integral representation; exposed for tests.
HeisPartials heisenberg_base_partials(double x, double y, double z);

struct FrozenKernel {
    struct Jet {
        double val = 0.0;
        std::array<double, 4> d1{};   ///< X_i gamma
        std::array<double, 16> d2{};  ///< X_i X_j gamma, row-major in (i,j)
        double dt = 0.0;              ///< d gamma / dt
    };

    Group g;
    SymMat A;

    FrozenKernel() = default;
    FrozenKernel(const Group& group, const SymMat& matrix);

    /// gamma(x, t); exactly 0 for t <= 0.
    double eval(const Vec& x, double t) const;

    /// Value plus all first/second Lie derivatives and the time derivative.
    /// Requires t > 0.
    Jet jet(const Vec& x, double t) const;

    double deriv1(int i, const Vec& x, double t) const;
    double deriv2(int i, int j, const Vec& x, double t) const;
    double deriv_t(const Vec& x, double t) const;

    /// gamma(xi^{-1} o x, t - tau): the two-point kernel form.
    double eval_rel(const Vec& x, double t, const Vec& xi, double tau) const;
    Jet jet_rel(const Vec& x, double t, const Vec& xi, double tau) const;

    /// |gamma(x, t+tau) - int gamma(y^{-1} o x, t) gamma(y, tau) dy|.
    double chapman_kolmogorov_residual(const Vec& x, double t, double tau,
                                       int nodes_per_axis = 32) const;

    /// int X_i X_j gamma(v, t) dv (or the time-derivative version when
    /// i < 0); vanishes analytically.
    double vanishing_integral(int i, int j, double t, int nodes_per_axis = 32) const;

    /// int gamma(v, t) dv over a truncated domain: should be 1.
    double normalization(double t, int nodes_per_axis = 32, double radius_factor = 8.0) const;

    // Cached reduction data (public for the engine's hot loops).
    SymMat Ainv;   ///< Euclidean: full inverse
    double detA = 1.0;
    SymMat Binv;   ///< Heisenberg: A^{-1/2}
    double detB = 1.0;
};

/// |gamma_{A1}(x,t) - gamma_{A2}(x,t)|: sensitivity of the kernel to the
/// frozen matrix, certified against the modulus bound by the verifier.
double coefficient_sensitivity(const FrozenKernel& k1, const FrozenKernel& k2, const Vec& x,
                               double t);

} // namespace levi
