#pragma once

/** \file quadrature.hpp
 *  \brief Gauss rules and adaptive panel integration.
 *
 *  - Gauss-Legendre nodes/weights by Newton iteration on the recurrence.
 *  - Gauss-Hermite rule for integrals against exp(-x^2) on the whole line.
 *  - Adaptive bisection with a fixed 15-point Gauss panel rule and
 *    halving-based error estimate; dyadic panels toward 0 for integrands
 *    with an integrable singularity at the origin.
 */

#include <cmath>
#include <functional>
#include <vector>

namespace levi {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1] (cached per n).
const Rule& gauss_legendre(int n);

/// n-point Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre_ab(int n, double a, double b);

/// n-point Gauss-Hermite rule: sum w_i f(x_i) ~ integral e^{-x^2} f(x) dx (cached per n).
const Rule& gauss_hermite(int n);

/// Fixed 15-point Gauss quadrature of f on [a, b].
double gauss15(const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection quadrature; error estimated by panel halving.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-9, double abs_tol = 0.0, int max_depth = 40);

/// Integral of f over (0, r] where f may have an integrable singularity at 0:
/// dyadic panels [r 2^{-k-1}, r 2^{-k}] summed until they stop mattering.
/// Sets *diverged if partial sums exceed the divergence sentinel (1e12) or
/// the panel contributions fail to decay.
double integrate_dyadic_zero(const std::function<double(double)>& f, double r,
                             double rel_tol = 1e-9, bool* diverged = nullptr);

/// Dyadically refined Gauss panels on [a, b] accumulating toward the endpoint
/// `toward` (a or b) where the integrand is singular; `levels` halvings.
double integrate_graded(const std::function<double(double)>& f, double a, double b, double toward,
                        int levels, int nodes_per_panel);

/// Tensor Gauss-Hermite sweep over n coordinates (n <= 4) with per-axis
/// center and scale; the e^{|v|^2} compensation turns the weighted sum into a
/// plain integral of f over R^n.  The visitor receives the point as a
/// std::vector<double>.
template <class F>
double
tensor_hermite(int n, int nodes, const double* center, const double* scale, const F& f)
{
    const Rule& rule = gauss_hermite(nodes);
    int idx[4] = {0, 0, 0, 0};
    double total = 0.0;
    std::vector<double> y(static_cast<std::size_t>(n));
    double jac = 1.0;
    for (int d = 0; d < n; d++) {
        jac *= scale[d];
    }
    while (true) {
        double w = 1.0;
        double v2 = 0.0;
        for (int d = 0; d < n; d++) {
            double v = rule.x[static_cast<std::size_t>(idx[d])];
            y[static_cast<std::size_t>(d)] = center[d] + scale[d] * v;
            w *= rule.w[static_cast<std::size_t>(idx[d])];
            v2 += v * v;
        }
        double g = f(y);
        if (g != 0.0) {
            total += w * g * std::exp(v2);
        }
        int d = 0;
        for (; d < n; d++) {
            if (++idx[d] < nodes) {
                break;
            }
            idx[d] = 0;
        }
        if (d == n) {
            break;
        }
    }
    return jac * total;
}

} // namespace levi
