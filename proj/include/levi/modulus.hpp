#pragma once

/** \file modulus.hpp
 *  \brief Moduli of continuity with their first and second logarithmic
 *         integrals and the quasi-monotonicity condition.
 *
 *  Shipped kinds:
 *   - holder(beta):   omega(r) = scale * r^beta
 *   - log_dini(alpha): omega(r) = scale * |log r|^{-alpha} for r < 1/2,
 *                      constant scale * (log 2)^{-alpha} above (alpha > 2
 *                      gives a modulus that is integrable twice against dr/r
 *                      but is not Hoelder of any order)
 *   - constant / zero
 *   - custom: arbitrary callable, integrals evaluated numerically
 *   - table: piecewise-linear interpolation of (r, omega) samples
 *
 *  The first integral int_0^r omega(x)/x dx and the iterated one are exposed
 *  as dini() and double_dini(); analytic fast paths cover the closed-form
 *  kinds, dyadic adaptive panels cover the rest.
 */

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace levi {

struct QuasiMonoReport {
    double delta = 0.0;
    double C = 0.0; ///< max observed r2^{-delta} w(r2) / (r1^{-delta} w(r1)), r1 <= r2
    bool ok = false;
};

struct OmegaExpReport {
    double C1 = 0.0;      ///< fitted constant in front of the right-hand side
    double c_prime = 0.0; ///< fitted enlarged time scale
    double worst_ratio = 0.0;
    bool ok = false;
};

struct Modulus {
    enum class Kind { Zero, Constant, Holder, LogDini, Custom, Table };

    Kind kind = Kind::Zero;
    double beta = 0.5;     ///< Hoelder exponent
    double alpha = 3.0;    ///< log decay exponent
    double scale = 1.0;    ///< multiplicative factor in front of omega
    double cap = std::numeric_limits<double>::infinity(); ///< optional trim
    double delta = 0.5;    ///< quasi-monotonicity exponent
    double quasi_mono_C = 1.0; ///< certified constant (see certify_quasi_mono)
    std::function<double(double)> custom_fn;
    /// Optional log-domain evaluator for custom kinds: s -> omega(e^{-s}).
    /// Lets the integrators reach arguments far below double underflow.
    std::function<double(double)> custom_log_fn;
    std::vector<double> table_r;
    std::vector<double> table_w;

    static Modulus zero();
    static Modulus constant(double c);
    static Modulus holder(double beta, double scale = 1.0);
    static Modulus log_dini(double alpha, double scale = 1.0);
    static Modulus custom(std::function<double(double)> fn, double delta = 0.5);
    static Modulus table(std::vector<double> r, std::vector<double> w);

    /// omega(r); nonnegative, nondecreasing, omega(0) = 0.
    double omega(double r) const;

    /// omega(e^{-s}) evaluated without forming e^{-s} when an analytic or
    /// custom log-domain form is available (needed for slowly decaying tails).
    double omega_log(double s) const;

    /// dini(e^{-s}) in the log domain (same underflow-free contract).
    double dini_log(double s) const;

    /// First integral int_0^r omega(x)/x dx; throws on detected divergence.
    double dini(double r) const;

    /// Iterated integral int_0^r dini(y)/y dy; throws on detected divergence.
    double double_dini(double r) const;

    /// int_0^T omega(x)^{1/2+eps} / x dx, evaluated numerically.
    /// Throws on detected divergence (signals a hypothesis violation).
    double half_power_integral(double eps, double T) const;

    /// Sample 64 log-spaced pairs and record the worst quasi-monotonicity
    /// constant for the given delta; updates this->delta / quasi_mono_C.
    QuasiMonoReport certify_quasi_mono(double delta_value, double r_max = 1.0);

    /// Fit constants (C1, c') for
    ///   omega^alpha(r) E_c(r, s) <= C1 omega^alpha(s) E_{c'}(r, s)
    /// over a log-spaced (r, s) grid, where
    /// E_c(r, s) = (c s^2)^{-Q/2} exp(-r^2 / (c s^2)).
    OmegaExpReport check_omega_exp(double alpha_pow, double c, int Q, double r_max = 2.0,
                                   double s_max = 1.0) const;

    /// Same fit for omega(r + s) E_c(r,s) <= C omega(c1 s) E_{c'}(r,s)
    /// with c1 fixed by the caller.
    OmegaExpReport check_subadditivity(double c, double c1, int Q, double r_max = 2.0,
                                       double s_max = 1.0) const;

    /// Fitted C' with omega(r) <= C' dini(r) over a log-spaced sample grid.
    double fit_omega_leq_dini(double r_max = 1.0) const;

    /// Returns a modulus evaluating c1 * omega(c2 * r).
    Modulus scaled(double c1, double c2) const;

    /// Returns a modulus evaluating omega(sqrt(r)).
    Modulus compose_sqrt() const;
};

/// Numeric first integral of fn against dx/x on (0, r] (dyadic panels).
double numeric_dini(const std::function<double(double)>& fn, double r, double rel_tol = 1e-10);

} // namespace levi
