#include "levi/modulus.hpp"

#include "levi/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace levi {

namespace {

const double kLog2 = std::log(2.0);

} // namespace

Modulus
Modulus::zero()
{
    Modulus w;
    w.kind = Kind::Zero;
    return w;
}

Modulus
Modulus::constant(double c)
{
    Modulus w;
    w.kind = Kind::Constant;
    w.scale = c;
    w.delta = 0.5;
    return w;
}

Modulus
Modulus::holder(double beta, double scale)
{
    if (beta <= 0.0 || beta > 1.0) {
        throw std::invalid_argument("Modulus::holder: beta must be in (0,1]");
    }
    Modulus w;
    w.kind = Kind::Holder;
    w.beta = beta;
    w.scale = scale;
    w.delta = beta;
    w.quasi_mono_C = 1.0;
    return w;
}

Modulus
Modulus::log_dini(double alpha, double scale)
{
    if (alpha <= 1.0) {
        throw std::invalid_argument("Modulus::log_dini: alpha must be > 1");
    }
    Modulus w;
    w.kind = Kind::LogDini;
    w.alpha = alpha;
    w.scale = scale;
    w.delta = 0.5;
    return w;
}

Modulus
Modulus::custom(std::function<double(double)> fn, double delta)
{
    Modulus w;
    w.kind = Kind::Custom;
    w.custom_fn = std::move(fn);
    w.delta = delta;
    return w;
}

Modulus
Modulus::table(std::vector<double> r, std::vector<double> wv)
{
    if (r.size() != wv.size() || r.size() < 2) {
        throw std::invalid_argument("Modulus::table: need matching vectors, size >= 2");
    }
    for (std::size_t i = 1; i < r.size(); i++) {
        if (r[i] <= r[i - 1] || wv[i] < wv[i - 1]) {
            throw std::invalid_argument("Modulus::table: r strictly increasing, w nondecreasing");
        }
    }
    Modulus w;
    w.kind = Kind::Table;
    w.table_r = std::move(r);
    w.table_w = std::move(wv);
    return w;
}

double
Modulus::omega(double r) const
{
    if (r <= 0.0) {
        return 0.0;
    }
    double v = 0.0;
    switch (kind) {
        case Kind::Zero:
            v = 0.0;
            break;
        case Kind::Constant:
            v = scale;
            break;
        case Kind::Holder:
            v = scale * std::pow(r, beta);
            break;
        case Kind::LogDini:
            v = (r < 0.5) ? scale * std::pow(-std::log(r), -alpha)
                          : scale * std::pow(kLog2, -alpha);
            break;
        case Kind::Custom:
            v = custom_fn(r);
            break;
        case Kind::Table: {
            if (r <= table_r.front()) {
                v = table_w.front() * (r / table_r.front());
            } else if (r >= table_r.back()) {
                v = table_w.back();
            } else {
                std::size_t lo = 0;
                std::size_t hi = table_r.size() - 1;
                while (hi - lo > 1) {
                    std::size_t mid = (lo + hi) / 2;
                    if (table_r[mid] <= r) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                double f = (r - table_r[lo]) / (table_r[hi] - table_r[lo]);
                v = table_w[lo] + f * (table_w[hi] - table_w[lo]);
            }
            break;
        }
    }
    return std::fmin(v, cap);
}

namespace {

[[noreturn]] void
throw_divergent(const char* what)
{
    throw std::runtime_error(std::string("Modulus: divergent integral in ") + what);
}

/// int_{s0}^{inf} fn(s) ds for a nonnegative, eventually decaying fn, with
/// panels of geometrically doubling width. Log-type integrands decay only
/// polynomially in s, so doubling panels make the panel sums geometric and
/// the remainder past the last panel is extrapolated from the panel ratio.
/// Throws when the panel sums fail to decay (divergent integral).
double
integrate_log_tail(const std::function<double(double)>& fn, double s0, double rel_tol,
                   const char* what)
{
    double total = 0.0;
    double s_lo = s0;
    double width = 1.0;
    double prev_panel = std::numeric_limits<double>::infinity();
    int quiet = 0;
    for (int k = 0; k < 120; k++) {
        double s_hi = s_lo + width;
        double panel = integrate_adaptive(fn, s_lo, s_hi, 1e-12, 0.0, 12);
        total += panel;
        if (std::fabs(total) > 1e12) {
            throw_divergent(what);
        }
        double floor = rel_tol * std::fmax(std::fabs(total), 1e-300);
        if (std::fabs(panel) <= floor || panel == 0.0) {
            quiet++;
            if (quiet >= 2) {
                double rho = (std::isfinite(prev_panel) && prev_panel > 0.0)
                                 ? panel / prev_panel
                                 : 0.0;
                if (rho > 0.0 && rho < 0.9) {
                    total += panel * rho / (1.0 - rho);
                }
                return total;
            }
        } else {
            quiet = 0;
            if (k > 8 && std::fabs(panel) >= 0.95 * std::fabs(prev_panel)) {
                throw_divergent(what);
            }
        }
        prev_panel = panel;
        s_lo = s_hi;
        width *= 2.0;
    }
    throw_divergent(what);
}

} // namespace

double
numeric_dini(const std::function<double(double)>& fn, double r, double rel_tol)
{
    if (r <= 0.0) {
        return 0.0;
    }
    // Substitute x = r e^{-s}: int_0^r fn(x)/x dx = int_0^inf fn(r e^{-s}) ds.
    // Black-box variant: accuracy is limited by argument underflow for
    // integrands with log-type tails; the Modulus methods use the log-domain
    // evaluators instead.
    return integrate_log_tail([&](double s) { return fn(r * std::exp(-s)); }, 0.0, rel_tol,
                              "numeric_dini");
}

double
Modulus::omega_log(double s) const
{
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Constant:
            return scale;
        case Kind::Holder:
            return std::fmin(scale * std::exp(-beta * s), cap);
        case Kind::LogDini: {
            double v = (s > kLog2) ? scale * std::pow(s, -alpha) : scale * std::pow(kLog2, -alpha);
            return std::fmin(v, cap);
        }
        case Kind::Custom:
            if (custom_log_fn) {
                return std::fmin(custom_log_fn(s), cap);
            }
            return omega(std::exp(-s));
        case Kind::Table:
        default:
            return omega(std::exp(-s));
    }
}

double
Modulus::dini_log(double s) const
{
    if (kind == Kind::Zero) {
        return 0.0;
    }
    if (kind == Kind::Constant) {
        throw_divergent("dini (constant modulus)");
    }
    bool cap_binding = std::isfinite(cap) && omega_log(s) >= cap;
    if (!cap_binding) {
        if (kind == Kind::Holder) {
            return scale * std::exp(-beta * s) / beta;
        }
        if (kind == Kind::LogDini) {
            if (alpha <= 1.0) {
                throw_divergent("dini (log modulus needs alpha > 1)");
            }
            double half = scale * std::pow(kLog2, 1.0 - alpha) / (alpha - 1.0);
            if (s >= kLog2) {
                return scale * std::pow(s, 1.0 - alpha) / (alpha - 1.0);
            }
            return half + scale * std::pow(kLog2, -alpha) * (kLog2 - s);
        }
    }
    return integrate_log_tail([this](double u) { return omega_log(u); }, s, 1e-10, "dini");
}

double
Modulus::dini(double r) const
{
    if (r <= 0.0) {
        return 0.0;
    }
    return dini_log(-std::log(r));
}

double
Modulus::double_dini(double r) const
{
    if (r <= 0.0) {
        return 0.0;
    }
    bool capped = std::isfinite(cap) && omega(r) >= cap;
    if (!capped) {
        if (kind == Kind::Zero) {
            return 0.0;
        }
        if (kind == Kind::Holder) {
            return scale * std::pow(r, beta) / (beta * beta);
        }
        if (kind == Kind::LogDini) {
            if (alpha <= 2.0) {
                throw_divergent("double_dini (log modulus needs alpha > 2)");
            }
            double a1 = alpha - 1.0;
            double a2 = alpha - 2.0;
            if (r <= 0.5) {
                return scale * std::pow(-std::log(r), 2.0 - alpha) / (a1 * a2);
            }
            double dd_half = scale * std::pow(kLog2, 2.0 - alpha) / (a1 * a2);
            double d_half = scale * std::pow(kLog2, 1.0 - alpha) / a1;
            double l = std::log(2.0 * r);
            return dd_half + d_half * l + scale * std::pow(kLog2, -alpha) * 0.5 * l * l;
        }
        if (kind == Kind::Constant) {
            throw_divergent("double_dini (constant modulus)");
        }
    }
    return integrate_log_tail([this](double s) { return dini_log(s); }, -std::log(r), 1e-9,
                              "double_dini");
}

double
Modulus::half_power_integral(double eps, double T) const
{
    if (eps <= 0.0 || eps >= 0.5) {
        throw std::invalid_argument("half_power_integral: eps must be in (0, 1/2)");
    }
    if (T <= 0.0) {
        return 0.0;
    }
    double p = 0.5 + eps;
    return integrate_log_tail([&](double s) { return std::pow(omega_log(s), p); }, -std::log(T),
                              1e-10, "half_power_integral");
}

QuasiMonoReport
Modulus::certify_quasi_mono(double delta_value, double r_max)
{
    QuasiMonoReport rep;
    rep.delta = delta_value;
    const int N = 64;
    std::vector<double> rs(N);
    for (int i = 0; i < N; i++) {
        rs[static_cast<std::size_t>(i)] =
            r_max * std::pow(10.0, -8.0 + 8.0 * i / (N - 1.0));
    }
    double worst = 0.0;
    for (int i = 0; i < N; i++) {
        double r1 = rs[static_cast<std::size_t>(i)];
        double w1 = omega(r1);
        if (w1 <= 0.0) {
            continue;
        }
        double lhs_den = std::pow(r1, -delta_value) * w1;
        for (int j = i; j < N; j++) {
            double r2 = rs[static_cast<std::size_t>(j)];
            double num = std::pow(r2, -delta_value) * omega(r2);
            worst = std::fmax(worst, num / lhs_den);
        }
    }
    rep.C = worst;
    rep.ok = std::isfinite(worst) && worst > 0.0;
    if (rep.ok) {
        delta = delta_value;
        quasi_mono_C = worst;
    }
    return rep;
}

namespace {

double
envelope_rs(double r, double s, double c, int Q)
{
    double ts = c * s * s;
    return std::pow(ts, -0.5 * Q) * std::exp(-r * r / ts);
}

OmegaExpReport
fit_exp_report(const std::function<double(double, double)>& lhs,
               const std::function<double(double, double, double)>& rhs_of_cp, double c,
               double r_max, double s_max)
{
    const int N = 24;
    std::vector<double> rs(N);
    std::vector<double> ss(N);
    for (int i = 0; i < N; i++) {
        rs[static_cast<std::size_t>(i)] = r_max * std::pow(10.0, -4.0 + 4.0 * i / (N - 1.0));
        ss[static_cast<std::size_t>(i)] = s_max * std::pow(10.0, -4.0 + 4.0 * i / (N - 1.0));
    }
    OmegaExpReport best;
    best.C1 = std::numeric_limits<double>::infinity();
    for (double mult : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        double cp = c * mult;
        double C1 = 0.0;
        for (double r : rs) {
            for (double s : ss) {
                double num = lhs(r, s);
                double den = rhs_of_cp(r, s, cp);
                if (den <= 0.0) {
                    if (num > 0.0) {
                        C1 = std::numeric_limits<double>::infinity();
                    }
                    continue;
                }
                C1 = std::fmax(C1, num / den);
            }
        }
        if (C1 < best.C1) {
            best.C1 = C1;
            best.c_prime = cp;
        }
    }
    best.worst_ratio = best.C1;
    best.ok = std::isfinite(best.C1);
    return best;
}

} // namespace

OmegaExpReport
Modulus::check_omega_exp(double alpha_pow, double c, int Q, double r_max, double s_max) const
{
    auto lhs = [&](double r, double s) {
        return std::pow(omega(r), alpha_pow) * envelope_rs(r, s, c, Q);
    };
    auto rhs = [&](double r, double s, double cp) {
        return std::pow(omega(s), alpha_pow) * envelope_rs(r, s, cp, Q);
    };
    return fit_exp_report(lhs, rhs, c, r_max, s_max);
}

OmegaExpReport
Modulus::check_subadditivity(double c, double c1, int Q, double r_max, double s_max) const
{
    auto lhs = [&](double r, double s) { return omega(r + s) * envelope_rs(r, s, c, Q); };
    auto rhs = [&](double r, double s, double cp) {
        return omega(c1 * s) * envelope_rs(r, s, cp, Q);
    };
    return fit_exp_report(lhs, rhs, c, r_max, s_max);
}

double
Modulus::fit_omega_leq_dini(double r_max) const
{
    const int N = 48;
    double worst = 0.0;
    for (int i = 0; i < N; i++) {
        double r = r_max * std::pow(10.0, -6.0 + 6.0 * i / (N - 1.0));
        double d = dini(r);
        if (d > 0.0) {
            worst = std::fmax(worst, omega(r) / d);
        }
    }
    return worst;
}

Modulus
Modulus::scaled(double c1, double c2) const
{
    if (kind == Kind::Holder && !std::isfinite(cap)) {
        return holder(beta, scale * c1 * std::pow(c2, beta));
    }
    Modulus self = *this;
    Modulus w = custom([self, c1, c2](double r) { return c1 * self.omega(c2 * r); }, delta);
    double lc2 = std::log(c2);
    w.custom_log_fn = [self, c1, lc2](double s) { return c1 * self.omega_log(s - lc2); };
    return w;
}

Modulus
Modulus::compose_sqrt() const
{
    Modulus self = *this;
    Modulus w = custom([self](double r) { return self.omega(std::sqrt(r)); }, 0.5 * delta);
    w.custom_log_fn = [self](double s) { return self.omega_log(0.5 * s); };
    return w;
}

} // namespace levi
