#include "levi/coefficient_field.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace levi {

SymMat
CoefficientField::freeze(const Vec& xi, double tau) const
{
    SymMat A = eval_fn(xi, tau);
    double lo = A.min_eigenvalue();
    double hi = A.max_eigenvalue();
    if (lo < (1.0 / Lambda) * (1.0 - 1e-9) || hi > Lambda * (1.0 + 1e-9)) {
        throw std::runtime_error("CoefficientField::freeze: ellipticity violation");
    }
    return A;
}

FieldValidation
CoefficientField::validate(const Group& g, double box_half_width, double T, int sample_count,
                           unsigned long long seed) const
{
    if (sample_count < 1) {
        throw std::invalid_argument("CoefficientField::validate: sample_count must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ubox(-box_half_width, box_half_width);
    std::uniform_real_distribution<double> ut(0.0, T);

    FieldValidation rep;
    rep.worst_ellipticity_margin = std::numeric_limits<double>::infinity();
    rep.samples = sample_count;
    for (int s = 0; s < sample_count; s++) {
        Vec x(static_cast<std::size_t>(g.n));
        Vec xp(static_cast<std::size_t>(g.n));
        for (int i = 0; i < g.n; i++) {
            x[static_cast<std::size_t>(i)] = ubox(rng);
            xp[static_cast<std::size_t>(i)] = ubox(rng);
        }
        double t = ut(rng);
        double tp = ut(rng);
        if (t < tp) {
            std::swap(t, tp);
        }
        SymMat A = eval_fn(x, t);
        SymMat Ap = eval_fn(xp, tp);

        double sym = 0.0;
        for (int i = 0; i < m; i++) {
            for (int j = i + 1; j < m; j++) {
                sym = std::fmax(sym, std::fabs(A.at(i, j) - A.at(j, i)));
            }
        }
        rep.worst_symmetry_residual = std::fmax(rep.worst_symmetry_residual, sym);

        double lo = A.min_eigenvalue();
        double hi = A.max_eigenvalue();
        double margin = std::fmin(lo - 1.0 / Lambda, Lambda - hi);
        rep.worst_ellipticity_margin = std::fmin(rep.worst_ellipticity_margin, margin);

        double d = g.quasi_distance(x, xp) + std::sqrt(t - tp);
        double w = mod.omega(d);
        double da = A.max_abs_diff(Ap);
        if (da > 0.0 && w > 0.0) {
            rep.worst_continuity_ratio = std::fmax(rep.worst_continuity_ratio, da / w);
        } else if (da > 0.0 && w == 0.0) {
            rep.worst_continuity_ratio = std::numeric_limits<double>::infinity();
        }
    }
    rep.ok = rep.worst_ellipticity_margin >= -1e-12 && rep.worst_symmetry_residual <= 1e-14 &&
             rep.worst_continuity_ratio <= 1.0 + 1e-9;
    return rep;
}

CoefficientField
CoefficientField::constant(int m, const SymMat& A, double Lambda)
{
    CoefficientField cf;
    cf.m = m;
    cf.Lambda = Lambda;
    cf.mod = Modulus::zero();
    cf.constant_tag = true;
    cf.eval_fn = [A](const Vec&, double) { return A; };
    return cf;
}

CoefficientField
CoefficientField::sine1d(double amp)
{
    if (std::fabs(amp) >= 1.0) {
        throw std::invalid_argument("sine1d: |amp| must be < 1");
    }
    CoefficientField cf;
    cf.m = 1;
    cf.Lambda = std::fmax(1.5, 1.0 / (1.0 - std::fabs(amp)) + 0.25);
    cf.mod = Modulus::holder(1.0, std::fabs(amp));
    cf.mod.cap = 2.0 * std::fabs(amp);
    cf.eval_fn = [amp](const Vec& x, double) {
        SymMat A(1);
        A.at(0, 0) = 1.0 + amp * std::sin(x[0]);
        return A;
    };
    return cf;
}

CoefficientField
CoefficientField::rotating2d(double eps)
{
    if (eps < 0.0 || eps > 0.25) {
        throw std::invalid_argument("rotating2d: eps must be in [0, 0.25]");
    }
    CoefficientField cf;
    cf.m = 2;
    cf.Lambda = 2.0;
    // entries change by at most eps (|dx| + |dt|); generous Lipschitz scale
    cf.mod = Modulus::holder(1.0, 6.0 * eps);
    cf.mod.cap = 4.0 * eps;
    cf.eval_fn = [eps](const Vec& x, double t) {
        SymMat A(2);
        double s = std::sin(x[0] + t);
        double c = std::cos(x[1]);
        A.at(0, 0) = 1.0 + eps * s;
        A.at(1, 1) = 1.0 - eps * s;
        A.at(0, 1) = eps * c * 0.5;
        A.at(1, 0) = eps * c * 0.5;
        return A;
    };
    return cf;
}

CoefficientField
CoefficientField::log_modulated1d(double kappa, double alpha)
{
    if (kappa < 0.0) {
        throw std::invalid_argument("log_modulated1d: kappa must be >= 0");
    }
    CoefficientField cf;
    cf.m = 1;
    Modulus shape = Modulus::log_dini(alpha);
    double wmax = shape.omega(1.0); // constant branch value
    cf.Lambda = std::fmax(1.5, 1.0 + kappa * wmax + 0.25);
    cf.mod = Modulus::log_dini(alpha, 4.0 * kappa);
    cf.eval_fn = [kappa, shape](const Vec& x, double t) {
        SymMat A(1);
        A.at(0, 0) = 1.0 + kappa * shape.omega(std::fabs(x[0]) + std::sqrt(std::fmax(t, 0.0)));
        return A;
    };
    return cf;
}

CoefficientField
CoefficientField::holder1d(double kappa, double beta)
{
    if (kappa < 0.0) {
        throw std::invalid_argument("holder1d: kappa must be >= 0");
    }
    CoefficientField cf;
    cf.m = 1;
    cf.Lambda = std::fmax(1.5, 1.0 + kappa + 0.25);
    cf.mod = Modulus::holder(beta, kappa);
    cf.mod.cap = kappa;
    cf.eval_fn = [kappa, beta](const Vec& x, double t) {
        SymMat A(1);
        double r = std::fabs(x[0]) + std::sqrt(std::fmax(t, 0.0));
        A.at(0, 0) = 1.0 + kappa * std::fmin(std::pow(r, beta), 1.0);
        return A;
    };
    return cf;
}

CoefficientField
CoefficientField::by_name(const std::string& name, double amp, double kappa, double alpha,
                          double beta)
{
    if (name == "constant") {
        return constant(1, SymMat::identity(1), 1.5);
    }
    if (name == "sine") {
        return sine1d(amp);
    }
    if (name == "rotating2d") {
        return rotating2d(amp);
    }
    if (name == "log_dini") {
        return log_modulated1d(kappa, alpha);
    }
    if (name == "holder") {
        return holder1d(kappa, beta);
    }
    throw std::invalid_argument("CoefficientField::by_name: unknown preset '" + name + "'");
}

} // namespace levi
