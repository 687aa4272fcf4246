#include "levi/frozen_kernel.hpp"

#include "levi/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace levi {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// s / sinh(s), series-guarded near 0.
double f_sinh(double s)
{
    if (s < 1e-4) {
        double s2 = s * s;
        return 1.0 - s2 / 6.0 + 7.0 * s2 * s2 / 360.0;
    }
    return s / std::sinh(s);
}

/// s * coth(s), series-guarded near 0.
double phi_coth(double s)
{
    if (s < 1e-4) {
        double s2 = s * s;
        return 1.0 + s2 / 3.0 - s2 * s2 / 45.0;
    }
    return s * std::cosh(s) / std::sinh(s);
}

/// The six base integrals of the identity-matrix kernel representation at
/// t = 1, accumulated in one pass over composite Gauss panels.
struct BaseIntegrals {
    double T0 = 0.0; ///< int f e^{-a phi} cos(sz)
    double T1 = 0.0; ///< int f phi e^{-a phi} cos(sz)
    double T2 = 0.0; ///< int f phi^2 e^{-a phi} cos(sz)
    double U1 = 0.0; ///< int f s e^{-a phi} sin(sz)
    double U2 = 0.0; ///< int f s phi e^{-a phi} sin(sz)
    double V2 = 0.0; ///< int f s^2 e^{-a phi} cos(sz)
};

BaseIntegrals base_integrals(double a, double z)
{
    // The integrand decays like e^{-(1+a)s} for large s; panels are sized to
    // resolve the cos(sz)/sin(sz) oscillation.
    double S = 45.0 / (1.0 + a);
    double width = std::fmin(2.0, 8.0 / std::fmax(std::fabs(z), 1.0));
    const Rule& rule = gauss_legendre(16);
    BaseIntegrals out;
    double lo = 0.0;
    while (lo < S) {
        double hi = std::fmin(lo + width, S);
        double mid = 0.5 * (lo + hi);
        double half = 0.5 * (hi - lo);
        for (std::size_t k = 0; k < rule.size(); k++) {
            double s = mid + half * rule.x[k];
            double w = half * rule.w[k];
            double f = f_sinh(s);
            double phi = phi_coth(s);
            double e = std::exp(-a * phi);
            double c = std::cos(s * z);
            double sn = std::sin(s * z);
            double base = w * f * e;
            out.T0 += base * c;
            out.T1 += base * phi * c;
            out.T2 += base * phi * phi * c;
            out.U1 += base * s * sn;
            out.U2 += base * s * phi * sn;
            out.V2 += base * s * s * c;
        }
        lo = hi;
    }
    if (!std::isfinite(out.T0) || !std::isfinite(out.T2) || !std::isfinite(out.V2)) {
        throw std::runtime_error("heisenberg base kernel: integral did not converge");
    }
    return out;
}

/// Tensor Gauss-Hermite sweep over dim coordinates: calls
/// visit(y, compensation) for y = center + scale-mapped node, where
/// compensation = prod(w_k) * exp(|u|^2) * prod(scales) so that
/// sum visit-contributions approximates the plain integral of the visitor's
/// integrand over R^dim.
template <class F>
double tensor_gauss_hermite(int dim, int nodes, const F& integrand,
                            const std::function<Vec(const double*)>& to_point)
{
    const Rule& rule = gauss_hermite(nodes);
    std::vector<int> idx(static_cast<std::size_t>(dim), 0);
    double total = 0.0;
    bool done = false;
    std::vector<double> u(static_cast<std::size_t>(dim));
    while (!done) {
        double w = 1.0;
        double u2 = 0.0;
        for (int d = 0; d < dim; d++) {
            double x = rule.x[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
            u[static_cast<std::size_t>(d)] = x;
            w *= rule.w[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
            u2 += x * x;
        }
        Vec y = to_point(u.data());
        double g = integrand(y);
        if (g != 0.0) {
            total += w * g * std::exp(u2);
        }
        int d = 0;
        for (; d < dim; d++) {
            idx[static_cast<std::size_t>(d)]++;
            if (idx[static_cast<std::size_t>(d)] < nodes) {
                break;
            }
            idx[static_cast<std::size_t>(d)] = 0;
        }
        done = (d == dim);
    }
    return total;
}

/// Integral over the Heisenberg group of a kernel-type integrand centered at
/// `c`: Gauss-Hermite in the two horizontal coordinates (Gaussian decay) and
/// composite Gauss-Legendre panels in the center coordinate, whose tails are
/// only exponential (the kernel behaves like e^{-pi |z| / t} there).
template <class F>
double heis_integral(const F& integrand, const Vec& c, double sh, double zspan, int n_h)
{
    const Rule& rh = gauss_hermite(n_h);
    const Rule& rz = gauss_legendre(16);
    const int n_panels = 16;
    double panel = 2.0 * zspan / n_panels;
    double total = 0.0;
    for (std::size_t i = 0; i < rh.size(); i++) {
        for (std::size_t j = 0; j < rh.size(); j++) {
            double y1 = c[0] + sh * rh.x[i];
            double y2 = c[1] + sh * rh.x[j];
            double wij = rh.w[i] * rh.w[j] * std::exp(rh.x[i] * rh.x[i] + rh.x[j] * rh.x[j]);
            double inner = 0.0;
            for (int p = 0; p < n_panels; p++) {
                double lo = c[2] - zspan + p * panel;
                double mid = lo + 0.5 * panel;
                double half = 0.5 * panel;
                for (std::size_t k = 0; k < rz.size(); k++) {
                    double z = mid + half * rz.x[k];
                    inner += half * rz.w[k] * integrand(Vec{y1, y2, z});
                }
            }
            total += wij * inner;
        }
    }
    return sh * sh * total;
}

} // namespace

HeisPartials
heisenberg_base_partials(double x, double y, double z)
{
    const double C0 = 1.0 / (4.0 * kPi * kPi);
    double a = (x * x + y * y) / 4.0;
    // z -> -z symmetry: the cosine integrals are even, the sine ones odd.
    double sz = (z < 0.0) ? -1.0 : 1.0;
    BaseIntegrals I = base_integrals(a, std::fabs(z));
    I.U1 *= sz;
    I.U2 *= sz;

    HeisPartials p;
    p.G = C0 * I.T0;
    p.Gx = -0.5 * x * C0 * I.T1;
    p.Gy = -0.5 * y * C0 * I.T1;
    p.Gz = -C0 * I.U1;
    p.Gxx = C0 * (-0.5 * I.T1 + 0.25 * x * x * I.T2);
    p.Gyy = C0 * (-0.5 * I.T1 + 0.25 * y * y * I.T2);
    p.Gxy = C0 * 0.25 * x * y * I.T2;
    p.Gxz = C0 * 0.5 * x * I.U2;
    p.Gyz = C0 * 0.5 * y * I.U2;
    p.Gzz = -C0 * I.V2;
    return p;
}

FrozenKernel::FrozenKernel(const Group& group, const SymMat& matrix) : g(group), A(matrix)
{
    if (A.m != g.m) {
        throw std::invalid_argument("FrozenKernel: matrix dimension must match the horizontal layer");
    }
    detA = A.det();
    if (detA <= 0.0 || A.min_eigenvalue() <= 0.0) {
        throw std::invalid_argument("FrozenKernel: matrix must be positive definite");
    }
    Ainv = A.inverse();
    if (!g.is_euclidean()) {
        SymMat B = A.sqrt_spd();
        detB = B.det();
        Binv = B.inverse();
    }
}

double
FrozenKernel::eval(const Vec& x, double t) const
{
    if (t <= 0.0) {
        return 0.0;
    }
    if (g.is_euclidean()) {
        int n = g.n;
        double q = Ainv.quad(x.data());
        double norm = std::pow(4.0 * kPi * t, -0.5 * n) / std::sqrt(detA);
        return norm * std::exp(-q / (4.0 * t));
    }
    double rt = std::sqrt(t);
    // dilation scaling collapses to t = 1, then the automorphism to A = I
    double u1 = x[0] / rt;
    double u2 = x[1] / rt;
    double u3 = x[2] / t;
    double w1 = Binv.at(0, 0) * u1 + Binv.at(0, 1) * u2;
    double w2 = Binv.at(1, 0) * u1 + Binv.at(1, 1) * u2;
    double zt = u3 / detB;
    double a = (w1 * w1 + w2 * w2) / 4.0;
    BaseIntegrals I = base_integrals(a, std::fabs(zt));
    const double C0 = 1.0 / (4.0 * kPi * kPi);
    return (C0 * I.T0) / (detA * t * t);
}

FrozenKernel::Jet
FrozenKernel::jet(const Vec& x, double t) const
{
    if (t <= 0.0) {
        throw std::domain_error("FrozenKernel::jet: requires t > 0");
    }
    Jet out;
    if (g.is_euclidean()) {
        int n = g.n;
        double u[4] = {0, 0, 0, 0};
        Ainv.mul(x.data(), u);
        double q = 0.0;
        for (int i = 0; i < n; i++) {
            q += u[i] * x[static_cast<std::size_t>(i)];
        }
        double gamma = std::pow(4.0 * kPi * t, -0.5 * n) / std::sqrt(detA) *
                       std::exp(-q / (4.0 * t));
        out.val = gamma;
        for (int i = 0; i < n; i++) {
            out.d1[static_cast<std::size_t>(i)] = gamma * (-u[i] / (2.0 * t));
            for (int j = 0; j < n; j++) {
                out.d2[static_cast<std::size_t>(i * 4 + j)] =
                    gamma * (u[i] * u[j] / (4.0 * t * t) - Ainv.at(i, j) / (2.0 * t));
            }
        }
        out.dt = gamma * (-0.5 * n / t + q / (4.0 * t * t));
        return out;
    }

    // Heisenberg: jet of G_A(w,z) = (det A)^{-1} G_I(Binv w, z/detB) by the
    // chain rule, then the left-invariant combinations, then dilation scaling.
    double rt = std::sqrt(t);
    double u1 = x[0] / rt;
    double u2 = x[1] / rt;
    double u3 = x[2] / t;
    double w1 = Binv.at(0, 0) * u1 + Binv.at(0, 1) * u2;
    double w2 = Binv.at(1, 0) * u1 + Binv.at(1, 1) * u2;
    double zt = u3 / detB;
    HeisPartials q = heisenberg_base_partials(w1, w2, zt);

    double D = detA;
    double gI1[2] = {q.Gx, q.Gy};
    double gI2[2][2] = {{q.Gxx, q.Gxy}, {q.Gxy, q.Gyy}};
    double gIz1[2] = {q.Gxz, q.Gyz};

    double G = q.G / D;
    double Gw[2];
    double Gww[2][2];
    double Gwz[2];
    for (int a = 0; a < 2; a++) {
        Gw[a] = (Binv.at(a, 0) * gI1[0] + Binv.at(a, 1) * gI1[1]) / D;
        Gwz[a] = (Binv.at(a, 0) * gIz1[0] + Binv.at(a, 1) * gIz1[1]) / (D * detB);
    }
    for (int a = 0; a < 2; a++) {
        for (int b = 0; b < 2; b++) {
            double s = 0.0;
            for (int c = 0; c < 2; c++) {
                for (int d = 0; d < 2; d++) {
                    s += Binv.at(a, c) * Binv.at(b, d) * gI2[c][d];
                }
            }
            Gww[a][b] = s / D;
        }
    }
    double Gz = q.Gz / (D * detB);
    double Gzz = q.Gzz / (D * detB * detB);

    // Left-invariant fields at the dilated point u = (u1, u2, u3):
    // X1 = d/dw1 - (u2/2) d/dz, X2 = d/dw2 + (u1/2) d/dz.
    double X1 = Gw[0] - 0.5 * u2 * Gz;
    double X2 = Gw[1] + 0.5 * u1 * Gz;
    double X11 = Gww[0][0] - u2 * Gwz[0] + 0.25 * u2 * u2 * Gzz;
    double X22 = Gww[1][1] + u1 * Gwz[1] + 0.25 * u1 * u1 * Gzz;
    double cross = Gww[0][1] + 0.5 * u1 * Gwz[0] - 0.5 * u2 * Gwz[1] - 0.25 * u1 * u2 * Gzz;
    double X12 = cross + 0.5 * Gz;
    double X21 = cross - 0.5 * Gz;

    double t2 = t * t;
    double t3 = t2 * t;
    out.val = G / t2;
    out.d1[0] = X1 / (t2 * rt);
    out.d1[1] = X2 / (t2 * rt);
    out.d2[0] = X11 / t3;
    out.d2[1] = X12 / t3;
    out.d2[4] = X21 / t3;
    out.d2[5] = X22 / t3;
    out.dt = (-2.0 * G - 0.5 * (u1 * Gw[0] + u2 * Gw[1]) - u3 * Gz) / t3;
    return out;
}

double
FrozenKernel::deriv1(int i, const Vec& x, double t) const
{
    return jet(x, t).d1[static_cast<std::size_t>(i)];
}

double
FrozenKernel::deriv2(int i, int j, const Vec& x, double t) const
{
    return jet(x, t).d2[static_cast<std::size_t>(i * 4 + j)];
}

double
FrozenKernel::deriv_t(const Vec& x, double t) const
{
    return jet(x, t).dt;
}

double
FrozenKernel::eval_rel(const Vec& x, double t, const Vec& xi, double tau) const
{
    if (t - tau <= 0.0) {
        return 0.0;
    }
    return eval(g.compose(g.inverse(xi), x), t - tau);
}

FrozenKernel::Jet
FrozenKernel::jet_rel(const Vec& x, double t, const Vec& xi, double tau) const
{
    // Left invariance: Lie derivatives in x of gamma(xi^{-1} o x, .) equal
    // the Lie derivatives of gamma at the composed point.
    return jet(g.compose(g.inverse(xi), x), t - tau);
}

double
FrozenKernel::chapman_kolmogorov_residual(const Vec& x, double t, double tau,
                                          int nodes_per_axis) const
{
    if (t <= 0.0 || tau <= 0.0) {
        throw std::domain_error("chapman_kolmogorov_residual: requires t, tau > 0");
    }
    double target = eval(x, t + tau);
    double integral = 0.0;

    if (g.is_euclidean()) {
        int n = g.n;
        // Completing the square in the product of the two Gaussians makes the
        // integrand exactly K e^{-|u|^2} after y = y* + B u with
        // B = sqrt(A * 4 t tau / (t + tau)); the Hermite rule is then exact.
        Vec ystar(static_cast<std::size_t>(n));
        for (int i = 0; i < n; i++) {
            ystar[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] * tau / (t + tau);
        }
        SymMat M = A;
        double fac = 4.0 * t * tau / (t + tau);
        for (int i = 0; i < n; i++) {
            for (int j = 0; j < n; j++) {
                M.at(i, j) *= fac;
            }
        }
        SymMat B = M.sqrt_spd();
        double dB = B.det();
        auto to_point = std::function<Vec(const double*)>([&](const double* u) {
            Vec y = ystar;
            double by[4] = {0, 0, 0, 0};
            B.mul(u, by);
            for (int i = 0; i < n; i++) {
                y[static_cast<std::size_t>(i)] += by[i];
            }
            return y;
        });
        integral = dB * tensor_gauss_hermite(
                            n, nodes_per_axis,
                            [&](const Vec& y) {
                                return eval(y, tau) * eval(g.compose(g.inverse(y), x), t);
                            },
                            to_point);
        return std::fabs(target - integral);
    }

    // Heisenberg: Gauss-Hermite horizontally, wide Legendre panels vertically.
    double lam = A.max_eigenvalue();
    double teff = t * tau / (t + tau);
    double sh = std::sqrt(8.0 * lam * teff);
    double zspan = 6.0 * lam * (t + tau);
    Vec c(3);
    for (int i = 0; i < 3; i++) {
        c[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] * tau / (t + tau);
    }
    integral = heis_integral(
        [&](const Vec& y) { return eval(y, tau) * eval(g.compose(g.inverse(y), x), t); }, c, sh,
        zspan, nodes_per_axis);
    return std::fabs(target - integral);
}

double
FrozenKernel::vanishing_integral(int i, int j, double t, int nodes_per_axis) const
{
    if (t <= 0.0) {
        throw std::domain_error("vanishing_integral: requires t > 0");
    }
    auto integrand = [&](const Vec& v) {
        Jet jt = jet(v, t);
        if (i < 0) {
            return jt.dt;
        }
        return jt.d2[static_cast<std::size_t>(i * 4 + j)];
    };

    if (g.is_euclidean()) {
        int n = g.n;
        SymMat M = A;
        for (int a = 0; a < n; a++) {
            for (int b = 0; b < n; b++) {
                M.at(a, b) *= 4.0 * t;
            }
        }
        SymMat B = M.sqrt_spd();
        auto to_point = std::function<Vec(const double*)>([&](const double* u) {
            Vec y(static_cast<std::size_t>(n));
            double by[4] = {0, 0, 0, 0};
            B.mul(u, by);
            for (int a = 0; a < n; a++) {
                y[static_cast<std::size_t>(a)] = by[a];
            }
            return y;
        });
        return B.det() * tensor_gauss_hermite(n, nodes_per_axis, integrand, to_point);
    }

    double lam = A.max_eigenvalue();
    double sh = std::sqrt(8.0 * lam * t);
    double zspan = 6.0 * lam * t;
    return heis_integral(integrand, g.identity(), sh, zspan, nodes_per_axis);
}

double
FrozenKernel::normalization(double t, int nodes_per_axis, double) const
{
    if (t <= 0.0) {
        throw std::domain_error("normalization: requires t > 0");
    }
    auto integrand = [&](const Vec& v) { return eval(v, t); };
    if (g.is_euclidean()) {
        int n = g.n;
        SymMat M = A;
        for (int a = 0; a < n; a++) {
            for (int b = 0; b < n; b++) {
                M.at(a, b) *= 4.0 * t;
            }
        }
        SymMat B = M.sqrt_spd();
        auto to_point = std::function<Vec(const double*)>([&](const double* u) {
            Vec y(static_cast<std::size_t>(n));
            double by[4] = {0, 0, 0, 0};
            B.mul(u, by);
            for (int a = 0; a < n; a++) {
                y[static_cast<std::size_t>(a)] = by[a];
            }
            return y;
        });
        return B.det() * tensor_gauss_hermite(n, nodes_per_axis, integrand, to_point);
    }
    double lam = A.max_eigenvalue();
    double sh = std::sqrt(8.0 * lam * t);
    double zspan = 6.0 * lam * t;
    return heis_integral(integrand, g.identity(), sh, zspan, nodes_per_axis);
}

double
coefficient_sensitivity(const FrozenKernel& k1, const FrozenKernel& k2, const Vec& x, double t)
{
    return std::fabs(k1.eval(x, t) - k2.eval(x, t));
}

} // namespace levi
