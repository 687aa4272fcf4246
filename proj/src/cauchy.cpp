#include "levi/cauchy.hpp"

#include "levi/frozen_kernel.hpp"
#include "levi/parallel.hpp"
#include "levi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace levi {

CauchySolver::CauchySolver(const Group& group, const CoefficientField& field, double T,
                           CauchyGrid grid, QuadratureSpec quad)
    : g_(group), cf_(field), T_(T), grid_(grid), quad_(quad)
{
    if (T_ <= 0.0) {
        throw std::invalid_argument("CauchySolver: horizon must be positive");
    }
    c_env_ = (quad_.c_env > 0.0) ? quad_.c_env : 6.0 * cf_.Lambda;
    rho_max_ = std::sqrt(T_);
}

std::size_t
CauchySolver::table_size() const
{
    std::size_t per_rho = 1;
    for (int k = 0; k < g_.n; k++) {
        per_rho *= static_cast<std::size_t>(grid_.n_y);
    }
    return static_cast<std::size_t>(grid_.n_rho) * per_rho;
}

void
CauchySolver::decode(std::size_t idx, double& rho, Vec& y) const
{
    std::size_t per_rho = table_size() / static_cast<std::size_t>(grid_.n_rho);
    std::size_t ir = idx / per_rho;
    std::size_t rest = idx % per_rho;
    rho = rho_max_ * static_cast<double>(ir + 1) / grid_.n_rho;
    y.assign(static_cast<std::size_t>(g_.n), 0.0);
    for (int k = g_.n - 1; k >= 0; k--) {
        std::size_t ik = rest % static_cast<std::size_t>(grid_.n_y);
        rest /= static_cast<std::size_t>(grid_.n_y);
        y[static_cast<std::size_t>(k)] =
            -grid_.L + 2.0 * grid_.L * static_cast<double>(ik) / (grid_.n_y - 1);
    }
}

double
CauchySolver::weight(const Table& tab, double rho) const
{
    if (!tab.singular_weight) {
        return 1.0;
    }
    double om = cf_.mod.omega(rho);
    if (om <= 0.0) {
        om = 1.0;
    }
    return om / rho;
}

double
CauchySolver::interp(const Table& tab, const Vec& y, double eta) const
{
    if (!tab.built || eta <= 0.0) {
        return 0.0;
    }
    double rho = std::sqrt(std::fmin(eta, T_));
    const int n = g_.n;
    double coords[5];
    coords[0] =
        std::clamp(rho / rho_max_ * grid_.n_rho - 1.0, 0.0, static_cast<double>(grid_.n_rho - 1));
    for (int k = 0; k < n; k++) {
        // clamp to the box: constant extension outside
        double s = (y[static_cast<std::size_t>(k)] + grid_.L) / (2.0 * grid_.L) * (grid_.n_y - 1);
        coords[k + 1] = std::clamp(s, 0.0, static_cast<double>(grid_.n_y - 1));
    }
    int nd = n + 1;
    int lo[5];
    double fr[5];
    int dim_size[5];
    dim_size[0] = grid_.n_rho;
    for (int k = 1; k < nd; k++) {
        dim_size[k] = grid_.n_y;
    }
    for (int d = 0; d < nd; d++) {
        lo[d] = static_cast<int>(coords[d]);
        lo[d] = std::clamp(lo[d], 0, dim_size[d] - 2);
        fr[d] = std::clamp(coords[d] - lo[d], 0.0, 1.0);
    }
    double acc = 0.0;
    for (int corner = 0; corner < (1 << nd); corner++) {
        double w = 1.0;
        std::size_t idx = 0;
        for (int d = 0; d < nd; d++) {
            int bit = (corner >> d) & 1;
            w *= bit ? fr[d] : (1.0 - fr[d]);
            idx = idx * static_cast<std::size_t>(dim_size[d]) +
                  static_cast<std::size_t>(lo[d] + bit);
        }
        if (w != 0.0) {
            acc += w * tab.v[idx];
        }
    }
    return acc * weight(tab, rho);
}

double
CauchySolver::apply_T(const Table& tab, const Vec& y, double eta) const
{
    // integral over (0, eta) x R^n of Z_1((y,eta); (w,s)) phi(w,s): graded
    // panels toward both time endpoints (kernel singular at s -> eta, the
    // density possibly singular at s -> 0), Gauss-Hermite in space around y
    // at the kernel's concentration scale.
    const int n = g_.n;
    const Rule& tr = gauss_legendre(quad_.time_nodes);
    double total = 0.0;
    double center[4];
    double scale[4];
    for (int k = 0; k < n; k++) {
        center[k] = y[static_cast<std::size_t>(k)];
    }

    auto eval_s = [&](double s) {
        double s2 = c_env_ * (eta - s);
        for (int k = 0; k < n; k++) {
            scale[k] = (g_.degree(k) == 1) ? std::sqrt(s2) : s2;
        }
        return tensor_hermite(n, quad_.space_nodes, center, scale, [&](const Vec& w) {
            double phi = interp(tab, w, s);
            if (phi == 0.0) {
                return 0.0;
            }
            return increment_kernel(g_, cf_, y, eta, w, s) * phi;
        });
    };

    double half_pt = 0.5 * eta;
    for (int half = 0; half < 2; half++) {
        double rho_end = std::sqrt(half_pt);
        double hi = rho_end;
        for (int lev = 0; lev <= quad_.time_levels; lev++) {
            double lo = (lev == quad_.time_levels) ? 0.0 : hi * 0.5;
            double c = 0.5 * (lo + hi);
            double h = 0.5 * (hi - lo);
            for (std::size_t k = 0; k < tr.size(); k++) {
                double rho = c + h * tr.x[k];
                double s = (half == 0) ? rho * rho : eta - rho * rho;
                total += h * tr.w[k] * 2.0 * rho * eval_s(s);
            }
            hi = lo;
        }
    }
    return total;
}

void
CauchySolver::volterra_solve(Table& tab, const std::function<double(const Vec&, double)>& source)
{
    std::size_t total = table_size();
    tab.v.assign(total, 0.0);
    tab.built = true; // interp of the running sum is used inside the sweeps

    Table level;
    level.singular_weight = tab.singular_weight;
    level.built = true;
    level.v.assign(total, 0.0);

    parallel_for(total, [&](std::size_t idx) {
        double rho;
        Vec y;
        decode(idx, rho, y);
        level.v[idx] = source(y, rho * rho) / weight(tab, rho);
    });
    double norm1 = 0.0;
    for (double v : level.v) {
        norm1 = std::fmax(norm1, std::fabs(v));
    }
    for (std::size_t i = 0; i < total; i++) {
        tab.v[i] += level.v[i];
    }
    sweeps_used_ = 1;
    if (norm1 == 0.0) {
        return;
    }

    for (int sweep = 2; sweep <= grid_.max_sweeps; sweep++) {
        Table next;
        next.singular_weight = tab.singular_weight;
        next.built = true;
        next.v.assign(total, 0.0);
        parallel_for(total, [&](std::size_t idx) {
            double rho;
            Vec y;
            decode(idx, rho, y);
            next.v[idx] = apply_T(level, y, rho * rho) / weight(tab, rho);
        });
        double nj = 0.0;
        for (double v : next.v) {
            nj = std::fmax(nj, std::fabs(v));
        }
        for (std::size_t i = 0; i < total; i++) {
            tab.v[i] += next.v[i];
        }
        level = std::move(next);
        sweeps_used_ = sweep;
        if (nj <= grid_.tol * norm1 || nj > 100.0 * norm1) {
            break;
        }
    }
}

void
CauchySolver::set_initial(SpaceFn g)
{
    g_fn_ = std::move(g);
    nu_.singular_weight = true;
    volterra_solve(nu_, [&](const Vec& y, double eta) {
        // initial layer: integral of Z_1((y, eta); (w, 0)) g(w) dw
        double s2 = c_env_ * eta;
        double center[4];
        double scale[4];
        for (int k = 0; k < g_.n; k++) {
            center[k] = y[static_cast<std::size_t>(k)];
            scale[k] = (g_.degree(k) == 1) ? std::sqrt(s2) : s2;
        }
        return tensor_hermite(g_.n, quad_.space_nodes, center, scale, [&](const Vec& w) {
            double gv = g_fn_(w);
            if (gv == 0.0) {
                return 0.0;
            }
            return increment_kernel(g_, cf_, y, eta, w, 0.0) * gv;
        });
    });
}

void
CauchySolver::set_source(SpaceTimeFn f)
{
    f_fn_ = std::move(f);
    ft_.singular_weight = false;
    volterra_solve(ft_, [&](const Vec& y, double eta) {
        // first layer: integral of Z_1((y, eta); chi) f(chi) over (0, eta)
        const Rule& tr = gauss_legendre(quad_.time_nodes);
        const int n = g_.n;
        double center[4];
        double scale[4];
        for (int k = 0; k < n; k++) {
            center[k] = y[static_cast<std::size_t>(k)];
        }
        double total = 0.0;
        double half_pt = 0.5 * eta;
        for (int half = 0; half < 2; half++) {
            double hi = std::sqrt(half_pt);
            for (int lev = 0; lev <= quad_.time_levels; lev++) {
                double lo = (lev == quad_.time_levels) ? 0.0 : hi * 0.5;
                double c = 0.5 * (lo + hi);
                double h = 0.5 * (hi - lo);
                for (std::size_t k = 0; k < tr.size(); k++) {
                    double rho = c + h * tr.x[k];
                    double s = (half == 0) ? rho * rho : eta - rho * rho;
                    double s2 = c_env_ * (eta - s);
                    for (int d = 0; d < n; d++) {
                        scale[d] = (g_.degree(d) == 1) ? std::sqrt(s2) : s2;
                    }
                    double sp =
                        tensor_hermite(n, quad_.space_nodes, center, scale, [&](const Vec& w) {
                            double fv = f_fn_(w, s);
                            if (fv == 0.0) {
                                return 0.0;
                            }
                            return increment_kernel(g_, cf_, y, eta, w, s) * fv;
                        });
                    total += h * tr.w[k] * 2.0 * rho * sp;
                }
                hi = lo;
            }
        }
        return total;
    });
}

double
CauchySolver::layer_potential(const std::function<double(const Vec&, double)>& h, const Vec& x,
                              double t) const
{
    const int n = g_.n;
    const Rule& tr = gauss_legendre(quad_.time_nodes);
    double center[4];
    double scale[4];
    for (int k = 0; k < n; k++) {
        center[k] = x[static_cast<std::size_t>(k)];
    }
    double total = 0.0;
    double half_pt = 0.5 * t;
    for (int half = 0; half < 2; half++) {
        double hi = std::sqrt(half_pt);
        for (int lev = 0; lev <= quad_.time_levels; lev++) {
            double lo = (lev == quad_.time_levels) ? 0.0 : hi * 0.5;
            double c = 0.5 * (lo + hi);
            double hw = 0.5 * (hi - lo);
            for (std::size_t k = 0; k < tr.size(); k++) {
                double rho = c + hw * tr.x[k];
                double eta = (half == 0) ? rho * rho : t - rho * rho;
                double s2 = c_env_ * (t - eta);
                for (int d = 0; d < n; d++) {
                    scale[d] = (g_.degree(d) == 1) ? std::sqrt(s2) : s2;
                }
                double sp = tensor_hermite(n, quad_.space_nodes, center, scale, [&](const Vec& w) {
                    double hv = h(w, eta);
                    if (hv == 0.0) {
                        return 0.0;
                    }
                    FrozenKernel ker(g_, cf_.at(w, eta));
                    return ker.eval_rel(x, t, w, eta) * hv;
                });
                total += hw * tr.w[k] * 2.0 * rho * sp;
            }
            hi = lo;
        }
    }
    return total;
}

double
CauchySolver::nu(const Vec& y, double eta) const
{
    return interp(nu_, y, eta);
}

double
CauchySolver::f_tilde(const Vec& y, double eta) const
{
    return interp(ft_, y, eta);
}

double
CauchySolver::homogeneous(const Vec& x, double t) const
{
    if (!g_fn_) {
        return 0.0;
    }
    if (t <= 0.0) {
        return g_fn_(x);
    }
    // initial layer against the kernels frozen on the initial plane
    double s2 = c_env_ * t;
    double center[4];
    double scale[4];
    for (int k = 0; k < g_.n; k++) {
        center[k] = x[static_cast<std::size_t>(k)];
        scale[k] = (g_.degree(k) == 1) ? std::sqrt(s2) : s2;
    }
    double init = tensor_hermite(g_.n, quad_.space_nodes, center, scale, [&](const Vec& w) {
        double gv = g_fn_(w);
        if (gv == 0.0) {
            return 0.0;
        }
        FrozenKernel ker(g_, cf_.at(w, 0.0));
        return ker.eval_rel(x, t, w, 0.0) * gv;
    });
    double corr = layer_potential([&](const Vec& w, double eta) { return interp(nu_, w, eta); },
                                  x, t);
    return init + corr;
}

double
CauchySolver::potential(const Vec& x, double t) const
{
    if (!f_fn_ || t <= 0.0) {
        return 0.0;
    }
    return layer_potential(f_fn_, x, t);
}

double
CauchySolver::solve(const Vec& x, double t) const
{
    double u = homogeneous(x, t);
    if (f_fn_ && t > 0.0) {
        double vf = potential(x, t);
        double corr = layer_potential(
            [&](const Vec& w, double eta) { return interp(ft_, w, eta); }, x, t);
        u -= vf + corr;
    }
    return u;
}

double
CauchySolver::equation_residual(const Vec& x, double t, double h_space, double h_time) const
{
    SymMat A = cf_.at(x, t);
    auto u_at_t = [&](const Vec& y) { return solve(y, t); };
    double second = 0.0;
    for (int i = 0; i < g_.m; i++) {
        for (int j = 0; j < g_.m; j++) {
            second += A.at(i, j) * g_.lie_derivative2(u_at_t, i, j, x, h_space);
        }
    }
    double ut = (solve(x, t + h_time) - solve(x, t - h_time)) / (2.0 * h_time);
    double fv = f_fn_ ? f_fn_(x, t) : 0.0;
    return second - ut - fv;
}

} // namespace levi
