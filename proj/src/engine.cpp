#include "levi/engine.hpp"

#include "levi/parallel.hpp"
#include "levi/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace levi {

ParametrixEngine::ParametrixEngine(const Group& group, const CoefficientField& field, Vec xi,
                                   double tau, double t_max, QuadratureSpec quad,
                                   SeriesPolicy policy)
    : g_(group), cf_(field), xi_(std::move(xi)), tau_(tau), t_max_(t_max), quad_(quad),
      policy_(policy), frozen_(group, field.freeze(xi_, tau))
{
    if (t_max_ <= tau_) {
        throw std::invalid_argument("ParametrixEngine: t_max must exceed tau");
    }
    c_env_ = (quad_.c_env > 0.0) ? quad_.c_env : 6.0 * cf_.Lambda;
    rho_max_ = std::sqrt(t_max_ - tau_);
    n_rho_ = quad_.n_rho;
    n_u_ = (quad_.n_u > 0) ? quad_.n_u : (g_.n == 1 ? 64 : (g_.n == 2 ? 24 : 12));
    u_half_.resize(static_cast<std::size_t>(g_.n));
    for (int k = 0; k < g_.n; k++) {
        double R = quad_.radius_factor;
        u_half_[static_cast<std::size_t>(k)] = (g_.degree(k) == 1) ? R : R * R / 4.0;
    }

    if (policy_.lambda >= 0.0) {
        build(policy_.lambda);
    } else {
        build(0.0);
        if (!diag_.converged || diag_.q >= 0.9) {
            double eps = std::fmin(1.0, rho_max_);
            try {
                while (eps > 1e-6 && 4.0 * cf_.mod.dini(eps) > 0.3) {
                    eps *= 0.5;
                }
            } catch (const std::exception&) {
                // non-Dini modulus: keep the initial eps
            }
            double lam = 16.0 * cf_.Lambda / (eps * eps * 0.3);
            lam = std::fmin(lam, 200.0 / (t_max_ - tau_));
            build(lam);
        }
    }
}

double
ParametrixEngine::weight(double rho, const Vec& u) const
{
    double om = cf_.mod.omega(rho);
    if (om <= 0.0) {
        om = 1.0;
    }
    double nu = g_.norm(u);
    double ex = std::fmin(nu * nu, 700.0);
    return om * std::pow(rho, -2.0 - g_.Q) * std::exp(-ex);
}

Vec
ParametrixEngine::node_point(double rho, const Vec& u) const
{
    double sigma = std::sqrt(c_env_) * rho;
    return g_.compose(xi_, g_.dilate(sigma, u));
}

Vec
ParametrixEngine::normalized_offset(const Vec& y, double rho) const
{
    double sigma = std::sqrt(c_env_) * rho;
    return g_.dilate(1.0 / sigma, g_.compose(g_.inverse(xi_), y));
}

void
ParametrixEngine::build(double lambda)
{
    diag_ = SeriesDiagnostics{};
    diag_.lambda = lambda;
    levels_.clear();

    const int n = g_.n;
    std::size_t per_rho = 1;
    for (int k = 0; k < n; k++) {
        per_rho *= static_cast<std::size_t>(n_u_);
    }
    std::size_t total = static_cast<std::size_t>(n_rho_) * per_rho;
    s_mu_.assign(total, 0.0);

    auto decode = [&](std::size_t idx, double& rho, Vec& u) {
        std::size_t ir = idx / per_rho;
        std::size_t rest = idx % per_rho;
        rho = rho_max_ * static_cast<double>(ir + 1) / n_rho_;
        u.assign(static_cast<std::size_t>(n), 0.0);
        for (int k = n - 1; k >= 0; k--) {
            std::size_t ik = rest % static_cast<std::size_t>(n_u_);
            rest /= static_cast<std::size_t>(n_u_);
            double U = u_half_[static_cast<std::size_t>(k)];
            u[static_cast<std::size_t>(k)] = -U + 2.0 * U * static_cast<double>(ik) / (n_u_ - 1);
        }
    };

    // Level 1: the coefficient-increment kernel at the grid nodes.
    std::vector<double> level(total, 0.0);
    parallel_for(total, [&](std::size_t idx) {
        double rho;
        Vec u;
        decode(idx, rho, u);
        Vec y = node_point(rho, u);
        double eta = tau_ + rho * rho;
        double z = z1_at(y, eta, xi_, tau_) * std::exp(-lambda * (eta - tau_));
        level[idx] = z / weight(rho, u);
    });
    double norm1 = 0.0;
    for (double v : level) {
        norm1 = std::fmax(norm1, std::fabs(v));
    }
    diag_.term_norms.push_back(norm1);
    for (std::size_t i = 0; i < total; i++) {
        s_mu_[i] += level[i];
    }
    levels_.push_back(std::move(level));

    if (norm1 == 0.0) {
        // constant coefficients: the whole series vanishes
        diag_.converged = true;
        diag_.J_used = 1;
        diag_.q = 0.0;
        diag_.tail_bound = 0.0;
        return;
    }

    for (int j = 2; j <= policy_.J_max; j++) {
        const std::vector<double>& prev = levels_.back();
        std::vector<double> cur(total, 0.0);
        parallel_for(total, [&](std::size_t idx) {
            double rho;
            Vec u;
            decode(idx, rho, u);
            Vec y = node_point(rho, u);
            double eta = tau_ + rho * rho;
            double val = apply_T(prev, y, eta, lambda);
            cur[idx] = val / weight(rho, u);
        });
        double nj = 0.0;
        for (double v : cur) {
            nj = std::fmax(nj, std::fabs(v));
        }
        diag_.term_norms.push_back(nj);
        for (std::size_t i = 0; i < total; i++) {
            s_mu_[i] += cur[i];
        }
        levels_.push_back(std::move(cur));
        if (nj <= policy_.tail_tol * norm1) {
            break;
        }
        if (nj > 100.0 * norm1) {
            break; // clearly diverging; stop burning time
        }
    }

    diag_.J_used = static_cast<int>(levels_.size());
    std::size_t m = diag_.term_norms.size();
    double q = 0.0;
    std::size_t first = (m > 4) ? m - 3 : 1;
    for (std::size_t j = first; j < m; j++) {
        if (diag_.term_norms[j - 1] > 0.0) {
            q = std::fmax(q, diag_.term_norms[j] / diag_.term_norms[j - 1]);
        }
    }
    diag_.q = q;
    diag_.converged = (q < 1.0);
    diag_.tail_bound =
        diag_.converged ? diag_.term_norms.back() * q / (1.0 - q)
                        : std::numeric_limits<double>::infinity();

    // phi(lambda, eps) diagnostic with the minimizing eps (or the configured one)
    auto phi_of = [&](double eps) {
        double p;
        try {
            p = 4.0 * cf_.mod.dini(eps);
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
        if (lambda > 0.0) {
            p += 16.0 * cf_.Lambda / (lambda * eps * eps);
        } else if (eps < rho_max_) {
            return std::numeric_limits<double>::infinity();
        }
        return p;
    };
    if (policy_.epsilon > 0.0) {
        diag_.epsilon = policy_.epsilon;
        diag_.phi = phi_of(policy_.epsilon);
    } else if (lambda > 0.0) {
        double best_eps = 1.0;
        double best_phi = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 25; k++) {
            double eps = std::pow(2.0, -k);
            double p = phi_of(eps);
            if (p < best_phi) {
                best_phi = p;
                best_eps = eps;
            }
        }
        diag_.epsilon = best_eps;
        diag_.phi = best_phi;
    } else {
        diag_.epsilon = rho_max_;
        diag_.phi = phi_of(rho_max_);
    }
    if (std::isfinite(diag_.phi) && diag_.phi > 0.0) {
        diag_.C_fit = diag_.q / diag_.phi;
    }
}

double
increment_kernel(const Group& g, const CoefficientField& cf, const Vec& x, double t, const Vec& y,
                 double eta)
{
    if (t - eta <= 0.0) {
        return 0.0;
    }
    SymMat Az = cf.at(x, t);
    SymMat Ac = cf.at(y, eta);
    double maxdiff = Az.max_abs_diff(Ac);
    if (maxdiff == 0.0) {
        return 0.0;
    }
    FrozenKernel k(g, Ac);
    FrozenKernel::Jet jet = k.jet_rel(x, t, y, eta);
    double s = 0.0;
    for (int i = 0; i < g.m; i++) {
        for (int j = 0; j < g.m; j++) {
            s += (Az.at(i, j) - Ac.at(i, j)) * jet.d2[static_cast<std::size_t>(i * 4 + j)];
        }
    }
    return s;
}

double
ParametrixEngine::z1_at(const Vec& x, double t, const Vec& y, double eta) const
{
    return increment_kernel(g_, cf_, x, t, y, eta);
}

double
ParametrixEngine::z1(const Vec& x, double t) const
{
    return z1_at(x, t, xi_, tau_);
}

double
ParametrixEngine::interp(const std::vector<double>& table, const Vec& y, double eta) const
{
    double dt = eta - tau_;
    if (dt <= 0.0 || table.empty()) {
        return 0.0;
    }
    double rho = std::sqrt(dt);
    if (rho > rho_max_ * (1.0 + 1e-12)) {
        return 0.0;
    }
    Vec u = normalized_offset(y, rho);
    const int n = g_.n;
    double coords[4];
    coords[0] = std::clamp(rho / rho_max_ * n_rho_ - 1.0, 0.0, static_cast<double>(n_rho_ - 1));
    for (int k = 0; k < n; k++) {
        double U = u_half_[static_cast<std::size_t>(k)];
        double uk = u[static_cast<std::size_t>(k)];
        if (std::fabs(uk) > U) {
            return 0.0;
        }
        coords[k + 1] = (uk + U) / (2.0 * U) * (n_u_ - 1);
    }
    int nd = n + 1;
    int lo[4];
    double fr[4];
    int dim_size[4];
    dim_size[0] = n_rho_;
    for (int k = 1; k < nd; k++) {
        dim_size[k] = n_u_;
    }
    for (int d = 0; d < nd; d++) {
        lo[d] = static_cast<int>(coords[d]);
        if (lo[d] >= dim_size[d] - 1) {
            lo[d] = dim_size[d] - 2;
        }
        if (lo[d] < 0) {
            lo[d] = 0;
        }
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
            acc += w * table[idx];
        }
    }
    return acc * weight(rho, u);
}

double
ParametrixEngine::spacetime_integral(const std::function<double(const Vec&, double)>& f,
                                     const Vec& x, double t) const
{
    double span = t - tau_;
    if (span <= 1e-14) {
        return 0.0;
    }
    const int n = g_.n;
    const Rule& tr = gauss_legendre(quad_.time_nodes);
    double total = 0.0;

    auto eval_eta = [&](double eta, double rho_jac) {
        double lo_frac = (eta - tau_) / span;
        double center[4];
        double scale[4];
        double s2 = c_env_ * (t - eta) * (eta - tau_) / span;
        for (int k = 0; k < n; k++) {
            double xi_k = xi_[static_cast<std::size_t>(k)];
            double x_k = x[static_cast<std::size_t>(k)];
            center[k] = xi_k + (x_k - xi_k) * lo_frac;
            scale[k] = (g_.degree(k) == 1) ? std::sqrt(s2) : s2;
        }
        double sp = tensor_hermite(n, quad_.space_nodes, center, scale,
                                   [&](const Vec& y) { return f(y, eta); });
        return rho_jac * sp;
    };

    // half = 0: eta = tau + rho^2, rho in (0, sqrt(mid - tau)]
    // half = 1: eta = t - rho^2,   rho in (0, sqrt(t - mid)]
    double mid = 0.5 * (t + tau_);
    for (int half = 0; half < 2; half++) {
        double rho_end = std::sqrt(half == 0 ? mid - tau_ : t - mid);
        double hi = rho_end;
        for (int lev = 0; lev <= quad_.time_levels; lev++) {
            double lo = (lev == quad_.time_levels) ? 0.0 : hi * 0.5;
            double c = 0.5 * (lo + hi);
            double h = 0.5 * (hi - lo);
            for (std::size_t k = 0; k < tr.size(); k++) {
                double rho = c + h * tr.x[k];
                double eta = (half == 0) ? tau_ + rho * rho : t - rho * rho;
                total += h * tr.w[k] * eval_eta(eta, 2.0 * rho);
            }
            hi = lo;
        }
    }
    return total;
}

double
ParametrixEngine::apply_T(const std::vector<double>& table, const Vec& x, double t,
                          double lambda) const
{
    return spacetime_integral(
        [&](const Vec& y, double eta) {
            double prev = interp(table, y, eta);
            if (prev == 0.0) {
                return 0.0;
            }
            return z1_at(x, t, y, eta) * std::exp(-lambda * (t - eta)) * prev;
        },
        x, t);
}

double
ParametrixEngine::z_term(int j, const Vec& x, double t) const
{
    if (j < 1) {
        throw std::invalid_argument("z_term: j must be >= 1");
    }
    if (t <= tau_) {
        return 0.0;
    }
    if (j == 1) {
        return z1(x, t);
    }
    if (static_cast<std::size_t>(j - 2) >= levels_.size()) {
        return 0.0;
    }
    double lam = diag_.lambda;
    return apply_T(levels_[static_cast<std::size_t>(j - 2)], x, t, lam) *
           std::exp(lam * (t - tau_));
}

double
ParametrixEngine::mu_at_query(const Vec& x, double t) const
{
    double lam = diag_.lambda;
    double total = z1(x, t);
    double boost = std::exp(lam * (t - tau_));
    for (std::size_t k = 0; k < levels_.size(); k++) {
        double term = apply_T(levels_[k], x, t, lam);
        if (term == 0.0) {
            continue;
        }
        total += term * boost;
    }
    return total;
}

double
ParametrixEngine::mu(const Vec& x, double t) const
{
    if (t <= tau_) {
        return 0.0;
    }
    if (!diag_.converged) {
        throw std::runtime_error(
            "ParametrixEngine::mu: series is not contracting (q >= 1); "
            "increase lambda or shrink the horizon");
    }
    return mu_at_query(x, t);
}

double
ParametrixEngine::mu_interp(const Vec& y, double eta) const
{
    double v = interp(s_mu_, y, eta);
    if (v == 0.0) {
        return 0.0;
    }
    return v * std::exp(diag_.lambda * (eta - tau_));
}

double
ParametrixEngine::volterra_residual(const Vec& x, double t) const
{
    double muq = mu(x, t);
    double tmu = spacetime_integral(
        [&](const Vec& y, double eta) {
            double m = mu_interp(y, eta);
            if (m == 0.0) {
                return 0.0;
            }
            return z1_at(x, t, y, eta) * m;
        },
        x, t);
    return z1(x, t) - muq + tmu;
}

double
ParametrixEngine::j_term(const Vec& x, double t) const
{
    if (t <= tau_) {
        return 0.0;
    }
    return spacetime_integral(
        [&](const Vec& y, double eta) {
            double m = mu_interp(y, eta);
            if (m == 0.0) {
                return 0.0;
            }
            FrozenKernel k(g_, cf_.at(y, eta));
            return k.eval_rel(x, t, y, eta) * m;
        },
        x, t);
}

double
ParametrixEngine::j_deriv1(int i, const Vec& x, double t) const
{
    if (t <= tau_) {
        return 0.0;
    }
    return spacetime_integral(
        [&](const Vec& y, double eta) {
            double m = mu_interp(y, eta);
            if (m == 0.0) {
                return 0.0;
            }
            FrozenKernel k(g_, cf_.at(y, eta));
            return k.jet_rel(x, t, y, eta).d1[static_cast<std::size_t>(i)] * m;
        },
        x, t);
}

double
ParametrixEngine::j_second_split(int i, int j, bool time_deriv, const Vec& x, double t) const
{
    // The inner integrand for eta near t is regularized by subtracting
    // mu(x, eta) times the kernel frozen at (x, eta): its space integral
    // vanishes identically, and the difference mu(y) - mu(x) tames the
    // (t - eta)^{-1} singularity of the second derivatives.
    double span = t - tau_;
    const int n = g_.n;
    const Rule& tr = gauss_legendre(quad_.time_nodes);
    double mid = 0.5 * (t + tau_);
    double total = 0.0;

    auto deriv_of = [&](const FrozenKernel& k, const Vec& y, double eta) {
        FrozenKernel::Jet jet = k.jet_rel(x, t, y, eta);
        return time_deriv ? jet.dt : jet.d2[static_cast<std::size_t>(i * 4 + j)];
    };

    auto eval_eta = [&](double eta, bool split) {
        double lo_frac = (eta - tau_) / span;
        double center[4];
        double scale[4];
        double s2 = c_env_ * (t - eta) * (eta - tau_) / span;
        for (int k = 0; k < n; k++) {
            double xi_k = xi_[static_cast<std::size_t>(k)];
            double x_k = x[static_cast<std::size_t>(k)];
            center[k] = xi_k + (x_k - xi_k) * lo_frac;
            scale[k] = (g_.degree(k) == 1) ? std::sqrt(s2) : s2;
        }
        if (!split) {
            return tensor_hermite(n, quad_.space_nodes, center, scale, [&](const Vec& y) {
                double m = mu_interp(y, eta);
                if (m == 0.0) {
                    return 0.0;
                }
                FrozenKernel k(g_, cf_.at(y, eta));
                return deriv_of(k, y, eta) * m;
            });
        }
        double mux = mu_interp(x, eta);
        FrozenKernel kx(g_, cf_.at(x, eta));
        return tensor_hermite(n, quad_.space_nodes, center, scale, [&](const Vec& y) {
            double m = mu_interp(y, eta);
            FrozenKernel ky(g_, cf_.at(y, eta));
            double direct = (m == 0.0) ? 0.0 : deriv_of(ky, y, eta) * m;
            double sub = (mux == 0.0) ? 0.0 : mux * deriv_of(kx, y, eta);
            return direct - sub;
        });
    };

    for (int half = 0; half < 2; half++) {
        double rho_end = std::sqrt(half == 0 ? mid - tau_ : t - mid);
        double hi = rho_end;
        for (int lev = 0; lev <= quad_.time_levels; lev++) {
            double lo = (lev == quad_.time_levels) ? 0.0 : hi * 0.5;
            double c = 0.5 * (lo + hi);
            double h = 0.5 * (hi - lo);
            for (std::size_t k = 0; k < tr.size(); k++) {
                double rho = c + h * tr.x[k];
                double eta = (half == 0) ? tau_ + rho * rho : t - rho * rho;
                total += h * tr.w[k] * 2.0 * rho * eval_eta(eta, half == 1);
            }
            hi = lo;
        }
    }
    return total;
}

double
ParametrixEngine::j_deriv2(int i, int j, const Vec& x, double t) const
{
    if (t <= tau_) {
        return 0.0;
    }
    return j_second_split(i, j, false, x, t);
}

double
ParametrixEngine::j_deriv_t(const Vec& x, double t) const
{
    if (t <= tau_) {
        return 0.0;
    }
    return mu(x, t) + j_second_split(0, 0, true, x, t);
}

double
ParametrixEngine::gamma_frozen(const Vec& x, double t) const
{
    return frozen_.eval_rel(x, t, xi_, tau_);
}

double
ParametrixEngine::gamma(const Vec& x, double t) const
{
    if (t <= tau_) {
        return 0.0;
    }
    if (t - tau_ <= 1e-10) {
        return gamma_frozen(x, t);
    }
    return gamma_frozen(x, t) + j_term(x, t);
}

double
ParametrixEngine::h_residual(const Vec& x, double t) const
{
    // sum a_ij(z) XiXj Gamma_zeta - dt Gamma_zeta collapses to Z_1(z; zeta),
    // since the frozen kernel solves its own constant-coefficient equation.
    SymMat Az = cf_.at(x, t);
    double res = z1(x, t);
    for (int i = 0; i < g_.m; i++) {
        for (int j = 0; j < g_.m; j++) {
            res += Az.at(i, j) * j_deriv2(i, j, x, t);
        }
    }
    res -= j_deriv_t(x, t);
    return res;
}

void
ParametrixEngine::write_grid_csv(std::ostream& os, const std::vector<Vec>& points,
                                 const std::vector<double>& times) const
{
    for (int k = 0; k < g_.n; k++) {
        os << "x" << (k + 1) << ",";
    }
    os << "t,";
    for (int k = 0; k < g_.n; k++) {
        os << "xi" << (k + 1) << ",";
    }
    os << "tau,gamma_frozen,J,gamma,err_est\n";
    double tail_frac =
        (diag_.converged && diag_.q > 0.0) ? diag_.q / (1.0 - diag_.q) : 0.0;
    for (const Vec& x : points) {
        for (double t : times) {
            double gf = gamma_frozen(x, t);
            double jv = (t > tau_ + 1e-10) ? j_term(x, t) : 0.0;
            for (double c : x) {
                os << c << ",";
            }
            os << t << ",";
            for (double c : xi_) {
                os << c << ",";
            }
            os << tau_ << "," << gf << "," << jv << "," << (t <= tau_ ? 0.0 : gf + jv) << ","
               << std::fabs(jv) * tail_frac << "\n";
        }
    }
}

} // namespace levi
