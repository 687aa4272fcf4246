#include "levi/oracle.hpp"

#include "levi/parallel.hpp"
#include "levi/quadrature.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace levi {

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Solve the tridiagonal system in place (Thomas algorithm).  `a` is the
/// sub-diagonal, `b` the diagonal, `c` the super-diagonal, `d` the right-hand
/// side; the solution overwrites `d`.
void
thomas_solve(std::vector<double>& a, std::vector<double>& b, const std::vector<double>& c,
             std::vector<double>& d)
{
    const std::size_t n = b.size();
    for (std::size_t i = 1; i < n; i++) {
        double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[n - 1] /= b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        d[i] = (d[i] - c[i] * d[i + 1]) / b[i];
    }
}

FdSolution
fd_run(const std::function<double(double, double)>& a_fn, const std::function<double(double)>& g,
       double tau, double t, double L, int nx, int nt, double sigma0)
{
    if (nx < 3 || nt < 1 || t <= tau) {
        throw std::invalid_argument("fd_run: bad grid");
    }
    FdSolution sol;
    sol.L = L;
    sol.dx = 2.0 * L / nx;
    sol.sigma0 = sigma0;
    sol.x.resize(nx + 1);
    sol.u.resize(nx + 1);
    for (int i = 0; i <= nx; i++) {
        sol.x[i] = -L + i * sol.dx;
        sol.u[i] = g(sol.x[i]);
    }
    sol.u.front() = 0.0;
    sol.u.back() = 0.0;

    const int m = nx - 1; // interior unknowns
    const double dt = (t - tau) / nt;
    std::vector<double> lo(m), di(m), up(m), rhs(m);
    for (int step = 0; step < nt; step++) {
        double th = tau + (step + 0.5) * dt; // coefficient at the half step
        for (int i = 0; i < m; i++) {
            double r = a_fn(sol.x[i + 1], th) * dt / (2.0 * sol.dx * sol.dx);
            lo[i] = -r;
            di[i] = 1.0 + 2.0 * r;
            up[i] = -r;
            rhs[i] = r * sol.u[i] + (1.0 - 2.0 * r) * sol.u[i + 1] + r * sol.u[i + 2];
        }
        thomas_solve(lo, di, up, rhs);
        for (int i = 0; i < m; i++) {
            sol.u[i + 1] = rhs[i];
        }
    }
    return sol;
}

} // namespace

double
FdSolution::l1_distance(const std::function<double(double)>& ref) const
{
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        double w = (i == 0 || i + 1 == x.size()) ? 0.5 : 1.0;
        acc += w * std::fabs(u[i] - ref(x[i]));
    }
    return acc * dx;
}

double
FdSolution::l1_norm() const
{
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); i++) {
        double w = (i == 0 || i + 1 == x.size()) ? 0.5 : 1.0;
        acc += w * std::fabs(u[i]);
    }
    return acc * dx;
}

double
FdSolution::at(double xq) const
{
    if (xq <= -L || xq >= L) {
        return 0.0;
    }
    double s = (xq + L) / dx;
    auto i = static_cast<std::size_t>(s);
    if (i + 1 >= x.size()) {
        i = x.size() - 2;
    }
    double f = s - static_cast<double>(i);
    return (1.0 - f) * u[i] + f * u[i + 1];
}

FdSolution
fd_green(const std::function<double(double, double)>& a, double xi, double tau, double t,
         double L, int nx, int nt, double sigma0)
{
    double dx = 2.0 * L / nx;
    double s0 = sigma0 > 0.0 ? sigma0 : 2.0 * dx;
    auto g = [xi, s0](double x) {
        double d = (x - xi) / s0;
        return std::exp(-0.5 * d * d) / (s0 * std::sqrt(2.0 * kPi));
    };
    FdSolution sol = fd_run(a, g, tau, t, L, nx, nt, s0);
    return sol;
}

FdSolution
fd_evolve(const std::function<double(double, double)>& a, const std::function<double(double)>& g,
          double tau, double t, double L, int nx, int nt)
{
    return fd_run(a, g, tau, t, L, nx, nt, 0.0);
}

McResult
mc_kernel(const Group& g, const SymMat& A, double t, const std::vector<Vec>& targets,
          std::size_t paths, int steps, std::uint64_t seed, double bw_scale)
{
    const int n = g.n;
    const int m = g.m;
    if (A.m != m) {
        throw std::invalid_argument("mc_kernel: matrix dimension must match the horizontal rank");
    }
    SymMat B = A.sqrt_spd();
    const double dt = t / steps;
    const double amp = std::sqrt(2.0 * dt);

    // Pass 1: simulate all endpoints (blocked so that the stream of random
    // numbers per path is independent of the thread count).
    const std::size_t block = 1024;
    const std::size_t nblocks = (paths + block - 1) / block;
    std::vector<double> endpoints(paths * n);
    parallel_for(nblocks, [&](std::size_t bi) {
        std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (bi + 1));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::size_t lo = bi * block;
        std::size_t hi = std::min(paths, lo + block);
        Vec state(n), inc(n), w(m);
        for (std::size_t p = lo; p < hi; p++) {
            std::fill(state.begin(), state.end(), 0.0);
            for (int s = 0; s < steps; s++) {
                for (int k = 0; k < m; k++) {
                    w[k] = gauss(rng);
                }
                std::fill(inc.begin(), inc.end(), 0.0);
                for (int i = 0; i < m; i++) {
                    double v = 0.0;
                    for (int k = 0; k < m; k++) {
                        v += B.at(i, k) * w[k];
                    }
                    inc[i] = amp * v;
                }
                state = g.compose(state, inc);
            }
            for (int d = 0; d < n; d++) {
                endpoints[p * n + d] = state[d];
            }
        }
    });

    // Silverman bandwidths from the per-axis sample standard deviations.
    std::vector<double> h(n);
    {
        double factor = std::pow(4.0 / ((n + 2.0) * static_cast<double>(paths)),
                                 1.0 / (n + 4.0)) * bw_scale;
        for (int d = 0; d < n; d++) {
            double s1 = 0.0, s2 = 0.0;
            for (std::size_t p = 0; p < paths; p++) {
                double v = endpoints[p * n + d];
                s1 += v;
                s2 += v * v;
            }
            double mean = s1 / paths;
            double var = std::fmax(s2 / paths - mean * mean, 1e-300);
            h[d] = std::sqrt(var) * factor;
        }
    }

    McResult res;
    res.paths = paths;
    res.bandwidth = h;
    res.estimate.assign(targets.size(), 0.0);
    res.std_error.assign(targets.size(), 0.0);
    res.smoothed_ref.assign(targets.size(), 0.0);

    double norm = 1.0;
    for (int d = 0; d < n; d++) {
        norm /= h[d] * std::sqrt(2.0 * kPi);
    }
    for (std::size_t ti = 0; ti < targets.size(); ti++) {
        const Vec& tgt = targets[ti];
        std::vector<double> partial_s1(nblocks, 0.0), partial_s2(nblocks, 0.0);
        parallel_for(nblocks, [&](std::size_t bi) {
            std::size_t lo = bi * block;
            std::size_t hi = std::min(paths, lo + block);
            double s1 = 0.0, s2 = 0.0;
            for (std::size_t p = lo; p < hi; p++) {
                double q = 0.0;
                for (int d = 0; d < n; d++) {
                    double z = (endpoints[p * n + d] - tgt[d]) / h[d];
                    q += z * z;
                }
                double k = q < 700.0 ? norm * std::exp(-0.5 * q) : 0.0;
                s1 += k;
                s2 += k * k;
            }
            partial_s1[bi] = s1;
            partial_s2[bi] = s2;
        });
        double s1 = pairwise_sum(partial_s1);
        double s2 = pairwise_sum(partial_s2);
        double mean = s1 / paths;
        double var = std::fmax(s2 / paths - mean * mean, 0.0);
        res.estimate[ti] = mean;
        res.std_error[ti] = std::sqrt(var / paths);
    }

    // The estimator's expectation is the kernel convolved with the same
    // Gaussian window; compute that reference by tensor quadrature so the
    // two-standard-error comparison carries no smoothing bias.
    FrozenKernel ker(g, A);
    const auto& gh = gauss_hermite(24);
    std::vector<int> idx(n, 0);
    for (std::size_t ti = 0; ti < targets.size(); ti++) {
        const Vec& tgt = targets[ti];
        std::fill(idx.begin(), idx.end(), 0);
        double acc = 0.0;
        bool done = false;
        Vec y(n);
        while (!done) {
            double w = std::pow(kPi, -0.5 * n);
            for (int d = 0; d < n; d++) {
                y[d] = tgt[d] + std::sqrt(2.0) * h[d] * gh.x[idx[d]];
                w *= gh.w[idx[d]];
            }
            acc += w * ker.eval(y, t);
            int d = 0;
            while (d < n && ++idx[d] == static_cast<int>(gh.size())) {
                idx[d] = 0;
                d++;
            }
            done = (d == n);
        }
        res.smoothed_ref[ti] = acc;
    }
    return res;
}

} // namespace levi
