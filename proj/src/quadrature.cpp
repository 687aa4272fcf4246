#include "levi/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace levi {

namespace {

Rule
make_gauss_legendre(int n)
{
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre: n must be >= 1");
    }
    Rule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    int mh = (n + 1) / 2;
    for (int i = 0; i < mh; i++) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; iter++) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; j++) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) {
                break;
            }
        }
        r.x[static_cast<std::size_t>(i)] = -z;
        r.x[static_cast<std::size_t>(n - 1 - i)] = z;
        double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.w[static_cast<std::size_t>(i)] = w;
        r.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

Rule
make_gauss_hermite(int n)
{
    if (n < 1) {
        throw std::invalid_argument("gauss_hermite: n must be >= 1");
    }
    Rule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    const double pim4 = 0.7511255444649425; // pi^{-1/4}
    int mh = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < mh; i++) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * r.x[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * r.x[1];
        } else {
            z = 2.0 * z - r.x[static_cast<std::size_t>(i - 2)];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 200; iter++) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 1; j <= n; j++) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-14) {
                break;
            }
        }
        r.x[static_cast<std::size_t>(i)] = z;
        r.x[static_cast<std::size_t>(n - 1 - i)] = -z;
        r.w[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
        r.w[static_cast<std::size_t>(n - 1 - i)] = r.w[static_cast<std::size_t>(i)];
    }
    // Store ascending for reproducible iteration order.
    for (int i = 0; i < n / 2; i++) {
        std::swap(r.x[static_cast<std::size_t>(i)], r.x[static_cast<std::size_t>(n - 1 - i)]);
        std::swap(r.w[static_cast<std::size_t>(i)], r.w[static_cast<std::size_t>(n - 1 - i)]);
    }
    return r;
}

std::mutex g_cache_mutex;

} // namespace

const Rule&
gauss_legendre(int n)
{
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, make_gauss_legendre(n)).first;
    }
    return it->second;
}

Rule
gauss_legendre_ab(int n, double a, double b)
{
    const Rule& base = gauss_legendre(n);
    Rule r = base;
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    for (std::size_t i = 0; i < r.size(); i++) {
        r.x[i] = c + h * base.x[i];
        r.w[i] = h * base.w[i];
    }
    return r;
}

const Rule&
gauss_hermite(int n)
{
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, make_gauss_hermite(n)).first;
    }
    return it->second;
}

double
gauss15(const std::function<double(double)>& f, double a, double b)
{
    const Rule& base = gauss_legendre(15);
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < base.size(); i++) {
        s += base.w[i] * f(c + h * base.x[i]);
    }
    return h * s;
}

namespace {

double
adapt_rec(const std::function<double(double)>& f, double a, double b, double whole, double tol,
          int depth)
{
    double mid = 0.5 * (a + b);
    double left = gauss15(f, a, mid);
    double right = gauss15(f, mid, b);
    double err = std::fabs(left + right - whole);
    if (err <= tol || depth <= 0) {
        return left + right;
    }
    return adapt_rec(f, a, mid, left, 0.5 * tol, depth - 1) +
           adapt_rec(f, mid, b, right, 0.5 * tol, depth - 1);
}

} // namespace

double
integrate_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                   double abs_tol, int max_depth)
{
    if (a == b) {
        return 0.0;
    }
    double whole = gauss15(f, a, b);
    double tol = std::fmax(abs_tol, rel_tol * std::fabs(whole));
    if (tol == 0.0) {
        tol = 1e-300;
    }
    return adapt_rec(f, a, b, whole, tol, max_depth);
}

double
integrate_dyadic_zero(const std::function<double(double)>& f, double r, double rel_tol,
                      bool* diverged)
{
    if (diverged != nullptr) {
        *diverged = false;
    }
    if (r <= 0.0) {
        return 0.0;
    }
    double total = 0.0;
    double prev = 0.0;
    int quiet = 0;
    for (int k = 0; k < 600; k++) {
        double hi = r * std::pow(0.5, k);
        double lo = 0.5 * hi;
        double val = integrate_adaptive(f, lo, hi, 1e-10, 0.0, 12);
        total += val;
        if (std::fabs(total) > 1e12) {
            if (diverged != nullptr) {
                *diverged = true;
            }
            return total;
        }
        if (std::fabs(val) <= rel_tol * std::fmax(std::fabs(total), 1e-300)) {
            quiet++;
            if (quiet >= 3) {
                return total;
            }
        } else {
            quiet = 0;
        }
        // Divergence heuristic: deep into the dyadic ladder the panel
        // contributions must decay for the integral to exist.
        if (k > 500 && std::fabs(val) >= std::fabs(prev) && std::fabs(val) > 0.0) {
            if (diverged != nullptr) {
                *diverged = true;
            }
            return total;
        }
        prev = val;
    }
    if (diverged != nullptr) {
        *diverged = true;
    }
    return total;
}

double
integrate_graded(const std::function<double(double)>& f, double a, double b, double toward,
                 int levels, int nodes_per_panel)
{
    if (a == b) {
        return 0.0;
    }
    bool at_a = std::fabs(toward - a) <= std::fabs(toward - b);
    double len = b - a;
    double total = 0.0;
    // Panels shrink geometrically toward the singular endpoint; innermost
    // panel touches it (the Gauss nodes stay strictly inside).
    double frac_hi = 1.0;
    for (int k = 0; k < levels; k++) {
        double frac_lo = (k == levels - 1) ? 0.0 : 0.5 * frac_hi;
        double pa;
        double pb;
        if (at_a) {
            pa = a + len * frac_lo;
            pb = a + len * frac_hi;
        } else {
            pa = b - len * frac_hi;
            pb = b - len * frac_lo;
        }
        Rule rule = gauss_legendre_ab(nodes_per_panel, pa, pb);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.size(); i++) {
            s += rule.w[i] * f(rule.x[i]);
        }
        total += s;
        frac_hi = 0.5 * frac_hi;
    }
    return total;
}

} // namespace levi
