#include "levi/group.hpp"

#include <cmath>
#include <stdexcept>

namespace levi {

Group
Group::euclidean(int n)
{
    if (n < 1) {
        throw std::invalid_argument("Group::euclidean: n must be >= 1");
    }
    Group g;
    g.kind = Kind::Euclidean;
    g.name = "euclidean:" + std::to_string(n);
    g.layer_dims = {n};
    g.n = n;
    g.m = n;
    g.Q = n;
    g.quasi_triangle_k = 1.0;
    return g;
}

Group
Group::heisenberg1()
{
    Group g;
    g.kind = Kind::Heisenberg1;
    g.name = "heisenberg1";
    g.layer_dims = {2, 1};
    g.n = 3;
    g.m = 2;
    g.Q = 4;
    // Certified by randomized search in the test suite; the Koranyi norm on
    // H^1 satisfies the triangle inequality up to a constant close to 1.
    g.quasi_triangle_k = 1.2;
    return g;
}

Group
Group::by_name(const std::string& name)
{
    if (name == "heisenberg1") {
        return heisenberg1();
    }
    const std::string prefix = "euclidean:";
    if (name.rfind(prefix, 0) == 0) {
        int n = std::stoi(name.substr(prefix.size()));
        return euclidean(n);
    }
    throw std::invalid_argument("Group::by_name: unknown group '" + name + "'");
}

Vec
Group::compose(const Vec& x, const Vec& y) const
{
    Vec r(static_cast<std::size_t>(n));
    if (kind == Kind::Euclidean) {
        for (int i = 0; i < n; i++) {
            r[static_cast<std::size_t>(i)] =
                x[static_cast<std::size_t>(i)] + y[static_cast<std::size_t>(i)];
        }
        return r;
    }
    r[0] = x[0] + y[0];
    r[1] = x[1] + y[1];
    r[2] = x[2] + y[2] + 0.5 * (x[0] * y[1] - x[1] * y[0]);
    return r;
}

Vec
Group::inverse(const Vec& x) const
{
    Vec r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; i++) {
        r[static_cast<std::size_t>(i)] = -x[static_cast<std::size_t>(i)];
    }
    return r;
}

Vec
Group::dilate(double lam, const Vec& x) const
{
    if (lam <= 0.0) {
        throw std::domain_error("Group::dilate: lam must be > 0");
    }
    Vec r(static_cast<std::size_t>(n));
    int k = 0;
    double f = lam;
    for (std::size_t layer = 0; layer < layer_dims.size(); layer++) {
        for (int i = 0; i < layer_dims[layer]; i++, k++) {
            r[static_cast<std::size_t>(k)] = f * x[static_cast<std::size_t>(k)];
        }
        f *= lam;
    }
    return r;
}

int
Group::degree(int k) const
{
    int off = 0;
    for (std::size_t layer = 0; layer < layer_dims.size(); layer++) {
        off += layer_dims[layer];
        if (k < off) {
            return static_cast<int>(layer) + 1;
        }
    }
    throw std::out_of_range("Group::degree: coordinate index out of range");
}

double
Group::norm(const Vec& x) const
{
    if (kind == Kind::Euclidean) {
        double s = 0.0;
        for (int i = 0; i < n; i++) {
            s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        }
        return std::sqrt(s);
    }
    double w2 = x[0] * x[0] + x[1] * x[1];
    return std::pow(w2 * w2 + 16.0 * x[2] * x[2], 0.25);
}

double
Group::quasi_distance(const Vec& x, const Vec& y) const
{
    return norm(compose(inverse(y), x));
}

double
Group::envelope(const Vec& x, double t) const
{
    if (t <= 0.0) {
        throw std::domain_error("Group::envelope: t must be > 0");
    }
    double r = norm(x);
    return std::pow(t, -0.5 * Q) * std::exp(-r * r / t);
}

Vec
Group::field(int i, const Vec& x) const
{
    if (i < 0 || i >= m) {
        throw std::domain_error("Group::field: field index out of range");
    }
    Vec v(static_cast<std::size_t>(n), 0.0);
    if (kind == Kind::Euclidean) {
        v[static_cast<std::size_t>(i)] = 1.0;
        return v;
    }
    if (i == 0) {
        // X_1 = d_x - (y/2) d_z
        v[0] = 1.0;
        v[2] = -0.5 * x[1];
    } else {
        // X_2 = d_y + (x/2) d_z
        v[1] = 1.0;
        v[2] = 0.5 * x[0];
    }
    return v;
}

Vec
Group::flow(int i, double h, const Vec& x) const
{
    if (i < 0 || i >= m) {
        throw std::domain_error("Group::flow: field index out of range");
    }
    Vec r = x;
    if (kind == Kind::Euclidean) {
        r[static_cast<std::size_t>(i)] += h;
        return r;
    }
    if (i == 0) {
        r[0] += h;
        r[2] -= 0.5 * x[1] * h;
    } else {
        r[1] += h;
        r[2] += 0.5 * x[0] * h;
    }
    return r;
}

double
Group::lie_derivative(const std::function<double(const Vec&)>& u, int i, const Vec& x,
                      double h) const
{
    if (h <= 0.0) {
        throw std::domain_error("Group::lie_derivative: h must be > 0");
    }
    double f2p = u(flow(i, 2.0 * h, x));
    double f1p = u(flow(i, h, x));
    double f1m = u(flow(i, -h, x));
    double f2m = u(flow(i, -2.0 * h, x));
    return (-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * h);
}

double
Group::lie_derivative2(const std::function<double(const Vec&)>& u, int i, int j, const Vec& x,
                       double h) const
{
    auto inner = [&](const Vec& p) { return lie_derivative(u, j, p, h); };
    return lie_derivative(inner, i, x, h);
}

} // namespace levi
