#include "levi/linalg.hpp"

#include <cmath>

namespace levi {

SymMat
SymMat::identity(int dim)
{
    SymMat r(dim);
    for (int i = 0; i < dim; i++) {
        r.at(i, i) = 1.0;
    }
    return r;
}

SymMat
SymMat::diag(const std::vector<double>& d)
{
    SymMat r(static_cast<int>(d.size()));
    for (int i = 0; i < r.m; i++) {
        r.at(i, i) = d[static_cast<std::size_t>(i)];
    }
    return r;
}

void
SymMat::symmetrize()
{
    for (int i = 0; i < m; i++) {
        for (int j = i + 1; j < m; j++) {
            double v = 0.5 * (at(i, j) + at(j, i));
            at(i, j) = v;
            at(j, i) = v;
        }
    }
}

double
SymMat::quad(const double* x) const
{
    double s = 0.0;
    for (int i = 0; i < m; i++) {
        for (int j = 0; j < m; j++) {
            s += at(i, j) * x[i] * x[j];
        }
    }
    return s;
}

void
SymMat::mul(const double* x, double* y) const
{
    for (int i = 0; i < m; i++) {
        double s = 0.0;
        for (int j = 0; j < m; j++) {
            s += at(i, j) * x[j];
        }
        y[i] = s;
    }
}

double
SymMat::det() const
{
    switch (m) {
        case 1:
            return at(0, 0);
        case 2:
            return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
        default: {
            // LU with partial pivoting on a local copy.
            std::array<double, 16> b = a;
            auto el = [&](int i, int j) -> double& { return b[static_cast<std::size_t>(i * m + j)]; };
            double d = 1.0;
            for (int k = 0; k < m; k++) {
                int p = k;
                for (int i = k + 1; i < m; i++) {
                    if (std::fabs(el(i, k)) > std::fabs(el(p, k))) {
                        p = i;
                    }
                }
                if (p != k) {
                    for (int j = 0; j < m; j++) {
                        std::swap(el(p, j), el(k, j));
                    }
                    d = -d;
                }
                if (el(k, k) == 0.0) {
                    return 0.0;
                }
                d *= el(k, k);
                for (int i = k + 1; i < m; i++) {
                    double f = el(i, k) / el(k, k);
                    for (int j = k; j < m; j++) {
                        el(i, j) -= f * el(k, j);
                    }
                }
            }
            return d;
        }
    }
}

SymMat
SymMat::inverse() const
{
    SymMat inv(m);
    if (m == 1) {
        inv.at(0, 0) = 1.0 / at(0, 0);
        return inv;
    }
    if (m == 2) {
        double d = det();
        inv.at(0, 0) = at(1, 1) / d;
        inv.at(1, 1) = at(0, 0) / d;
        inv.at(0, 1) = -at(0, 1) / d;
        inv.at(1, 0) = -at(1, 0) / d;
        return inv;
    }
    // Gauss-Jordan with partial pivoting.
    std::array<double, 16> b = a;
    auto el = [&](int i, int j) -> double& { return b[static_cast<std::size_t>(i * m + j)]; };
    inv = identity(m);
    for (int k = 0; k < m; k++) {
        int p = k;
        for (int i = k + 1; i < m; i++) {
            if (std::fabs(el(i, k)) > std::fabs(el(p, k))) {
                p = i;
            }
        }
        if (el(p, k) == 0.0) {
            throw std::runtime_error("SymMat::inverse: singular matrix");
        }
        if (p != k) {
            for (int j = 0; j < m; j++) {
                std::swap(el(p, j), el(k, j));
                std::swap(inv.at(p, j), inv.at(k, j));
            }
        }
        double piv = el(k, k);
        for (int j = 0; j < m; j++) {
            el(k, j) /= piv;
            inv.at(k, j) /= piv;
        }
        for (int i = 0; i < m; i++) {
            if (i == k) {
                continue;
            }
            double f = el(i, k);
            for (int j = 0; j < m; j++) {
                el(i, j) -= f * el(k, j);
                inv.at(i, j) -= f * inv.at(k, j);
            }
        }
    }
    return inv;
}

void
SymMat::eigen(std::array<double, 4>& vals, SymMat* vecs) const
{
    SymMat w = *this;
    SymMat v = identity(m);
    for (int sweep = 0; sweep < 64; sweep++) {
        double off = 0.0;
        for (int i = 0; i < m; i++) {
            for (int j = i + 1; j < m; j++) {
                off += w.at(i, j) * w.at(i, j);
            }
        }
        if (off < 1e-300) {
            break;
        }
        for (int p = 0; p < m; p++) {
            for (int q = p + 1; q < m; q++) {
                double apq = w.at(p, q);
                if (std::fabs(apq) < 1e-300) {
                    continue;
                }
                double app = w.at(p, p);
                double aqq = w.at(q, q);
                double theta = 0.5 * (aqq - app) / apq;
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < m; k++) {
                    double wkp = w.at(k, p);
                    double wkq = w.at(k, q);
                    w.at(k, p) = c * wkp - s * wkq;
                    w.at(k, q) = s * wkp + c * wkq;
                }
                for (int k = 0; k < m; k++) {
                    double wpk = w.at(p, k);
                    double wqk = w.at(q, k);
                    w.at(p, k) = c * wpk - s * wqk;
                    w.at(q, k) = s * wpk + c * wqk;
                }
                for (int k = 0; k < m; k++) {
                    double vkp = v.at(k, p);
                    double vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    // Sort ascending, permuting eigenvector columns accordingly.
    std::array<int, 4> idx{0, 1, 2, 3};
    for (int i = 0; i < m; i++) {
        for (int j = i + 1; j < m; j++) {
            if (w.at(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(j)]) <
                w.at(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i)])) {
                std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
            }
        }
    }
    for (int i = 0; i < m; i++) {
        int k = idx[static_cast<std::size_t>(i)];
        vals[static_cast<std::size_t>(i)] = w.at(k, k);
        if (vecs != nullptr) {
            vecs->m = m;
            for (int r = 0; r < m; r++) {
                vecs->at(r, i) = v.at(r, k);
            }
        }
    }
}

double
SymMat::min_eigenvalue() const
{
    std::array<double, 4> vals{};
    eigen(vals);
    return vals[0];
}

double
SymMat::max_eigenvalue() const
{
    std::array<double, 4> vals{};
    eigen(vals);
    return vals[static_cast<std::size_t>(m - 1)];
}

SymMat
SymMat::sqrt_spd() const
{
    std::array<double, 4> vals{};
    SymMat v(m);
    eigen(vals, &v);
    SymMat r(m);
    for (int i = 0; i < m; i++) {
        for (int j = 0; j < m; j++) {
            double s = 0.0;
            for (int k = 0; k < m; k++) {
                double lk = vals[static_cast<std::size_t>(k)];
                if (lk < 0.0) {
                    throw std::runtime_error("SymMat::sqrt_spd: negative eigenvalue");
                }
                s += v.at(i, k) * std::sqrt(lk) * v.at(j, k);
            }
            r.at(i, j) = s;
        }
    }
    r.symmetrize();
    return r;
}

double
SymMat::max_abs_diff(const SymMat& other) const
{
    double r = 0.0;
    for (int i = 0; i < m; i++) {
        for (int j = 0; j < m; j++) {
            r = std::fmax(r, std::fabs(at(i, j) - other.at(i, j)));
        }
    }
    return r;
}

} // namespace levi
