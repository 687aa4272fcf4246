#pragma once

/** \file group.hpp
 *  \brief Homogeneous (Carnot) group presets: group law, dilations,
 *         homogeneous norm, quasi-distance, Gaussian envelope and Lie
 *         derivatives along the generating horizontal fields.
 *
 *  Two presets are shipped: the abelian Euclidean space R^n and the first
 *  Heisenberg group H^1 (n = 3, layers (2,1), homogeneous dimension 4).
 */

#include <functional>
#include <string>
#include <vector>

namespace levi {

using Vec = std::vector<double>;

struct Group {
    enum class Kind { Euclidean, Heisenberg1 };

    Kind kind = Kind::Euclidean;
    std::string name;
    std::vector<int> layer_dims; ///< n_1..n_r
    int n = 0;                   ///< ambient dimension
    int m = 0;                   ///< number of generating horizontal fields (= n_1)
    int Q = 0;                   ///< homogeneous dimension sum i*n_i
    double quasi_triangle_k = 1.0;

    static Group euclidean(int n);
    static Group heisenberg1();
    /// Parse "euclidean:n" or "heisenberg1".
    static Group by_name(const std::string& name);

    bool is_euclidean() const { return kind == Kind::Euclidean; }

    Vec identity() const { return Vec(static_cast<std::size_t>(n), 0.0); }
    Vec compose(const Vec& x, const Vec& y) const;
    Vec inverse(const Vec& x) const;

    /// Anisotropic dilation: layer i scaled by lam^i. Requires lam > 0.
    Vec dilate(double lam, const Vec& x) const;

    /// Homogeneous degree of coordinate k (1-based layer index).
    int degree(int k) const;

    /// Homogeneous norm (|x| on R^n, Koranyi-type on H^1).
    double norm(const Vec& x) const;

    /// d(x, y) = ||y^{-1} o x||.
    double quasi_distance(const Vec& x, const Vec& y) const;

    /// E(x,t) = t^{-Q/2} exp(-||x||^2 / t). Requires t > 0.
    double envelope(const Vec& x, double t) const;

    /// Coefficient vector (length n) of the horizontal field X_i at x, i in [0, m).
    Vec field(int i, const Vec& x) const;

    /// Exact flow of X_i through x for time h (closed form for both presets).
    Vec flow(int i, double h, const Vec& x) const;

    /// Lie derivative of u along X_i at x: 5-point central difference along
    /// the exact flow; second-order (in fact fourth-order) accurate in h.
    double lie_derivative(const std::function<double(const Vec&)>& u, int i, const Vec& x,
                          double h) const;

    /// Second Lie derivative X_i X_j u at x by nested flow differencing.
    double lie_derivative2(const std::function<double(const Vec&)>& u, int i, int j, const Vec& x,
                           double h) const;
};

} // namespace levi
