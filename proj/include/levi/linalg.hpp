#pragma once

/** \file linalg.hpp
 *  \brief Small dense symmetric-matrix helpers (dimension <= 4).
 *
 *  Coefficient matrices in this library are tiny (1x1 or 2x2 in the shipped
 *  presets), so everything here is closed-form-or-Jacobi with no external
 *  dependencies.
 */

#include <array>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace levi {

/// Dense symmetric matrix of dimension m <= 4, stored row-major.
struct SymMat {
    int m = 0;
    std::array<double, 16> a{};

    SymMat() = default;
    explicit SymMat(int dim) : m(dim)
    {
        if (dim < 1 || dim > 4) {
            throw std::invalid_argument("SymMat: dimension must be in [1,4]");
        }
    }

    double& at(int i, int j) { return a[static_cast<std::size_t>(i * m + j)]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i * m + j)]; }

    static SymMat identity(int dim);
    static SymMat diag(const std::vector<double>& d);

    /// Symmetrize in place (average off-diagonal pairs).
    void symmetrize();

    /// <A x, x> for an m-vector x.
    double quad(const double* x) const;

    /// A x -> y for m-vectors.
    void mul(const double* x, double* y) const;

    double det() const;
    SymMat inverse() const;

    /// Eigenvalues (ascending) and optional orthonormal eigenvectors
    /// (column k of `vecs` is the k-th eigenvector), via cyclic Jacobi.
    void eigen(std::array<double, 4>& vals, SymMat* vecs = nullptr) const;

    double min_eigenvalue() const;
    double max_eigenvalue() const;

    /// Symmetric positive-definite square root.
    SymMat sqrt_spd() const;

    /// Max absolute entry of (this - other).
    double max_abs_diff(const SymMat& other) const;
};

} // namespace levi
