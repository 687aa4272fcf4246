#pragma once

/** \file cauchy.hpp
 *  \brief Cauchy-problem solver for H u = sum a_ij X_i X_j u - du/dt = f with
 *         u(., 0) = g, built on top of the kernel machinery: the variable-part
 *         density nu solves a Volterra equation driven by the
 *         coefficient-increment kernel, and the solution is assembled as
 *         layer potentials against the frozen kernels.
 */

#include "levi/coefficient_field.hpp"
#include "levi/engine.hpp"
#include "levi/group.hpp"

#include <functional>
#include <vector>

namespace levi {

/// Tabulation grid for the Volterra densities over the slab
/// [-L, L]^n x (0, T].  Time nodes live on a sqrt(time) axis so the initial
/// layer is resolved.
struct CauchyGrid {
    double L = 6.0;
    int n_y = 96;       ///< space nodes per axis
    int n_rho = 24;     ///< nodes in rho = sqrt(eta)
    int max_sweeps = 8; ///< Volterra fixed-point iterations
    double tol = 1e-6;  ///< stop when a sweep changes the table by tol * scale
};

class CauchySolver {
public:
    using SpaceFn = std::function<double(const Vec&)>;
    using SpaceTimeFn = std::function<double(const Vec&, double)>;

    CauchySolver(const Group& group, const CoefficientField& field, double T,
                 CauchyGrid grid = {}, QuadratureSpec quad = {});

    /// Install the initial datum and build its Volterra density nu.
    void set_initial(SpaceFn g);

    /// Install the right-hand side and build its corrected density f~.
    void set_source(SpaceTimeFn f);

    /// Homogeneous solution: initial-layer potential plus the nu potential.
    double homogeneous(const Vec& x, double t) const;

    /// Volterra potential of the raw source (frozen-kernel layer of f).
    double potential(const Vec& x, double t) const;

    /// Full solution of H u = f, u(., 0) = g.
    double solve(const Vec& x, double t) const;

    /// Interpolated Volterra density of the initial datum.
    double nu(const Vec& y, double eta) const;

    /// Interpolated corrected source density.
    double f_tilde(const Vec& y, double eta) const;

    /// Residual H u - f via wide finite differences of `solve` (diagnostic).
    double equation_residual(const Vec& x, double t, double h_space = 0.1,
                             double h_time = 0.02) const;

    int sweeps_used() const { return sweeps_used_; }
    double horizon() const { return T_; }

private:
    struct Table {
        std::vector<double> v; ///< [rho index][y1 index]...[yn index]
        bool singular_weight = false; ///< divide/multiply by omega(rho)/rho
        bool built = false;
    };

    Group g_;
    CoefficientField cf_;
    double T_;
    CauchyGrid grid_;
    QuadratureSpec quad_;
    double c_env_;
    double rho_max_;
    int sweeps_used_ = 0;

    SpaceFn g_fn_;
    SpaceTimeFn f_fn_;
    Table nu_;
    Table ft_;

    std::size_t table_size() const;
    void decode(std::size_t idx, double& rho, Vec& y) const;
    double weight(const Table& tab, double rho) const;
    double interp(const Table& tab, const Vec& y, double eta) const;

    /// One application of the Volterra kernel to an interpolated table.
    double apply_T(const Table& tab, const Vec& y, double eta) const;
    /// Fixed-point solve phi = source + T phi; source evaluated per node.
    void volterra_solve(Table& tab, const std::function<double(const Vec&, double)>& source);

    /// Frozen-kernel layer potential of a space-time density.
    double layer_potential(const std::function<double(const Vec&, double)>& h, const Vec& x,
                           double t) const;
};

} // namespace levi
