#pragma once

/** \file oracle.hpp
 *  \brief Independent reference solvers used to cross-check the kernel
 *         construction: a 1-D Crank-Nicolson Green-function solver and a
 *         Monte Carlo sampler of the constant-coefficient diffusion.
 */

#include "levi/frozen_kernel.hpp"
#include "levi/group.hpp"
#include "levi/linalg.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace levi {

/// Result of the 1-D finite-difference evolution: the spatial grid and the
/// solution values at the final time.
struct FdSolution {
    double L = 0.0;    ///< half-width of the computational box
    double dx = 0.0;
    std::vector<double> x;
    std::vector<double> u;
    double sigma0 = 0.0; ///< standard deviation of the initial mollified delta

    /// Trapezoid L1 distance to a reference function on the same grid.
    double l1_distance(const std::function<double(double)>& ref) const;
    /// Trapezoid L1 norm of the solution itself.
    double l1_norm() const;
    /// Linear interpolation of the solution at a point inside the box.
    double at(double xq) const;
};

/// Evolve du/dt = a(x,t) d2u/dx2 on [-L, L] with zero boundary values from a
/// Gaussian surrogate of delta_xi at time tau to time t (Crank-Nicolson with
/// a tridiagonal solve per step).  sigma0 < 0 selects 2*dx.
FdSolution fd_green(const std::function<double(double, double)>& a, double xi, double tau,
                    double t, double L, int nx, int nt, double sigma0 = -1.0);

/// Evolve the same equation from an arbitrary initial datum g.
FdSolution fd_evolve(const std::function<double(double, double)>& a,
                     const std::function<double(double)>& g, double tau, double t, double L,
                     int nx, int nt);

/// Monte Carlo estimate of the constant-coefficient kernel at a set of target
/// points, with the matched smoothed reference for a fair comparison.
struct McResult {
    std::vector<double> estimate;   ///< kernel-density estimate at each target
    std::vector<double> std_error;  ///< standard error of the estimate
    std::vector<double> smoothed_ref; ///< reference kernel convolved with the
                                      ///< same bandwidth (quadrature, no MC)
    std::vector<double> bandwidth;  ///< per-axis kernel bandwidth
    std::size_t paths = 0;
};

/// Sample `paths` trajectories of the diffusion generated by
/// sum A_ij X_i X_j on the group (Euler steps composed in the group) and
/// estimate the transition density at time t via a Gaussian product kernel
/// with Silverman bandwidths scaled by bw_scale.  Deterministic for a fixed
/// seed regardless of thread count (per-block seeding).
McResult mc_kernel(const Group& g, const SymMat& A, double t, const std::vector<Vec>& targets,
                   std::size_t paths, int steps, std::uint64_t seed, double bw_scale = 1.0);

} // namespace levi
