#pragma once

/** \file coefficient_field.hpp
 *  \brief The coefficient map (x,t) -> A(x,t), a symmetric uniformly elliptic
 *         matrix with spectrum in [1/Lambda, Lambda], together with its
 *         modulus-of-continuity bound, validation, and freezing at a point.
 */

#include "levi/group.hpp"
#include "levi/linalg.hpp"
#include "levi/modulus.hpp"

#include <functional>
#include <string>

namespace levi {

struct FieldValidation {
    double worst_ellipticity_margin = 0.0; ///< min over samples of min(lam_min - 1/L, L - lam_max)
    double worst_continuity_ratio = 0.0;   ///< max |da| / omega(d + sqrt(dt))
    double worst_symmetry_residual = 0.0;
    int samples = 0;
    bool ok = false;
};

struct CoefficientField {
    int m = 0;             ///< matrix dimension (= number of horizontal fields)
    double Lambda = 2.0;   ///< uniform ellipticity parameter (> 1)
    Modulus mod;           ///< modulus bounding the increments
    std::function<SymMat(const Vec& x, double t)> eval_fn;

    SymMat at(const Vec& x, double t) const { return eval_fn(x, t); }

    /// A(zeta) with an ellipticity check (throws when outside [1/L, L] margins).
    SymMat freeze(const Vec& xi, double tau) const;

    /// Statistical validation of symmetry/ellipticity/continuity on a box.
    FieldValidation validate(const Group& g, double box_half_width, double T, int sample_count,
                             unsigned long long seed) const;

    bool is_constant() const { return constant_tag; }
    bool constant_tag = false;

    // Presets -------------------------------------------------------------
    static CoefficientField constant(int m, const SymMat& A, double Lambda);
    /// 1D: a(x,t) = 1 + amp * sin(x). Requires |amp| < 1.
    static CoefficientField sine1d(double amp);
    /// 2D: A = I + eps * R(x,t) with R smooth bounded (entries built from
    /// sin/cos of the coordinates), eps <= 1/(2 Lambda).
    static CoefficientField rotating2d(double eps);
    /// 1D log-modulated field a(x,t) = 1 + kappa * w_alpha(|x| + sqrt(t))
    /// where w_alpha is the log modulus.
    static CoefficientField log_modulated1d(double kappa, double alpha);
    /// 1D Hoelder-modulated field a(x,t) = 1 + kappa * (|x| + sqrt(t))^beta (capped).
    static CoefficientField holder1d(double kappa, double beta);

    static CoefficientField by_name(const std::string& name, double amp, double kappa,
                                    double alpha, double beta);
};

} // namespace levi
