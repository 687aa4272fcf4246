#pragma once

/** \file verifier.hpp
 *  \brief Empirical certification of the Gaussian envelope bounds satisfied
 *         by the constructed kernels: each named estimate is fitted as
 *         lhs <= C * envelope(c) over a sample grid and a scale grid in c,
 *         and certified by stability of the fitted constant under sample
 *         refinement (a genuine bound gives a stable C; a wrong exponent
 *         makes C grow with refinement).
 */

#include "levi/coefficient_field.hpp"
#include "levi/engine.hpp"
#include "levi/group.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace levi {

struct EnvelopeFit {
    std::string id;
    double C_fit = 0.0;   ///< best constant on the coarse sample grid
    double C_refined = 0.0; ///< best constant on the refined sample grid
    double c_best = 0.0;  ///< envelope time-scale at the best fit
    double growth = 0.0;  ///< C_refined / C_fit
    bool pass = false;    ///< finite fit and growth below the threshold
    std::size_t samples = 0;
};

struct VerifierReport {
    std::vector<EnvelopeFit> fits;
    bool all_pass = false;
};

/// Fits and certifies the envelope estimates for one coefficient preset.
class EstimateVerifier {
public:
    EstimateVerifier(const Group& group, const CoefficientField& field, double T,
                     QuadratureSpec quad = {}, SeriesPolicy policy = {});

    /// Identifiers understood by check(): kernel bounds ("frozen_*"), series
    /// bounds ("z1", "series_term", "mu", "mu_holder"), potential bounds
    /// ("j", "j_grad", "j_hess", "j_time"), assembled bounds ("gamma",
    /// "gamma_grad", "gamma_hess") and the modulus absorption inequality
    /// ("dini_absorb").
    static const std::vector<std::string>& known_ids();

    EnvelopeFit check(const std::string& id);
    VerifierReport run_suite();

    /// Inject a spurious (t)^{-2}-singular term into the assembled kernel
    /// quantities; a working certifier must then reject the second-derivative
    /// envelope (negative control).
    void set_perturbation(double amp) { perturb_ = amp; }

    double growth_threshold = 1.10;

private:
    struct Sample {
        Vec x;
        double t = 0.0;
    };

    Group g_;
    CoefficientField cf_;
    double T_;
    QuadratureSpec quad_;
    SeriesPolicy policy_;
    double perturb_ = 0.0;
    std::map<double, std::unique_ptr<ParametrixEngine>> engines_; ///< by pole offset

    const ParametrixEngine& engine_at(double offset);
    std::vector<Sample> sample_grid(int refine) const;
    /// max over samples of lhs / envelope(c); infinity when the envelope
    /// vanishes under a nonzero lhs.
    double max_ratio(const std::string& id, const std::vector<Sample>& samples,
                     const std::vector<double>& lhs_cache, double c);
    double lhs_value(const std::string& id, const Vec& x, double t);
    double envelope_value(const std::string& id, const Vec& x, double t, double c) const;
};

} // namespace levi
