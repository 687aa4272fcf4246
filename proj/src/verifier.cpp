#include "levi/verifier.hpp"

#include "levi/frozen_kernel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace levi {

namespace {

/// Pole offset (in the first coordinate) used by the two-pole estimates.
constexpr double kPoleOffset = 0.4;
/// Envelope time-scale of the injected negative-control term.
constexpr double kPerturbScale = 12.0;

} // namespace

EstimateVerifier::EstimateVerifier(const Group& group, const CoefficientField& field, double T,
                                   QuadratureSpec quad, SeriesPolicy policy)
    : g_(group), cf_(field), T_(T), quad_(quad), policy_(policy)
{
    if (T_ <= 0.0) {
        throw std::invalid_argument("EstimateVerifier: horizon must be positive");
    }
}

const std::vector<std::string>&
EstimateVerifier::known_ids()
{
    static const std::vector<std::string> ids = {
        "frozen_sandwich", "frozen_grad", "frozen_hess",  "frozen_dt", "frozen_coeff_lip",
        "dini_absorb",     "z1",          "series_term",  "mu",        "mu_holder",
        "j",               "j_grad",      "j_hess",       "j_time",    "gamma",
        "gamma_grad",      "gamma_hess"};
    return ids;
}

const ParametrixEngine&
EstimateVerifier::engine_at(double offset)
{
    auto it = engines_.find(offset);
    if (it == engines_.end()) {
        Vec xi = g_.identity();
        xi[0] = offset;
        it = engines_
                 .emplace(offset, std::make_unique<ParametrixEngine>(g_, cf_, xi, 0.0, T_, quad_,
                                                                     policy_))
                 .first;
    }
    return *it->second;
}

std::vector<EstimateVerifier::Sample>
EstimateVerifier::sample_grid(int refine) const
{
    // the coarse grid spans the whole regime (near-pole, bulk, tail; early
    // and late times); refinement densifies it in space and pushes closer to
    // the time singularity, so a wrong time exponent inflates the refined
    // constant while a genuine bound stays stable
    std::vector<double> radii = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.95, 1.2};
    std::vector<double> fracs = {0.08, 0.2, 0.45, 0.8, 0.95};
    if (refine > 1) {
        radii.insert(radii.end(), {0.075, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.875, 1.05});
        fracs.insert(fracs.end(), {0.04, 0.06, 0.12, 0.3, 0.6, 0.9});
    }
    std::vector<Sample> out;
    for (double r : radii) {
        for (int k = 0; k < g_.n; k++) {
            for (int sign = -1; sign <= 1; sign += 2) {
                Vec e = g_.identity();
                e[static_cast<std::size_t>(k)] = sign;
                Vec x = g_.dilate(r, e);
                for (double fr : fracs) {
                    out.push_back({x, fr * T_});
                }
            }
        }
    }
    return out;
}

double
EstimateVerifier::lhs_value(const std::string& id, const Vec& x, double t)
{
    const Vec origin = g_.identity();
    if (id == "frozen_sandwich" || id == "gamma" || id == "frozen_grad" || id == "frozen_hess" ||
        id == "frozen_dt") {
        FrozenKernel k(g_, cf_.freeze(origin, 0.0));
        if (id == "frozen_sandwich") {
            return k.eval(x, t); // two-sided ratio handled by the caller
        }
        FrozenKernel::Jet jet = k.jet(x, t);
        if (id == "frozen_grad") {
            double m = 0.0;
            for (int i = 0; i < g_.m; i++) {
                m = std::fmax(m, std::fabs(jet.d1[static_cast<std::size_t>(i)]));
            }
            return m;
        }
        if (id == "frozen_hess") {
            double m = 0.0;
            for (int i = 0; i < g_.m; i++) {
                for (int j = 0; j < g_.m; j++) {
                    m = std::fmax(m, std::fabs(jet.d2[static_cast<std::size_t>(i * 4 + j)]));
                }
            }
            return m;
        }
        if (id == "frozen_dt") {
            return std::fabs(jet.dt);
        }
        // "gamma"
        double v = jet.val + engine_at(0.0).j_term(x, t);
        if (perturb_ != 0.0) {
            v += perturb_ / (t * t) * g_.envelope(x, kPerturbScale * t);
        }
        return std::fabs(v);
    }
    if (id == "frozen_coeff_lip") {
        Vec xi2 = origin;
        xi2[0] = kPoleOffset;
        FrozenKernel k1(g_, cf_.freeze(origin, 0.0));
        FrozenKernel k2(g_, cf_.freeze(xi2, 0.0));
        return std::fabs(k1.eval(x, t) - k2.eval(x, t));
    }
    if (id == "dini_absorb") {
        double d = g_.quasi_distance(x, origin);
        return cf_.mod.omega(d) * g_.envelope(x, 2.0 * t);
    }
    if (id == "z1") {
        return std::fabs(engine_at(0.0).z1(x, t));
    }
    if (id == "series_term") {
        return std::fabs(engine_at(0.0).z_term(2, x, t));
    }
    if (id == "mu") {
        return std::fabs(engine_at(0.0).mu(x, t));
    }
    if (id == "mu_holder") {
        return std::fabs(engine_at(0.0).mu(x, t) - engine_at(kPoleOffset).mu(x, t));
    }
    if (id == "j") {
        return std::fabs(engine_at(0.0).j_term(x, t));
    }
    if (id == "j_grad" || id == "gamma_grad") {
        const ParametrixEngine& eng = engine_at(0.0);
        FrozenKernel k(g_, cf_.freeze(origin, 0.0));
        double m = 0.0;
        for (int i = 0; i < g_.m; i++) {
            double v = eng.j_deriv1(i, x, t);
            if (id == "gamma_grad") {
                v += k.jet(x, t).d1[static_cast<std::size_t>(i)];
            }
            m = std::fmax(m, std::fabs(v));
        }
        return m;
    }
    if (id == "j_hess" || id == "gamma_hess") {
        const ParametrixEngine& eng = engine_at(0.0);
        FrozenKernel k(g_, cf_.freeze(origin, 0.0));
        double m = 0.0;
        for (int i = 0; i < g_.m; i++) {
            for (int j = 0; j < g_.m; j++) {
                double v = eng.j_deriv2(i, j, x, t);
                if (id == "gamma_hess") {
                    v += k.jet(x, t).d2[static_cast<std::size_t>(i * 4 + j)];
                    if (perturb_ != 0.0) {
                        v += perturb_ / (t * t) * g_.envelope(x, kPerturbScale * t);
                    }
                }
                m = std::fmax(m, std::fabs(v));
            }
        }
        return m;
    }
    if (id == "j_time") {
        return std::fabs(engine_at(0.0).j_deriv_t(x, t));
    }
    throw std::invalid_argument("EstimateVerifier: unknown estimate id '" + id + "'");
}

double
EstimateVerifier::envelope_value(const std::string& id, const Vec& x, double t, double c) const
{
    double E = g_.envelope(x, c * t);
    double rt = std::sqrt(t);
    const Modulus& mod = cf_.mod;
    if (id == "frozen_sandwich" || id == "gamma") {
        return E;
    }
    if (id == "frozen_grad" || id == "gamma_grad") {
        return std::pow(t, -0.5) * E;
    }
    if (id == "frozen_hess" || id == "frozen_dt" || id == "gamma_hess") {
        return E / t;
    }
    if (id == "frozen_coeff_lip") {
        Vec origin = g_.identity();
        Vec xi2 = origin;
        xi2[0] = kPoleOffset;
        double da = cf_.at(origin, 0.0).max_abs_diff(cf_.at(xi2, 0.0));
        return da * E;
    }
    if (id == "dini_absorb") {
        return mod.omega(c * rt) * E;
    }
    if (id == "z1" || id == "mu") {
        return mod.omega(c * rt) / t * E;
    }
    if (id == "series_term") {
        return mod.omega(c * rt) / t * E * 4.0 * mod.dini(c * rt);
    }
    if (id == "mu_holder") {
        Vec xi2 = g_.identity();
        xi2[0] = kPoleOffset;
        double E2 = g_.envelope(g_.compose(g_.inverse(xi2), x), c * t);
        double d = g_.quasi_distance(xi2, g_.identity());
        return (E + E2) / t * (mod.omega(c * d) + mod.omega(c * rt) * mod.dini(c * d));
    }
    if (id == "j") {
        return mod.dini(c * rt) * E;
    }
    if (id == "j_grad") {
        return mod.dini(c * rt) * std::pow(t, -0.5) * E;
    }
    if (id == "j_hess" || id == "j_time") {
        return mod.dini(c * rt) / t * E;
    }
    throw std::invalid_argument("EstimateVerifier: unknown estimate id '" + id + "'");
}

double
EstimateVerifier::max_ratio(const std::string& id, const std::vector<Sample>& samples,
                            const std::vector<double>& lhs_cache, double c)
{
    double worst = 0.0;
    for (std::size_t si = 0; si < samples.size(); si++) {
        const Sample& s = samples[si];
        double lhs = lhs_cache[si];
        double ratio;
        if (id == "frozen_sandwich") {
            // two-sided: gamma below c E(x, ct) and above E(x, t/c) / c
            if (lhs <= 0.0) {
                return std::numeric_limits<double>::infinity();
            }
            double upper = lhs / g_.envelope(s.x, c * s.t);
            double lower = g_.envelope(s.x, s.t / c) / lhs;
            ratio = std::fmax(upper, lower);
        } else {
            double env = envelope_value(id, s.x, s.t, c);
            if (env <= 0.0) {
                ratio = (lhs == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
            } else {
                ratio = lhs / env;
            }
        }
        worst = std::fmax(worst, ratio);
    }
    return worst;
}

EnvelopeFit
EstimateVerifier::check(const std::string& id)
{
    EnvelopeFit fit;
    fit.id = id;
    std::vector<Sample> coarse = sample_grid(1);
    std::vector<Sample> refined = sample_grid(2); // superset of the coarse grid
    fit.samples = refined.size();

    // optimize the time scale c independently on each grid: the certified
    // quantity is the best achievable constant, and a wrong singularity
    // exponent inflates it on the refined grid at every c
    std::vector<double> lhs_coarse(coarse.size()), lhs_refined(refined.size());
    for (std::size_t i = 0; i < coarse.size(); i++) {
        lhs_coarse[i] = lhs_value(id, coarse[i].x, coarse[i].t);
    }
    for (std::size_t i = 0; i < refined.size(); i++) {
        lhs_refined[i] = lhs_value(id, refined[i].x, refined[i].t);
    }
    // the estimate claims "there exist C and c": certify the id when some
    // single time scale c gives a finite constant that is stable between the
    // two grids; report the stable c with the smallest refined constant (or,
    // when none is stable, the c with the least growth)
    bool found = false;
    double best_rf = std::numeric_limits<double>::infinity();
    double least_growth = std::numeric_limits<double>::infinity();
    for (double mult : {2.0, 4.0, 8.0, 16.0, 32.0}) {
        double c = mult * cf_.Lambda;
        double rc = max_ratio(id, coarse, lhs_coarse, c);
        double rf = max_ratio(id, refined, lhs_refined, c);
        if (!(rc > 0.0) || !std::isfinite(rf)) {
            continue;
        }
        double growth = rf / rc;
        bool stable = growth <= growth_threshold;
        bool better = stable ? (!found || rf < best_rf) : (!found && growth < least_growth);
        if (stable) {
            found = true;
        }
        least_growth = std::fmin(least_growth, growth);
        if (better) {
            best_rf = rf;
            fit.C_fit = rc;
            fit.C_refined = rf;
            fit.c_best = c;
            fit.growth = growth;
        }
    }
    fit.pass = found;
    if (fit.c_best == 0.0) {
        fit.growth = std::numeric_limits<double>::infinity();
    }
    return fit;
}

VerifierReport
EstimateVerifier::run_suite()
{
    VerifierReport rep;
    rep.all_pass = true;
    for (const std::string& id : known_ids()) {
        EnvelopeFit fit = check(id);
        rep.all_pass = rep.all_pass && fit.pass;
        rep.fits.push_back(std::move(fit));
    }
    return rep;
}

} // namespace levi
