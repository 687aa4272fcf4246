/** \file acceptance_main.cpp
 *  \brief End-to-end acceptance gate: ten independent criteria covering the
 *         degenerate constant-coefficient baseline, oracle equivalence, the
 *         equation residual, series self-consistency and damping, the frozen
 *         kernel contract, the envelope-estimate suites, the Cauchy solver,
 *         the modulus toolkit and the Monte Carlo cross-check.  One line is
 *         printed per criterion; the exit code is 0 only when every
 *         criterion passes.
 */

#include "levi/cauchy.hpp"
#include "levi/engine.hpp"
#include "levi/modulus.hpp"
#include "levi/oracle.hpp"
#include "levi/parallel.hpp"
#include "levi/quadrature.hpp"
#include "levi/verifier.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

using namespace levi;

namespace {

bool g_all_ok = true;

void
report(int idx, const char* what, bool ok, const std::string& detail)
{
    g_all_ok = g_all_ok && ok;
    std::printf("[%s] %2d: %s (%s)\n", ok ? "PASS" : "FAIL", idx, what, detail.c_str());
    std::fflush(stdout);
}

std::string
fmt(const char* f, ...)
{
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// --- 1: constant coefficients reduce to the explicit Gaussian ------------

void
criterion_1()
{
    double t0 = omp_get_wtime();
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::constant(1, SymMat::identity(1), 1.5);
    ParametrixEngine eng(g, cf, {0.0}, 0.0, 1.0, {}, {});

    double worst_rel = 0.0, worst_mu = 0.0, worst_j = 0.0;
    for (int i = 0; i < 50; ++i) {
        double x = -3.0 + 6.0 * i / 49.0;
        for (int k = 1; k <= 20; ++k) {
            double t = k / 20.0;
            double exact = std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * M_PI * t);
            worst_rel = std::fmax(worst_rel, std::fabs(eng.gamma({x}, t) - exact) / exact);
            if (i % 7 == 0 && k % 5 == 0) {
                worst_mu = std::fmax(worst_mu, std::fabs(eng.mu({x}, t)));
                worst_j = std::fmax(worst_j, std::fabs(eng.j_term({x}, t)));
            }
        }
    }
    double dt = omp_get_wtime() - t0;
    bool ok = worst_rel <= 1e-8 && worst_mu <= 1e-12 && worst_j <= 1e-12 && dt <= 10.0;
    report(1, "constant coefficients give the exact Gaussian", ok,
           fmt("rel %.2e, |mu| %.2e, |J| %.2e, %.1fs", worst_rel, worst_mu, worst_j, dt));
}

// --- 2: kernel matches the finite-difference oracle ----------------------

void
criterion_2()
{
    double t0 = omp_get_wtime();
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::sine1d(0.25);
    ParametrixEngine eng(g, cf, {0.0}, 0.0, 0.25, {}, {});
    auto a_fn = [&cf](double x, double t) { return cf.at({x}, t).at(0, 0); };

    double worst = 0.0;
    for (double dt : {0.05, 0.1, 0.2}) {
        FdSolution fd = fd_green(a_fn, 0.0, 0.0, dt, 8.0, 801, 600);
        const Rule& gh = gauss_hermite(24);
        double s = fd.sigma0 * std::sqrt(2.0);
        double hw = 6.0 * std::sqrt(dt) + 1.0;
        int nc = 101;
        double dx = 2.0 * hw / (nc - 1);
        double dist = 0.0, norm = 0.0;
        for (int i = 0; i < nc; ++i) {
            double x = -hw + dx * i;
            double sm = 0.0;
            for (std::size_t k = 0; k < gh.size(); ++k)
                sm += gh.w[k] * eng.gamma({x + s * gh.x[k]}, dt);
            sm /= std::sqrt(M_PI);
            double wq = (i == 0 || i == nc - 1) ? 0.5 : 1.0;
            dist += wq * dx * std::fabs(sm - fd.at(x));
            norm += wq * dx * std::fabs(fd.at(x));
        }
        worst = std::fmax(worst, dist / norm);
    }
    double el = omp_get_wtime() - t0;
    bool ok = worst <= 0.02 && el <= 300.0;
    report(2, "kernel matches the finite-difference reference in L1", ok,
           fmt("worst rel L1 %.4f, %.0fs", worst, el));
}

// --- 3: the constructed kernel satisfies the equation --------------------

double
residual_stats(const ParametrixEngine& eng, const CoefficientField& cf, double* worst_ratio)
{
    const Group& g = eng.group();
    double sum = 0.0;
    int n = 0;
    *worst_ratio = 0.0;
    for (double x = -1.2; x <= 1.21; x += 0.4)
        for (double t : {0.05, 0.1, 0.2}) {
            if (std::fabs(x) + std::sqrt(t) <= 0.1)
                continue; // excluded ball around the pole
            double h = 0.1;
            auto J = [&](double y) { return eng.j_term({y}, t); };
            double d2 =
                (-J(x + 2 * h) + 16 * J(x + h) - 30 * J(x) + 16 * J(x - h) - J(x - 2 * h)) /
                (12 * h * h);
            double ht = 0.05 * t;
            auto Jt = [&](double tt) { return eng.j_term({x}, tt); };
            double dJ =
                (-Jt(t + 2 * ht) + 8 * Jt(t + ht) - 8 * Jt(t - ht) + Jt(t - 2 * ht)) / (12 * ht);
            double a = cf.at({x}, t).at(0, 0);
            double res = std::fabs(eng.z1({x}, t) + a * d2 - dJ);
            double hg = 5e-4 * t;
            double dtg =
                std::fabs((eng.gamma({x}, t + hg) - eng.gamma({x}, t - hg)) / (2 * hg));
            *worst_ratio = std::fmax(*worst_ratio, res / dtg);
            sum += res;
            n++;
        }
    (void)g;
    return sum / n;
}

void
criterion_3()
{
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::sine1d(0.25);
    QuadratureSpec q;
    q.space_nodes = 24;
    q.time_levels = 5;
    q.time_nodes = 6;
    q.n_rho = 24;
    q.n_u = 192;

    ParametrixEngine eng(g, cf, {0.0}, 0.0, 0.25, q, {});
    double worst = 0.0;
    double mean = residual_stats(eng, cf, &worst);

    QuadratureSpec q2 = q;
    q2.time_nodes *= 2;
    ParametrixEngine eng2(g, cf, {0.0}, 0.0, 0.25, q2, {});
    double worst2 = 0.0;
    double mean2 = residual_stats(eng2, cf, &worst2);

    double ratio = mean2 / mean;
    bool ok = worst <= 0.01 && ratio >= 0.35 && ratio <= 0.65;
    report(3, "equation residual is below 1% and halves under node doubling", ok,
           fmt("worst |H G|/|dG/dt| %.4f, halving ratio %.2f", worst, ratio));
}

// --- 4: Volterra identity on 100 sampled pairs ---------------------------

void
criterion_4()
{
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::sine1d(0.25);
    QuadratureSpec q;
    q.space_nodes = 20;
    q.time_levels = 5;
    q.time_nodes = 8;
    q.n_rho = 24;
    q.n_u = 48;

    // The engine's own residual is a fixed-point self-consistency and cancels
    // by construction; here the Volterra operator is re-applied with an
    // independent, finer rule so the identity is genuinely tested.
    QuadratureSpec qf = q;
    qf.space_nodes = 30;
    qf.time_levels = 6;
    qf.time_nodes = 9;

    struct Pole {
        double x, t;
    };
    double worst = 0.0;
    int pairs = 0;
    for (Pole p : {Pole{0.0, 0.0}, Pole{0.5, 0.0}, Pole{-0.7, 0.03}, Pole{0.3, 0.08}}) {
        ParametrixEngine eng(g, cf, {p.x}, p.t, p.t + 0.25, q, {});
        ParametrixEngine fine(g, cf, {p.x}, p.t, p.t + 0.25, qf, {});
        for (double dx : {-0.9, -0.45, 0.05, 0.5, 0.95})
            for (double dt : {0.04, 0.08, 0.12, 0.17, 0.21}) {
                Vec x = {p.x + dx};
                double t = p.t + dt;
                double tmu = fine.spacetime_integral(
                    [&](const Vec& y, double eta) {
                        double m = eng.mu_interp(y, eta);
                        return m == 0.0 ? 0.0 : eng.z1_at(x, t, y, eta) * m;
                    },
                    x, t);
                double res = std::fabs(eng.z1(x, t) - eng.mu(x, t) + tmu);
                double scale = std::fmax(std::fabs(eng.z1(x, t)), std::fabs(eng.mu(x, t)));
                worst = std::fmax(worst, res / (0.01 * scale + 1e-12));
                pairs++;
            }
    }
    bool ok = worst <= 1.0 && pairs == 100;
    report(4, "Volterra identity holds on 100 sampled pairs", ok,
           fmt("worst residual at %.2f of the 1%% budget", worst));
}

// --- 5: series contraction scale and the damping's necessity -------------

void
criterion_5()
{
    QuadratureSpec q;
    q.space_nodes = 14;
    q.time_levels = 4;
    q.time_nodes = 6;
    q.n_rho = 20;
    q.n_u = 32;

    Group g = Group::euclidean(1);
    CoefficientField sine = CoefficientField::sine1d(0.25);
    SeriesPolicy undamped;
    undamped.lambda = 0.0;
    undamped.J_max = 10;

    // (a) the undamped per-term ratio scales like the first modulus integral
    // at the horizon: fit the constant at T = 0.2 and check the shorter
    // horizons against 4 C omega~(c1 sqrt(T)), c1 = 4.
    double c1 = 4.0;
    ParametrixEngine ref(g, sine, {0.0}, 0.0, 0.2, q, undamped);
    double C = ref.diagnostics().q / sine.mod.dini(c1 * std::sqrt(0.2));
    bool scale_ok = ref.diagnostics().converged;
    std::string sdet;
    for (double T : {0.0125, 0.05}) {
        ParametrixEngine e(g, sine, {0.0}, 0.0, T, q, undamped);
        double bound = 4.0 * C * sine.mod.dini(c1 * std::sqrt(T));
        scale_ok = scale_ok && e.diagnostics().converged && e.diagnostics().q <= bound;
        sdet += fmt(" q(%.4f)=%.3f<=%.3f", T, e.diagnostics().q, bound);
    }

    // (b) a steep preset over a long horizon: undamped series fails to
    // contract, the automatic damping restores convergence.
    CoefficientField steep = CoefficientField::holder1d(10.0, 1.0);
    ParametrixEngine bare(g, steep, {0.0}, 0.0, 4.0, q, undamped);
    SeriesPolicy auto_policy;
    auto_policy.J_max = 10;
    ParametrixEngine damped(g, steep, {0.0}, 0.0, 4.0, q, auto_policy);
    bool damp_ok = !bare.diagnostics().converged && bare.diagnostics().q >= 1.0 &&
                   damped.diagnostics().converged && damped.diagnostics().q < 1.0 &&
                   damped.diagnostics().lambda > 0.0;

    report(5, "series contraction scales with the modulus; damping is necessary",
           scale_ok && damp_ok,
           fmt("%s; undamped q=%.3f, damped q=%.3f at lambda=%.0f", sdet.c_str() + 1,
               bare.diagnostics().q, damped.diagnostics().q, damped.diagnostics().lambda));
}

// --- 6: frozen-kernel contract -------------------------------------------

bool
sandwich_stable(const FrozenKernel& k, std::string* detail)
{
    const Group& g = k.g;
    auto fit = [&](bool refined, double c, double* up, double* lo) {
        std::vector<double> radii = {0.2, 0.5, 0.9, 1.4};
        std::vector<double> times = {0.1, 0.3, 0.7};
        if (refined) {
            radii.insert(radii.end(), {0.35, 0.7, 1.1});
            times.insert(times.end(), {0.05, 0.5, 0.9});
        }
        *up = 0.0;
        *lo = 0.0;
        for (double r : radii)
            for (double t : times) {
                Vec e = g.identity();
                e[0] = 1.0;
                Vec x = g.dilate(r, e);
                double gam = k.eval(x, t);
                *up = std::fmax(*up, gam / g.envelope(x, c * t));
                *lo = std::fmax(*lo, g.envelope(x, t / c) / gam);
            }
    };
    for (double c : {2.0, 4.0, 8.0, 16.0}) {
        double u1, l1, u2, l2;
        fit(false, c, &u1, &l1);
        fit(true, c, &u2, &l2);
        if (std::isfinite(u2) && std::isfinite(l2) && u2 <= 1.1 * u1 && l2 <= 1.1 * l1) {
            *detail = fmt("c=%.0f C_up=%.3f C_low=%.3f", c, u2, l2);
            return true;
        }
    }
    *detail = "no stable scale";
    return false;
}

void
criterion_6()
{
    Group ge = Group::euclidean(1);
    FrozenKernel ke(ge, SymMat::identity(1));
    double n_e = std::fabs(ke.normalization(0.7) - 1.0);
    double ck_e = ke.chapman_kolmogorov_residual({0.4}, 0.3, 0.5);
    double v_e = std::fmax(std::fabs(ke.vanishing_integral(0, 0, 0.5)),
                           std::fabs(ke.vanishing_integral(-1, -1, 0.5)));
    double exact = 0.0;
    for (double x : {0.3, -1.4})
        for (double t : {0.2, 1.1}) {
            double ratio = ke.eval({x}, t) / ge.envelope({x}, 4.0 * t);
            exact = std::fmax(exact, std::fabs(ratio - 1.0 / std::sqrt(M_PI)));
        }

    Group gh = Group::heisenberg1();
    FrozenKernel kh(gh, SymMat::identity(2));
    double n_h = std::fabs(kh.normalization(0.5, 32) - 1.0);
    double ck_h = kh.chapman_kolmogorov_residual(gh.identity(), 0.25, 0.25, 24);
    double v_h = std::fmax(std::fabs(kh.vanishing_integral(0, 0, 0.5, 24)),
                           std::fabs(kh.vanishing_integral(-1, -1, 0.5, 24)));

    std::string se, sh;
    bool sw = sandwich_stable(ke, &se) && sandwich_stable(kh, &sh);

    bool ok = n_e <= 1e-8 && ck_e <= 1e-8 && v_e <= 1e-8 && exact <= 1e-12 && n_h <= 1e-3 &&
              ck_h <= 1e-2 && v_h <= 1e-2 && sw;
    report(6, "frozen kernels: normalization, semigroup, vanishing moments, sandwich", ok,
           fmt("euclid %.1e/%.1e/%.1e pi-ratio %.1e; heis %.1e/%.1e/%.1e; %s / %s", n_e, ck_e,
               v_e, exact, n_h, ck_h, v_h, se.c_str(), sh.c_str()));
}

// --- 7: envelope estimates on both beyond-Lipschitz presets --------------

void
criterion_7()
{
    QuadratureSpec q;
    q.space_nodes = 16;
    q.time_levels = 5;
    q.time_nodes = 6;
    q.n_rho = 24;
    q.n_u = 48;

    Group g = Group::euclidean(1);
    bool ok = true;
    std::string detail;
    struct P {
        const char* name;
        CoefficientField cf;
    };
    for (P p : {P{"holder", CoefficientField::holder1d(0.5, 0.5)},
                P{"log", CoefficientField::log_modulated1d(0.3, 3.0)}}) {
        EstimateVerifier ver(g, p.cf, 0.25, q, {});
        VerifierReport rep = ver.run_suite();
        ok = ok && rep.all_pass;
        int fails = 0;
        for (const EnvelopeFit& f : rep.fits)
            fails += f.pass ? 0 : 1;
        detail += fmt("%s %zu ids %d fail; ", p.name, rep.fits.size(), fails);
    }
    EstimateVerifier neg(g, CoefficientField::sine1d(0.25), 0.25, q, {});
    neg.set_perturbation(0.1);
    bool neg_fails = !neg.check("gamma_hess").pass;
    ok = ok && neg_fails;
    detail += neg_fails ? "control rejected" : "CONTROL ACCEPTED";
    report(7, "estimate suites pass on both presets; fault control is rejected", ok, detail);
}

// --- 8: Cauchy problems ---------------------------------------------------

void
criterion_8()
{
    Group g = Group::euclidean(1);
    CoefficientField cf = CoefficientField::sine1d(0.25);
    CauchyGrid grid; // production defaults: L 6, 96 x 24 nodes
    QuadratureSpec q;
    q.space_nodes = 20;
    q.time_levels = 6;
    q.time_nodes = 8;

    CauchySolver ones(g, cf, 0.25, grid, q);
    ones.set_initial([](const Vec&) { return 1.0; });
    double worst_const = 0.0;
    for (double t : {0.02, 0.1, 0.2})
        for (double x = -1.5; x <= 1.61; x += 0.5)
            worst_const = std::fmax(worst_const, std::fabs(ones.homogeneous({x}, t) - 1.0));

    CauchySolver cosine(g, cf, 0.25, grid, q);
    cosine.set_initial([](const Vec& x) { return std::cos(x[0]); });
    double worst_attain = 0.0;
    for (double x = -1.0; x <= 1.01; x += 0.25)
        worst_attain =
            std::fmax(worst_attain, std::fabs(cosine.homogeneous({x}, 1e-3) - std::cos(x)));

    CauchySolver full(g, cf, 0.25, grid, q);
    full.set_initial([](const Vec& x) { return std::exp(-x[0] * x[0]); });
    full.set_source([](const Vec& x, double t) { return 0.5 * std::cos(x[0]) + 0.2 * t; });
    double worst_res = 0.0;
    for (double x : {0.2, -0.5}) {
        double f = 0.5 * std::cos(x) + 0.2 * 0.12;
        worst_res = std::fmax(worst_res, std::fabs(full.equation_residual({x}, 0.12)) / f);
    }

    CauchySolver bump(g, cf, 0.2, grid, q);
    bump.set_initial([](const Vec& x) {
        double d = 1.0 - x[0] * x[0];
        return d > 0.0 ? d * d : 0.0;
    });
    double min_u = 0.0;
    for (double t : {0.05, 0.15})
        for (double x = -1.6; x <= 1.61; x += 0.4)
            min_u = std::fmin(min_u, bump.homogeneous({x}, t));

    bool ok = worst_const <= 1e-3 && worst_attain <= 0.01 && worst_res <= 0.01 &&
              min_u >= -1e-8;
    report(8, "Cauchy solver: constants, attainment, residual, nonnegativity", ok,
           fmt("|u-1| %.2e, attainment %.2e, |Hu-f|/f %.2e, min u %.1e", worst_const,
               worst_attain, worst_res, min_u));
}

// --- 9: modulus toolkit ---------------------------------------------------

void
criterion_9()
{
    double worst_id = 0.0;
    for (Modulus mod : {Modulus::log_dini(3.0), Modulus::holder(0.5)}) {
        Modulus sc = mod.scaled(2.0, 3.0);
        Modulus sq = mod.compose_sqrt();
        for (double r : {1e-4, 1e-2, 0.1, 0.4, 0.9}) {
            worst_id = std::fmax(worst_id, std::fabs(sc.omega(r) - 2.0 * mod.omega(3.0 * r)));
            worst_id = std::fmax(worst_id, std::fabs(sq.omega(r) - mod.omega(std::sqrt(r))));
        }
        double C = mod.fit_omega_leq_dini();
        for (double r : {1e-3, 0.1, 0.8})
            worst_id = std::fmax(worst_id, mod.omega(r) - C * mod.dini(r) * (1.0 + 1e-8));
    }

    // Half-power integral of the alpha = 3 log modulus: convergent, and the
    // numeric value matches the closed-form antiderivative
    // (-log T)^{-5/4} / (5/4) for T <= 1/2.
    Modulus lg = Modulus::log_dini(3.0);
    double drift = 0.0, value = 0.0;
    for (double T : {0.1, 0.4}) {
        value = lg.half_power_integral(0.25, T);
        double exact = std::pow(-std::log(T), -1.25) / 1.25;
        drift = std::fmax(drift, std::fabs(value - exact) / exact);
    }

    bool ok = worst_id <= 1e-8 && drift <= 1e-4 && std::isfinite(value);
    report(9, "modulus identities and the half-power log-Dini integral", ok,
           fmt("worst identity residual %.1e, value %.6f, drift vs exact %.1e", worst_id, value,
               drift));
}

// --- 10: Monte Carlo cross-check on the Heisenberg group -----------------

void
criterion_10()
{
    double t0 = omp_get_wtime();
    Group g = Group::heisenberg1();
    SymMat A(2);
    A.at(0, 0) = 1.3;
    A.at(1, 1) = 0.8;
    A.at(0, 1) = 0.2;

    std::vector<Vec> targets = {{0.3, 0.2, 0.05},
                                {0.6, -0.4, 0.1},
                                {1.0, 0.5, -0.2},
                                {-0.8, 0.9, 0.3},
                                {1.4, -1.1, 0.5}};
    McResult mc = mc_kernel(g, A, 0.4, targets, 100000, 400, 2026);
    double worst = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i)
        worst = std::fmax(worst,
                          std::fabs(mc.estimate[i] - mc.smoothed_ref[i]) / mc.std_error[i]);
    double el = omp_get_wtime() - t0;
    bool ok = worst <= 2.0 && el <= 120.0;
    report(10, "Heisenberg kernel within 2 standard errors of Monte Carlo", ok,
           fmt("worst deviation %.2f stderr, %.0fs", worst, el));
}

} // namespace

int
main()
{
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%s\n", g_all_ok ? "ACCEPTANCE: all criteria pass"
                                 : "ACCEPTANCE: at least one criterion FAILED");
    return g_all_ok ? 0 : 1;
}
