#include "levi/runner.hpp"

#include "levi/oracle.hpp"
#include "levi/quadrature.hpp"
#include "levi/verifier.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace levi {

using nlohmann::json;

namespace {

std::ofstream
open_out(const RunConfig& cfg, const std::string& name)
{
    std::filesystem::create_directories(cfg.out_dir);
    std::filesystem::path p = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream os(p, std::ios::binary); // binary keeps line endings ours
    if (!os)
        throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
}

void
write_json(const RunConfig& cfg, const std::string& name, const json& j)
{
    std::ofstream os = open_out(cfg, name);
    os << j.dump(2) << '\n';
}

/// Grid sweep along the first coordinate (remaining coordinates at 0).
std::vector<Vec>
axis_grid(const Group& g, double half_width, int nx)
{
    std::vector<Vec> pts;
    for (int i = 0; i < nx; ++i) {
        Vec x = g.identity();
        x[0] = -half_width + 2.0 * half_width * i / (nx - 1);
        pts.push_back(x);
    }
    return pts;
}

std::vector<double>
time_grid(const RunConfig& cfg)
{
    std::vector<double> ts;
    for (int j = 1; j <= cfg.grid_nt; ++j)
        ts.push_back(cfg.pole_t + (cfg.T - cfg.pole_t) * j / cfg.grid_nt);
    return ts;
}

json
diagnostics_json(const SeriesDiagnostics& d)
{
    return {{"lambda", d.lambda},     {"epsilon", d.epsilon},
            {"phi", d.phi},           {"q", d.q},
            {"C_fit", d.C_fit},       {"tail_bound", d.tail_bound},
            {"J_used", d.J_used},     {"converged", d.converged},
            {"term_norms", d.term_norms}};
}

} // namespace

int
run_kernel(const RunConfig& cfg, std::ostream& log)
{
    Group g = cfg.make_group();
    CoefficientField cf = cfg.make_field();
    Vec pole = cfg.pole_x.empty() ? g.identity() : cfg.pole_x;

    ParametrixEngine eng(g, cf, pole, cfg.pole_t, cfg.T, cfg.quad, cfg.policy);
    const SeriesDiagnostics& d = eng.diagnostics();
    write_json(cfg, "kernel_diagnostics.json", diagnostics_json(d));
    if (!d.converged) {
        log << "kernel: series did not contract (q = " << d.q << ")\n";
        return 2;
    }

    std::ofstream os = open_out(cfg, "kernel_grid.csv");
    eng.write_grid_csv(os, axis_grid(g, cfg.grid_half_width, cfg.grid_nx), time_grid(cfg));
    log << "kernel: q = " << d.q << ", " << d.J_used << " terms, grid written\n";
    return 0;
}

int
run_verify(const RunConfig& cfg, std::ostream& log)
{
    Group g = cfg.make_group();
    CoefficientField cf = cfg.make_field();
    EstimateVerifier ver(g, cf, cfg.T, cfg.quad, cfg.policy);

    const std::vector<std::string>& ids =
        cfg.suite_ids.empty() ? EstimateVerifier::known_ids() : cfg.suite_ids;

    std::ofstream os = open_out(cfg, "verify_fits.csv");
    CsvWriter csv(os);
    csv.header({"id", "C_fit", "C_refined", "c_best", "growth", "pass", "samples"});

    json report = json::array();
    bool all = true;
    for (const std::string& id : ids) {
        EnvelopeFit f = ver.check(id);
        all = all && f.pass;
        csv.row({f.id, CsvWriter::num(f.C_fit), CsvWriter::num(f.C_refined),
                 CsvWriter::num(f.c_best), CsvWriter::num(f.growth), f.pass ? "1" : "0",
                 std::to_string(f.samples)});
        report.push_back({{"id", f.id},
                          {"C_fit", f.C_fit},
                          {"C_refined", f.C_refined},
                          {"c_best", f.c_best},
                          {"growth", f.growth},
                          {"pass", f.pass},
                          {"samples", f.samples}});
        log << "verify: " << f.id << (f.pass ? " ok" : " FAIL") << " (C = " << f.C_refined
            << ", growth = " << f.growth << ")\n";
    }
    write_json(cfg, "verify_report.json", {{"fits", report}, {"all_pass", all}});
    return all ? 0 : 1;
}

int
run_cauchy(const RunConfig& cfg, std::ostream& log)
{
    Group g = cfg.make_group();
    CoefficientField cf = cfg.make_field();
    CauchySolver solver(g, cf, cfg.T, cfg.cauchy, cfg.quad);

    auto g_fn = named_initial(cfg.initial);
    auto f_fn = named_source(cfg.source);
    if (g_fn)
        solver.set_initial(g_fn);
    if (f_fn)
        solver.set_source(f_fn);
    if (!g_fn && !f_fn)
        throw std::runtime_error("cauchy: neither initial datum nor source configured");

    std::vector<Vec> pts = axis_grid(g, cfg.grid_half_width, cfg.grid_nx);
    std::vector<double> ts = time_grid(cfg);

    std::ofstream os = open_out(cfg, "cauchy_grid.csv");
    CsvWriter csv(os);
    std::vector<std::string> head;
    for (int d = 0; d < g.n; ++d)
        head.push_back("x" + std::to_string(d + 1));
    head.push_back("t");
    head.push_back("u");
    csv.header(head);
    for (double t : ts)
        for (const Vec& x : pts) {
            std::vector<double> r(x.begin(), x.end());
            r.push_back(t);
            r.push_back(solver.solve(x, t));
            csv.row(r);
        }

    // Pointwise residual probes at mid-horizon, interior points.
    json probes = json::array();
    double worst = 0.0;
    double tm = 0.5 * cfg.T;
    for (double xr : {-0.5 * cfg.grid_half_width, 0.0, 0.4 * cfg.grid_half_width}) {
        Vec x = g.identity();
        x[0] = xr;
        double res = solver.equation_residual(x, tm);
        double fv = f_fn ? f_fn(x, tm) : 0.0;
        worst = std::max(worst, std::fabs(res));
        probes.push_back({{"x", x}, {"t", tm}, {"residual", res}, {"f", fv}});
    }
    write_json(cfg, "cauchy_report.json",
               {{"sweeps", solver.sweeps_used()}, {"probes", probes}, {"worst_residual", worst}});
    log << "cauchy: grid written, worst probe residual " << worst << "\n";
    return 0;
}

int
run_oracle_compare(const RunConfig& cfg, std::ostream& log)
{
    Group g = cfg.make_group();
    CoefficientField cf = cfg.make_field();

    std::ofstream os = open_out(cfg, "oracle_compare.csv");
    CsvWriter csv(os);
    bool ok = true;
    json report;

    if (g.is_euclidean() && g.n == 1) {
        // Finite-difference cross-check: the kernel smoothed with the same
        // initial mollifier the FD solver uses, compared in relative L1.
        ParametrixEngine eng(g, cf, g.identity(), 0.0, cfg.T, cfg.quad, cfg.policy);
        auto a_fn = [&cf](double x, double t) { return cf.at({x}, t).at(0, 0); };
        csv.header({"dt", "l1_rel", "sigma0"});
        json rows = json::array();
        for (double dt : cfg.compare_dts) {
            FdSolution fd = fd_green(a_fn, 0.0, 0.0, dt, cfg.fd_L, cfg.fd_nx, cfg.fd_nt);
            const Rule& gh = gauss_hermite(24);
            double s = fd.sigma0 * std::sqrt(2.0);
            auto smoothed = [&](double x) {
                double acc = 0.0;
                for (std::size_t i = 0; i < gh.size(); ++i)
                    acc += gh.w[i] * eng.gamma({x + s * gh.x[i]}, dt);
                return acc / std::sqrt(M_PI);
            };
            int nc = 101;
            double hw = std::min(cfg.fd_L - 1.0, 6.0 * std::sqrt(dt) + 1.0);
            double dx = 2.0 * hw / (nc - 1);
            double dist = 0.0, norm = 0.0;
            for (int i = 0; i < nc; ++i) {
                double x = -hw + dx * i;
                double wq = (i == 0 || i == nc - 1) ? 0.5 : 1.0;
                double fv = fd.at(x);
                dist += wq * dx * std::fabs(smoothed(x) - fv);
                norm += wq * dx * std::fabs(fv);
            }
            double rel = dist / norm;
            ok = ok && rel <= cfg.compare_tol;
            csv.row({CsvWriter::num(dt), CsvWriter::num(rel), CsvWriter::num(fd.sigma0)});
            rows.push_back({{"dt", dt}, {"l1_rel", rel}});
            log << "oracle-compare: dt = " << dt << ", relative L1 = " << rel << "\n";
        }
        report = {{"mode", "finite_difference"}, {"rows", rows}, {"pass", ok}};
    } else {
        // Monte Carlo cross-check of the frozen kernel at dilated targets.
        SymMat A = cf.at(g.identity(), 0.0);
        std::vector<Vec> targets;
        for (double lam : {0.3, 0.6, 0.9, 1.2, 1.5}) {
            Vec e = g.identity();
            e[0] = 1.0;
            targets.push_back(g.dilate(lam * std::sqrt(cfg.T), e));
        }
        McResult mc =
            mc_kernel(g, A, cfg.T, targets, cfg.mc_paths, cfg.mc_steps, cfg.seed);
        csv.header({"target_norm", "mc", "stderr", "smoothed_kernel", "sigmas"});
        json rows = json::array();
        for (std::size_t i = 0; i < targets.size(); ++i) {
            double dev = std::fabs(mc.estimate[i] - mc.smoothed_ref[i]) / mc.std_error[i];
            ok = ok && dev <= cfg.mc_sigmas;
            csv.row({CsvWriter::num(g.norm(targets[i])), CsvWriter::num(mc.estimate[i]),
                     CsvWriter::num(mc.std_error[i]), CsvWriter::num(mc.smoothed_ref[i]),
                     CsvWriter::num(dev)});
            rows.push_back({{"norm", g.norm(targets[i])}, {"sigmas", dev}});
            log << "oracle-compare: target " << i << " within " << dev << " stderr\n";
        }
        report = {{"mode", "monte_carlo"}, {"rows", rows}, {"pass", ok}};
    }
    write_json(cfg, "oracle_report.json", report);
    return ok ? 0 : 1;
}

int
run_modulus_check(const RunConfig& cfg, std::ostream& log)
{
    CoefficientField cf = cfg.make_field();
    Modulus mod = cf.mod;
    if (mod.kind == Modulus::Kind::Zero) {
        write_json(cfg, "modulus_report.json",
                   {{"pass", true}, {"note", "constant coefficients: zero modulus"}});
        log << "modulus-check: zero modulus, nothing to certify\n";
        return 0;
    }

    std::ofstream os = open_out(cfg, "modulus_table.csv");
    CsvWriter csv(os);
    csv.header({"r", "omega", "dini", "double_dini"});
    for (double r : {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.25, 0.5, 1.0})
        csv.row({CsvWriter::num(r), CsvWriter::num(mod.omega(r)), CsvWriter::num(mod.dini(r)),
                 CsvWriter::num(mod.double_dini(r))});

    QuasiMonoReport qm = mod.certify_quasi_mono(0.5);
    double C_prime = mod.fit_omega_leq_dini();
    bool ok = qm.ok && std::isfinite(C_prime);
    write_json(cfg, "modulus_report.json",
               {{"quasi_mono", {{"delta", qm.delta}, {"C", qm.C}, {"ok", qm.ok}}},
                {"omega_leq_dini_C", C_prime},
                {"dini_1", mod.dini(1.0)},
                {"double_dini_1", mod.double_dini(1.0)},
                {"pass", ok}});
    log << "modulus-check: dini(1) = " << mod.dini(1.0) << ", quasi-mono C = " << qm.C
        << (ok ? " ok" : " FAIL") << "\n";
    return ok ? 0 : 1;
}

} // namespace levi
