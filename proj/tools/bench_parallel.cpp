/** \file bench_parallel.cpp
 *  \brief Benchmark of the OpenMP-parallel table build and kernel evaluation
 *         against the serial path (thread count forced to 1).  Both runs must
 *         produce bit-identical values — the parallel loops write per-index
 *         buffers and reductions are fixed-order — so the benchmark doubles
 *         as a determinism check.
 */

#include "levi/engine.hpp"
#include "levi/parallel.hpp"

#include <cstdio>
#include <vector>

namespace {

struct RunResult {
    double build_s = 0.0;
    double eval_s = 0.0;
    double checksum = 0.0;
};

RunResult
run_once(int threads)
{
    levi::set_threads(threads);
    levi::Group g = levi::Group::euclidean(1);
    levi::CoefficientField cf = levi::CoefficientField::sine1d(0.25);
    levi::QuadratureSpec quad;
    quad.space_nodes = 16;
    quad.time_levels = 5;
    quad.time_nodes = 6;
    quad.n_rho = 24;
    quad.n_u = 48;

    RunResult r;
    double t0 = omp_get_wtime();
    levi::ParametrixEngine eng(g, cf, {0.0}, 0.0, 0.25, quad, {});
    r.build_s = omp_get_wtime() - t0;

    t0 = omp_get_wtime();
    for (double x = -1.5; x <= 1.5; x += 0.25)
        for (double t : {0.05, 0.1, 0.2})
            r.checksum += eng.gamma({x}, t) + eng.h_residual({x}, t);
    r.eval_s = omp_get_wtime() - t0;
    return r;
}

} // namespace

int
main()
{
    std::printf("%-10s %12s %12s %22s\n", "threads", "build [s]", "eval [s]", "checksum");
    RunResult serial = run_once(1);
    std::printf("%-10d %12.3f %12.3f %22.15e\n", 1, serial.build_s, serial.eval_s,
                serial.checksum);

    levi::set_threads(0);
    int nt = levi::max_threads();
    RunResult par = run_once(0);
    std::printf("%-10d %12.3f %12.3f %22.15e\n", nt, par.build_s, par.eval_s, par.checksum);

    bool identical = serial.checksum == par.checksum;
    double speedup = (serial.build_s + serial.eval_s) / (par.build_s + par.eval_s);
    std::printf("speedup %.2fx with %d threads; results %s\n", speedup, nt,
                identical ? "bit-identical" : "DIFFER");
    return identical ? 0 : 1;
}
