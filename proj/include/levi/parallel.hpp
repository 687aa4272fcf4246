#pragma once

/** \file parallel.hpp
 *  \brief OpenMP compatibility shim and deterministic parallel helpers.
 *
 *  All parallel loops write per-index results into pre-sized buffers and
 *  reductions are performed serially in a fixed pairwise order, so results
 *  are bit-identical regardless of the number of threads.
 */

#if defined(_OPENMP)
#include <omp.h>
#else
#include <chrono>

inline int
omp_get_max_threads()
{
    return 1;
}

inline int
omp_get_thread_num()
{
    return 0;
}

inline int
omp_get_num_threads()
{
    return 1;
}

inline void
omp_set_num_threads(int)
{
}

inline double
omp_get_wtime()
{
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}
#endif

#include <cstddef>
#include <vector>

namespace levi {

/// Set the preferred thread count for subsequent parallel loops (0 = default).
void set_threads(int n);

/// Currently configured maximum thread count.
int max_threads();

/// Apply body(i) for i in [0, n); iterations must be independent.
template <class F>
void
parallel_for(std::size_t n, F&& body)
{
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); i++) {
        body(static_cast<std::size_t>(i));
    }
#else
    for (std::size_t i = 0; i < n; i++) {
        body(i);
    }
#endif
}

/// Fixed-order pairwise (tree) summation; independent of thread count.
double pairwise_sum(const double* v, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

/// Evaluate term(i) for i in [0, n) in parallel, then sum deterministically.
template <class F>
double
parallel_sum(std::size_t n, F&& term)
{
    std::vector<double> buf(n);
    parallel_for(n, [&](std::size_t i) { buf[i] = term(i); });
    return pairwise_sum(buf);
}

} // namespace levi
