#include "levi/parallel.hpp"

namespace levi {

void
set_threads(int n)
{
#if defined(_OPENMP)
    if (n > 0) {
        omp_set_num_threads(n);
    }
#else
    (void)n;
#endif
}

int
max_threads()
{
    return omp_get_max_threads();
}

double
pairwise_sum(const double* v, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; i++) {
            s += v[i];
        }
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

double
pairwise_sum(const std::vector<double>& v)
{
    return pairwise_sum(v.data(), v.size());
}

} // namespace levi
