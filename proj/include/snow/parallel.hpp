#ifndef SNOW_PARALLEL_HPP
#define SNOW_PARALLEL_HPP

#include <cstdint>
#include <vector>

#ifdef SNOW_HAVE_OPENMP
#include <omp.h>
#endif

// Execution policy for the data-parallel kernels.  Every kernel keeps a plain
// serial loop as the reference path; the OpenMP path must produce identical
// results (sums are combined in thread-index order so file outputs stay
// byte-identical across runs).

namespace snow {

enum class ExecPolicy { Serial, OpenMP };

inline int thread_count(ExecPolicy policy) {
#ifdef SNOW_HAVE_OPENMP
    return policy == ExecPolicy::OpenMP ? omp_get_max_threads() : 1;
#else
    (void)policy;
    return 1;
#endif
}

// Deterministic parallel sum: per-thread partials over static chunks,
// combined in thread order.
template <class F>
double parallel_sum(std::int64_t n, ExecPolicy policy, F&& term) {
    if (n <= 0) return 0.0;
    const int nt = thread_count(policy);
    if (nt <= 1) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < n; ++i) acc += term(i);
        return acc;
    }
#ifdef SNOW_HAVE_OPENMP
    std::vector<double> partial(static_cast<std::size_t>(nt), 0.0);
#pragma omp parallel num_threads(nt)
    {
        const int t = omp_get_thread_num();
        double acc = 0.0;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) acc += term(i);
        partial[static_cast<std::size_t>(t)] = acc;
    }
    double acc = 0.0;
    for (double p : partial) acc += p;
    return acc;
#else
    double acc = 0.0;
    for (std::int64_t i = 0; i < n; ++i) acc += term(i);
    return acc;
#endif
}

template <class F>
double parallel_max(std::int64_t n, ExecPolicy policy, F&& term) {
    double best = -1.0 / 0.0;
    if (n <= 0) return best;
    const int nt = thread_count(policy);
    if (nt <= 1) {
        for (std::int64_t i = 0; i < n; ++i) {
            double v = term(i);
            if (v > best) best = v;
        }
        return best;
    }
#ifdef SNOW_HAVE_OPENMP
#pragma omp parallel for schedule(static) reduction(max : best) num_threads(nt)
    for (std::int64_t i = 0; i < n; ++i) {
        double v = term(i);
        if (v > best) best = v;
    }
    return best;
#else
    for (std::int64_t i = 0; i < n; ++i) {
        double v = term(i);
        if (v > best) best = v;
    }
    return best;
#endif
}

template <class F>
void parallel_for(std::int64_t n, ExecPolicy policy, F&& body) {
    const int nt = thread_count(policy);
    if (nt <= 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
#ifdef SNOW_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
    for (std::int64_t i = 0; i < n; ++i) body(i);
#else
    for (std::int64_t i = 0; i < n; ++i) body(i);
#endif
}

}  // namespace snow

#endif
