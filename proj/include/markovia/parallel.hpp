#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace markovia {

// Thread budget: MARKOVIA_THREADS caps the OpenMP pool; unset or invalid
// values fall back to the runtime default.
inline int thread_limit() {
#ifdef _OPENMP
    int limit = omp_get_max_threads();
    if (const char* env = std::getenv("MARKOVIA_THREADS")) {
        int req = std::atoi(env);
        if (req >= 1) limit = std::min(limit, req);
    }
    return limit;
#else
    return 1;
#endif
}

// Deterministic parallel reduction: chunk boundaries depend only on n, each
// chunk is summed serially left-to-right, and the per-chunk partials are
// combined serially in chunk order.  The result is bit-identical for every
// thread count, which is what makes seeded reports byte-reproducible.
template <class F>
double chunked_sum(int64_t n, F&& term, int64_t chunk = 4096) {
    if (n <= 0) return 0.0;
    const int64_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<size_t>(nchunks), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_limit())
#endif
    for (int64_t c = 0; c < nchunks; ++c) {
        const int64_t lo = c * chunk, hi = std::min(n, lo + chunk);
        double s = 0.0;
        for (int64_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<size_t>(c)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total;
}

template <class F>
double chunked_min(int64_t n, F&& term, int64_t chunk = 4096) {
    const int64_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(static_cast<size_t>(nchunks));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_limit())
#endif
    for (int64_t c = 0; c < nchunks; ++c) {
        const int64_t lo = c * chunk, hi = std::min(n, lo + chunk);
        double m = term(lo);
        for (int64_t i = lo + 1; i < hi; ++i) m = std::min(m, term(i));
        partial[static_cast<size_t>(c)] = m;
    }
    double total = partial[0];
    for (double m : partial) total = std::min(total, m);
    return total;
}

template <class F>
void parallel_for(int64_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(thread_limit())
#endif
    for (int64_t i = 0; i < n; ++i) body(i);
}

// Serial references for the benchmark target and for cross-checking the
// chunked kernels (same chunking run on one thread must match bit-for-bit;
// the plain left-to-right sum is the naive baseline).
template <class F>
double serial_sum(int64_t n, F&& term) {
    double s = 0.0;
    for (int64_t i = 0; i < n; ++i) s += term(i);
    return s;
}

template <class F>
double serial_min(int64_t n, F&& term) {
    double m = term(0);
    for (int64_t i = 1; i < n; ++i) m = std::min(m, term(i));
    return m;
}

}  // namespace markovia
