// Benchmark: OpenMP chunked kernels against their serial references, plus one
// end-to-end exact-table build.  Prints timings and cross-checks the results;
// chunked-vs-chunked must agree bit-for-bit regardless of the thread budget.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "markovia/ising.hpp"
#include "markovia/parallel.hpp"

using namespace markovia;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <class F>
double timed(F&& f, double& out) {
    const double t0 = now_ms();
    out = f();
    return now_ms() - t0;
}

void set_threads(int n) {
#ifdef _OPENMP
    setenv("MARKOVIA_THREADS", std::to_string(n).c_str(), 1);
#else
    (void)n;
#endif
}

void row(const char* name, int64_t n, double serial_ms, double par_ms, double diff,
         bool bitwise) {
    std::printf("%-28s n=%-10lld serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n",
                name, static_cast<long long>(n), serial_ms, par_ms,
                par_ms > 0 ? serial_ms / par_ms : 0.0,
                bitwise ? "bitwise match" : ("max diff " + std::to_string(diff)).c_str());
}

}  // namespace

int main() {
    const int hw = thread_limit();
    std::printf("thread budget: %d\n\n", hw);

    // dense reduction: the axis-symbol evaluation used by the certificate grid
    {
        const int64_t n = int64_t(1) << 23;
        const double h = M_PI / static_cast<double>(n - 1);
        auto sym = [h](int64_t i) {
            const double x = h * static_cast<double>(i);
            double s = 1.0;
            for (int j = 1; j <= 6; ++j) s += 2.0 * std::exp(-double(j) * j) * std::cos(j * x);
            return s;
        };
        double a = 0, b = 0, c = 0;
        set_threads(1);
        const double t1 = timed([&] { return serial_min(n, sym); }, a);
        const double t2 = timed([&] { return chunked_min(n, sym); }, b);
        set_threads(hw);
        const double t3 = timed([&] { return chunked_min(n, sym); }, c);
        (void)t2;
        row("symbol grid minimum", n, t1, t3, std::abs(a - c), b == c);
        if (b != c) return 1;
    }
    // weighted reduction: a long Simpson-style sum
    {
        const int64_t n = (int64_t(1) << 23) + 1;
        auto f = [n](int64_t i) {
            const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
            const double x = -8.0 + 16.0 * static_cast<double>(i) / static_cast<double>(n - 1);
            return w * std::exp(-x * x / 2.0);
        };
        double a = 0, b = 0, c = 0;
        set_threads(1);
        const double t1 = timed([&] { return serial_sum(n, f); }, a);
        const double t2 = timed([&] { return chunked_sum(n, f); }, b);
        set_threads(hw);
        const double t3 = timed([&] { return chunked_sum(n, f); }, c);
        (void)t2;
        row("quadrature reduction", n, t1, t3, std::abs(a - c), b == c);
        if (b != c) return 1;
    }
    // end to end: exact table of a 20-site nearest-neighbour chain
    {
        IsingModel model = IsingModel::chain_family("geometric", 24);
        const int n = 20;
        double z1 = 0, z2 = 0;
        set_threads(1);
        const double t1 = timed([&] { return ising_exact(model, n)[0]; }, z1);
        set_threads(hw);
        const double t2 = timed([&] { return ising_exact(model, n)[0]; }, z2);
        row("exact table, 20 sites", int64_t(1) << n, t1, t2, std::abs(z1 - z2), z1 == z2);
        if (z1 != z2) return 1;
    }
    std::printf("\nall kernels agree across thread budgets\n");
    return 0;
}
