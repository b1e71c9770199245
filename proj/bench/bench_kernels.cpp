// Serial vs OpenMP grid kernels on the desk grid (L=16, dr=2e-3) and finer.
#include "ptnls/kernels.hpp"
#include "ptnls/model.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <vector>

using namespace ptnls;

namespace {

template <class F>
double time_ms(F&& f, int reps) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

volatile double sink = 0;

} // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%10s %-14s %12s %12s %8s\n", "nodes", "kernel", "serial[ms]", "omp[ms]", "speedup");
    for (int n : {7999, 31999, 127999}) {
        const double dr = 16.0 / (n + 1);
        std::vector<cplx> p(n), q(n), out(n);
        std::vector<double> pot(n);
        for (int j = 0; j < n; ++j) {
            const double r = (j + 1) * dr;
            p[j] = r * gaussian_profile(4.5, 1.0, 3, r) * cplx(1, 0.1);
            q[j] = r * gaussian_profile(4.0, 0.5, 3, r) * cplx(0.3, 1);
        }
        const kernels::HalfStepCoeffs c{1e-4, dr, 0.5, 1.0};
        const int reps = n < 50000 ? 400 : 100;

        auto report = [&](const char* name, double s, double o) {
            std::printf("%10d %-14s %12.4f %12.4f %8.2f\n", n, name, s, o, s / o);
        };
        report("grid_sums", time_ms([&] { sink = kernels::serial::grid_sums(p, q, dr).normU; }, reps),
               time_ms([&] { sink = kernels::omp::grid_sums(p, q, dr).normU; }, reps));
        report("explicit_half",
               time_ms([&] { kernels::serial::explicit_half(p, q, pot, c, out); }, reps),
               time_ms([&] { kernels::omp::explicit_half(p, q, pot, c, out); }, reps));
        report("potential",
               time_ms([&] { kernels::serial::potential(p, q, 1.0, 1.0, dr, pot); }, reps),
               time_ms([&] { kernels::omp::potential(p, q, 1.0, 1.0, dr, pot); }, reps));
        report("max_abs_over_r",
               time_ms([&] { sink = kernels::serial::max_abs_over_r(p, dr); }, reps),
               time_ms([&] { sink = kernels::omp::max_abs_over_r(p, dr); }, reps));
    }
    return 0;
}
