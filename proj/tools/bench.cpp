// Benchmark of the data-parallel kernels, serial reference vs OpenMP.
// Reports per-kernel step throughput and two end-to-end runs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gstein/gheat.hpp"
#include "gstein/oracle.hpp"
#include "gstein/realize.hpp"

using namespace gstein;
using kernels::Exec;

namespace {

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <typename F>
double time_of(F&& body, int reps) {
    const double t0 = now_s();
    for (int r = 0; r < reps; ++r) body();
    return (now_s() - t0) / reps;
}

void row(const char* name, double serial_s, double omp_s) {
    std::printf("%-26s %12.3f ms %12.3f ms %8.2fx\n", name, serial_s * 1e3, omp_s * 1e3,
                serial_s / omp_s);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without openmp; both columns run serially\n");
#endif
    std::printf("%-26s %15s %15s %9s\n", "kernel", "serial", "openmp", "speedup");

    const int n = 8001;
    const int steps = 2000;
    std::vector<double> u(n), v(n), w(n, 0.0), w2(n);
    for (int i = 0; i < n; ++i) u[i] = std::cos(0.01 * (i - n / 2));
    w[n / 2] = 1.0;
    std::vector<std::uint64_t> bits((n + 63) / 64 * steps, 0);
    const double lam_lo = 0.1, lam_hi = 0.45;

    auto heat = [&](Exec e) {
        for (int s = 0; s < steps; ++s) {
            kernels::heat_step(u.data(), v.data(), n, lam_lo, lam_hi, e);
            u.swap(v);
        }
    };
    row("heat_step", time_of([&] { heat(Exec::serial); }, 3),
        time_of([&] { heat(Exec::openmp); }, 3));

    auto pol = [&](Exec e) {
        const int wpr = (n + 63) / 64;
        for (int s = 0; s < steps; ++s) {
            kernels::heat_step_policy(u.data(), v.data(), bits.data() + std::size_t(s) * wpr,
                                      1e-12, n, lam_lo, lam_hi, e);
            u.swap(v);
        }
    };
    row("heat_step_policy", time_of([&] { pol(Exec::serial); }, 3),
        time_of([&] { pol(Exec::openmp); }, 3));

    auto adj = [&](Exec e) {
        const int wpr = (n + 63) / 64;
        for (int s = 0; s < steps; ++s) {
            kernels::adjoint_step(w.data(), w2.data(), bits.data() + std::size_t(s) * wpr, n,
                                  lam_lo, lam_hi, e);
            w.swap(w2);
        }
    };
    row("adjoint_step", time_of([&] { adj(Exec::serial); }, 3),
        time_of([&] { adj(Exec::openmp); }, 3));

    auto lat = [&](Exec e) {
        for (int s = 0; s < steps; ++s) {
            kernels::lattice_step(u.data(), v.data(), n, 4, 0.0, 8, 0.0, e);
            u.swap(v);
        }
    };
    row("lattice_step", time_of([&] { lat(Exec::serial); }, 3),
        time_of([&] { lat(Exec::openmp); }, 3));

    // end to end: full realization on the default grid, and one MC run
    const GParams p(1.0, 2.0);
    const TestFunction phi = make_phi_beta(p);
    auto end_to_end = [&](Exec e) {
        SolveConfig cfg = SolveConfig::defaults(p);
        cfg.exec = e;
        (void)realize(phi, p, cfg);
    };
    row("realize (dx=0.01)", time_of([&] { end_to_end(Exec::serial); }, 1),
        time_of([&] { end_to_end(Exec::openmp); }, 1));

    SolveConfig cfg = SolveConfig::defaults(p, 0.02);
    const ScalarField field = solve_g_heat(phi, p, cfg);
    const VolatilityPolicy policy = optimal_policy(field, p);
    auto mc = [&](Exec e) { (void)mc_forward_measure(policy, 1.0, 200000, 42, 0, e); };
    row("mc 2e5 paths", time_of([&] { mc(Exec::serial); }, 1),
        time_of([&] { mc(Exec::openmp); }, 1));

    return 0;
}
