// Benchmark of the alignment kernels: serial vs OpenMP DTW fill, and the
// forward-pass scaling of the offset alignment at fixed row count.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "etvo/dtw.hpp"
#include "etvo/engine.hpp"
#include "etvo/motion.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

etvo::UniformSeries noisy_sine(std::size_t n, std::uint64_t seed) {
    etvo::MotionSpec spec;
    spec.duration_s = static_cast<double>(n) / 1000.0;
    spec.sample_rate_hz = 1000.0;
    spec.components = {{1.0, 0.7, 0.0}, {0.25, 1.9, 1.0}};
    auto clean = etvo::gen_motion(spec, seed);
    return etvo::add_awgn(clean, 40.0, seed);
}

template <typename F>
double best_of(int reps, F&& fn) {
    double best = 1e100;
    for (int i = 0; i < reps; ++i) {
        const auto start = Clock::now();
        fn();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel kernels run serially\n");
#endif

    // DTW: serial reference vs tiled wavefront kernel.
    for (std::size_t n : {2048u, 4096u, 8192u}) {
        const auto f = noisy_sine(n, 11);
        const auto g = noisy_sine(n, 12);
        double serial_distance = 0.0;
        double parallel_distance = 0.0;
        const double t_serial = best_of(3, [&] { serial_distance = etvo::dtw::align(f, g).distance; });
        const double t_parallel =
            best_of(3, [&] { parallel_distance = etvo::dtw::align_parallel(f, g).distance; });
        std::printf("dtw n=%5zu  serial %8.2f ms  wavefront %8.2f ms  speedup %.2fx  %s\n", n,
                    t_serial * 1e3, t_parallel * 1e3, t_serial / t_parallel,
                    serial_distance == parallel_distance ? "identical" : "MISMATCH");
    }

    // Offset alignment forward pass: linear scaling in the sample count.
    etvo::EtvoParams params;
    params.rows = 64;
    params.period_s = 1e-3;
    params.dt_min_s = 0.0;
    params.p_prop = 0.005;
    params.p_fixed = 0.01;
    params.p_slack = 0.005;
    double prev = 0.0;
    for (std::size_t n : {10000u, 20000u, 40000u}) {
        const auto g = noisy_sine(n, 21);
        const auto f = noisy_sine(n + static_cast<std::size_t>(params.rows) - 1, 22);
        const double t = best_of(5, [&] { (void)etvo::forward_pass(f, g, params); });
        std::printf("forward_pass n=%6zu m=%d  %8.3f ms", n, params.rows, t * 1e3);
        if (prev > 0.0) std::printf("  growth %.2fx per doubling", t / prev);
        std::printf("\n");
        prev = t;
    }
    return 0;
}
