// Timing harness for the data-parallel kernels: each one has a serial
// reference and an OpenMP variant; this prints both and the speedup.

#include <chrono>
#include <cstdio>
#include <numbers>

#include <omp.h>

#include "lsr/experiments.hpp"
#include "lsr/spectrum.hpp"
#include "lsr/words.hpp"

using namespace lsr;

namespace {

template <typename F>
double time_one(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-34s serial %8.3f s   omp %8.3f s   speedup %.2fx\n", name, serial, parallel,
                serial / parallel);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());

    {
        LsrOptions ser, par;
        ser.parallel = false;
        par.parallel = true;
        const double theta = 1.4148962710927617;  // nothing special
        double vs[4], vp[4];
        const double ts = time_one([&] {
            for (int rep = 0; rep < 4; ++rep)
                vs[rep] = lsr_estimate(1.1, -0.3, theta + rep * 1e-3, 2000000, ser).value;
        });
        const double tp = time_one([&] {
            for (int rep = 0; rep < 4; ++rep)
                vp[rep] = lsr_estimate(1.1, -0.3, theta + rep * 1e-3, 2000000, par).value;
        });
        report("lsr scan (N=2e6, 4 angles)", ts, tp);
        for (int rep = 0; rep < 4; ++rep)
            if (vs[rep] != vp[rep]) std::printf("  kernel mismatch at %d!\n", rep);
    }

    {
        const Matrix2 h{1.2, 0.4, 0, 0};
        const Matrix2 r = rotation(0.83);
        double a = 0, b = 0;
        const double ts =
            time_one([&] { a = enumerate_min_growth(h, r, 19, {false}).rows.back().min_rho; });
        const double tp =
            time_one([&] { b = enumerate_min_growth(h, r, 19, {true}).rows.back().min_rho; });
        report("word enumeration (L=19)", ts, tp);
        if (a != b) std::printf("  kernel mismatch! %.17g vs %.17g\n", a, b);
    }

    {
        SampleOptions ser, par;
        ser.parallel = false;
        par.parallel = true;
        double a = 0, b = 0;
        const double ts = time_one(
            [&] { a = sample_measure(1, 0, 4000, 2000, 42, ser).attained_positive_fraction; });
        const double tp = time_one(
            [&] { b = sample_measure(1, 0, 4000, 2000, 42, par).attained_positive_fraction; });
        report("monte-carlo sampling (4000x2000)", ts, tp);
        if (a != b) std::printf("  kernel mismatch! %.17g vs %.17g\n", a, b);
    }

    return 0;
}
