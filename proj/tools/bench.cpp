// Serial vs OpenMP timings of the data-parallel kernels.  The parallel path
// must be bit-identical to the serial reference; this target reports the
// speedup actually obtained on this machine.
#include <chrono>
#include <cstdio>
#include <functional>

#include "qtraj/bohm.hpp"
#include "qtraj/dos.hpp"
#include "qtraj/exec.hpp"
#include "qtraj/madelung.hpp"
#include "qtraj/propagator.hpp"

using namespace qtraj;
using exec::Policy;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    fn(); // warm-up (FFT plans, caches)
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", name,
                serial * 1e3, parallel * 1e3, serial / parallel);
}

} // namespace

int main() {
    std::printf("threads available: %d\n\n", exec::max_threads());

    // billiard synthesis: 48 modes on a 256^2 grid
    const Grid grid = make_grid_2d(0.0, 1.0, 256);
    WaveField packet = init_gaussian(grid, {0.37, 0.61}, {60.0, 40.0}, 0.04);
    normalize(packet);
    const SpectralCoeffs coeffs = billiard_project(packet, 48, 1e-2);
    report("billiard synthesis 256^2",
           time_of([&] { billiard_evolve(coeffs, grid, 0.01, Policy::Serial); }, 3),
           time_of([&] { billiard_evolve(coeffs, grid, 0.01, Policy::Parallel); }, 3));

    // ensemble transport: 2048 particles in the exact billiard flow
    BilliardFlow flow(coeffs, grid);
    flow.seek(0.0);
    auto q0 = sample_initial(flow.snapshot(0.0), 2048, 7);
    IntegrateOptions opt;
    opt.dt = 2e-4;
    opt.sample_stride = 1 << 30;
    report("ensemble transport 2048",
           time_of(
               [&] {
                   opt.policy = Policy::Serial;
                   integrate_ensemble(flow, q0, 0.0, 0.004, opt);
               },
               3),
           time_of(
               [&] {
                   opt.policy = Policy::Parallel;
                   integrate_ensemble(flow, q0, 0.0, 0.004, opt);
               },
               3));

    // smoothed DOS: 180^2 levels on a 4096-point energy grid
    const Spectrum spec = billiard_spectrum(1.0, 1.0, 1.0, 180);
    std::vector<double> E(4096);
    for (std::size_t i = 0; i < E.size(); ++i) E[i] = 100.0 + 0.2 * i;
    report("smoothed DOS 180^2 x 4096",
           time_of([&] { smoothed_dos(spec, 2.0, E, SmoothingKernel::Lorentzian, Policy::Serial); },
                   3),
           time_of(
               [&] { smoothed_dos(spec, 2.0, E, SmoothingKernel::Lorentzian, Policy::Parallel); },
               3));

    // microcanonical density on a 96^2 grid (every retained level contributes
    // at every grid point, so this kernel is the most expensive per element)
    const Spectrum dspec = billiard_spectrum(1.0, 1.0, 1.0, 100);
    const Grid dgrid = make_grid_2d(0.0, 1.0, 96);
    const MicrocanonicalWeights w = microcanonical_weights(dspec, 5000.0, 30.0);
    report("microcanonical density 96^2",
           time_of([&] { microcanonical_density(dspec, w, dgrid, Policy::Serial); }, 1),
           time_of([&] { microcanonical_density(dspec, w, dgrid, Policy::Parallel); }, 1));
    return 0;
}
