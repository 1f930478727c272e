#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <complex>
#include <numbers>

#include "qtraj/propagator.hpp"
#include "qtraj/wavefield.hpp"

using namespace qtraj;
using std::numbers::pi;

namespace {

// width of a freely spreading Gaussian packet
double spread_sigma(double sigma0, double t, double hbar, double mass) {
    const double r = hbar * t / (2.0 * mass * sigma0 * sigma0);
    return sigma0 * std::sqrt(1.0 + r * r);
}

double position_variance(const WaveField& f) {
    double m2 = 0.0, m1 = 0.0, w = 0.0;
    const double dq = f.grid.spacing(0);
    for (int i = 0; i < f.grid.n[0]; ++i) {
        const double q = f.grid.point(0, i);
        const double rho = std::norm(f.values[i]) * dq;
        m1 += q * rho;
        m2 += q * q * rho;
        w += rho;
    }
    m1 /= w;
    return m2 / w - m1 * m1;
}

} // namespace

TEST_CASE("gaussian init is normalized and centered") {
    const Grid g = make_grid_1d(-4.0, 4.0, 256);
    WaveField f = init_gaussian(g, {0.5, 0.0}, {3.0, 0.0}, 0.3);
    CHECK(is_normalized(f));
    CHECK(momentum_expectation(f) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK_THROWS_AS(init_gaussian(g, {0.0, 0.0}, {0.0, 0.0}, 0.01), std::invalid_argument);
}

TEST_CASE("split-step free spreading matches the analytic width") {
    const Grid g = make_grid_1d(-8.0, 8.0, 512);
    WaveField f = init_gaussian(g, {0.0, 0.0}, {0.0, 0.0}, 0.25);
    const Potential1D v = Potential1D::constant(0.0);
    const double t = 0.2;
    const long steps = 4000;
    const WaveField ft = evolve_split_step(f, v, t / steps, steps);

    CHECK(norm(ft) == doctest::Approx(1.0).epsilon(1e-10)); // unitarity
    const double sig = std::sqrt(position_variance(ft));
    CHECK(sig == doctest::Approx(spread_sigma(0.25, t, 1.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("split-step time reversal") {
    const Grid g = make_grid_1d(-6.0, 6.0, 256);
    WaveField f = init_gaussian(g, {0.3, 0.0}, {4.0, 0.0}, 0.3);
    const Potential1D v = Potential1D::harmonic(1.0, 3.0);
    // reversal through conjugation: K U(t) K = U(-t) for a real potential
    WaveField fwd = evolve_split_step(f, v, 1e-4, 500);
    for (auto& z : fwd.values) z = std::conj(z);
    WaveField back = evolve_split_step(fwd, v, 1e-4, 500);
    for (auto& z : back.values) z = std::conj(z);
    const double fid = std::abs(overlap(f, back));
    CHECK(fid == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("split-step is second order in dt") {
    const Grid g = make_grid_1d(-6.0, 6.0, 256);
    WaveField f = init_gaussian(g, {0.4, 0.0}, {0.0, 0.0}, 0.4);
    const Potential1D v = Potential1D::harmonic(1.0, 2.0);
    const double t = 0.05;

    // reference with a very small step
    const WaveField ref = evolve_split_step(f, v, t / 16384, 16384);
    auto err = [&](long n) {
        const WaveField e = evolve_split_step(f, v, t / n, n);
        double s = 0.0;
        for (std::size_t i = 0; i < e.values.size(); ++i) s += std::norm(e.values[i] - ref.values[i]);
        return std::sqrt(s * e.grid.spacing(0));
    };
    const double e1 = err(512), e2 = err(1024);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("stability bound rejects reckless steps") {
    const Grid g = make_grid_1d(-6.0, 6.0, 256);
    WaveField f = init_gaussian(g, {0.0, 0.0}, {0.0, 0.0}, 0.4);
    const Potential1D v = Potential1D::constant(0.0);
    const double kmax = pi / g.spacing(0);
    CHECK(split_step_dt_bound(f, v) == doctest::Approx(0.5 / (0.5 * kmax * kmax)).epsilon(1e-12));
}

TEST_CASE("billiard projection of an eigenmode is a single coefficient") {
    const Grid g = make_grid_2d(0.0, 1.0, 64);
    const WaveField m32 = billiard_mode(g, 3, 2);
    CHECK(is_normalized(m32));
    const SpectralCoeffs c = billiard_project(m32, 8);
    CHECK(std::abs(c.c[(3 - 1) * 8 + (2 - 1)]) == doctest::Approx(1.0).epsilon(1e-12));
    double off = 0.0;
    for (int n = 1; n <= 8; ++n)
        for (int m = 1; m <= 8; ++m)
            if (n != 3 || m != 2) off = std::max(off, std::abs(c.c[(n - 1) * 8 + (m - 1)]));
    CHECK(off < 1e-12);
    CHECK(c.residual < 1e-12);
    CHECK(c.energy(3, 2) == doctest::Approx(pi * pi * 13.0 / 2.0).epsilon(1e-13));
}

TEST_CASE("projection residual bound is enforced with a suggestion") {
    const Grid g = make_grid_2d(0.0, 1.0, 128);
    WaveField f = init_gaussian(g, {0.4, 0.6}, {40.0, 25.0}, 0.05);
    normalize(f);
    CHECK_THROWS_AS(billiard_project(f, 8, 1e-6), std::runtime_error);
}

TEST_CASE("billiard evolution is exactly unitary and phases a mode") {
    const Grid g = make_grid_2d(0.0, 1.0, 64);
    const WaveField m11 = billiard_mode(g, 1, 1);
    SpectralCoeffs c = billiard_project(m11, 8);
    const double E = c.energy(1, 1);
    const double t = 0.7;
    const WaveField ft = billiard_evolve(c, g, t);
    CHECK(norm(ft) == doctest::Approx(1.0).epsilon(1e-12));
    const cplx phase = overlap(m11, ft);
    CHECK(std::abs(phase - std::polar(1.0, -E * t)) < 1e-10);
}

TEST_CASE("serial and parallel billiard synthesis are bit-identical") {
    const Grid g = make_grid_2d(0.0, 1.0, 96);
    WaveField f = init_gaussian(g, {0.4, 0.6}, {30.0, 20.0}, 0.07);
    normalize(f);
    const SpectralCoeffs c = billiard_project(f, 24, 1e-2);
    const WaveField a = billiard_evolve(c, g, 0.013, exec::Policy::Serial);
    const WaveField b = billiard_evolve(c, g, 0.013, exec::Policy::Parallel);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("1D box mode energy ladder") {
    const Grid g = make_grid_1d(0.0, 1.0, 128, Boundary::Dirichlet);
    for (int n = 1; n <= 3; ++n) {
        const WaveField f = box_mode_1d(g, n);
        CHECK(is_normalized(f));
        CHECK(energy_expectation(f) == doctest::Approx(pi * pi * n * n / 2.0).epsilon(1e-10));
    }
}
