#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "qtraj/chaos.hpp"

using namespace qtraj;

TEST_CASE("benettin estimator recovers a prescribed exponential rate") {
    // synthetic pair dynamics: the gap grows exactly like e^{lambda t}
    const double lambda = 1.7;
    const PairAdvance advance = [lambda](std::vector<double>& a, std::vector<double>& b, double t0,
                                         double t1) {
        const double f = std::exp(lambda * (t1 - t0));
        for (std::size_t i = 0; i < a.size(); ++i) b[i] = a[i] + (b[i] - a[i]) * f;
    };
    const LyapunovSeries s =
        finite_time_lyapunov(advance, {0.0}, {1.0}, 1e-9, 0.0, 5.0, 0.1, 1e6);
    CHECK(s.final_lambda() == doctest::Approx(lambda).epsilon(1e-10));
    // running estimate is flat, not just the endpoint
    for (double l : s.lambda) CHECK(l == doctest::Approx(lambda).epsilon(1e-9));
}

TEST_CASE("tau too long for the initial separation is rejected") {
    const PairAdvance advance = [](std::vector<double>& a, std::vector<double>& b, double t0,
                                   double t1) {
        const double f = std::exp(50.0 * (t1 - t0));
        for (std::size_t i = 0; i < a.size(); ++i) b[i] = a[i] + (b[i] - a[i]) * f;
    };
    CHECK_THROWS_AS(finite_time_lyapunov(advance, {0.0}, {1.0}, 1e-3, 0.0, 10.0, 1.0, 1.0), std::runtime_error);
}

TEST_CASE("classical billiard pairs do not separate exponentially") {
    // position-only offset in the integrable billiard: |delta| grows at most
    // linearly, so the windowed exponent collapses toward zero
    const double L = 1.0;
    const PairAdvance advance = classical_billiard_pair(1.0, L);
    const double T = 100.0 / std::hypot(1.3, 0.71); // ~100 wall crossings
    const LyapunovSeries s = finite_time_lyapunov(
        advance, {0.21, 0.68, 1.3, 0.71}, {1.0, 1.0, 0.0, 0.0}, 1e-9 * L, 0.0, T, 0.5, L);
    CHECK(std::abs(s.final_lambda()) < 1e-3);
}

TEST_CASE("bohmian packet pairs separate with a positive exponent") {
    const Grid g = make_grid_2d(0.0, 1.0, 64);
    WaveField f = init_gaussian(g, {0.4, 0.6}, {40.0, 25.0}, 0.07);
    normalize(f);
    SpectralCoeffs c = billiard_project(f, 24, 1e-2);
    BilliardFlow flow(std::move(c), g);
    const LyapunovSeries s =
        finite_time_lyapunov(bohmian_pair(flow, 2e-4), {0.4, 0.6}, {1.0, 1.0}, 1e-7, 0.0, 0.3,
                             0.02, 1.0);
    CHECK(s.final_lambda() > 0.0);
    CHECK(s.final_lambda() > 10.0 * 1e-3); // well above the classical baseline
}
