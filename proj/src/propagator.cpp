#include "qtraj/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qtraj/spectral.hpp"

namespace qtraj {

WaveField init_gaussian(const Grid& grid, const std::array<double, 2>& q0,
                        const std::array<double, 2>& p0, double sigma, double hbar, double mass) {
    if (!(sigma > 2.0 * grid.spacing(0)))
        throw std::invalid_argument("init_gaussian: sigma under-resolved by grid");
    for (int a = 0; a < grid.dim; ++a)
        if (q0[a] <= grid.qmin[a] || q0[a] >= grid.qmax[a])
            throw std::invalid_argument("init_gaussian: q0 outside grid interior");

    WaveField f = make_field(grid, hbar, mass);
    for (int i = 0; i < grid.n[0]; ++i) {
        const double x = grid.point(0, i);
        for (int j = 0; j < grid.n[1]; ++j) {
            double r2 = (x - q0[0]) * (x - q0[0]);
            double phase = p0[0] * x;
            if (grid.dim == 2) {
                const double y = grid.point(1, j);
                r2 += (y - q0[1]) * (y - q0[1]);
                phase += p0[1] * y;
            }
            f.values[grid.index(i, j)] =
                std::exp(-r2 / (4.0 * sigma * sigma)) * std::polar(1.0, phase / hbar);
        }
    }
    if (grid.boundary == Boundary::Dirichlet) {
        // tail mass outside the box, per axis (analytic complementary error function)
        double tail = 0.0;
        for (int a = 0; a < grid.dim; ++a) {
            tail += 0.5 * std::erfc((q0[a] - grid.qmin[a]) / (std::sqrt(2.0) * sigma));
            tail += 0.5 * std::erfc((grid.qmax[a] - q0[a]) / (std::sqrt(2.0) * sigma));
        }
        if (tail > 1e-8)
            std::cerr << "init_gaussian: warning, Gaussian tail mass outside box = " << tail << "\n";
    }
    normalize(f);
    return f;
}

double split_step_dt_bound(const WaveField& f, const Potential1D& potential) {
    const Grid& g = f.grid;
    double vmax = 0.0;
    for (int i = 0; i < g.n[0]; ++i) vmax = std::max(vmax, std::abs(potential.value(g.point(0, i))));
    const double kmax = std::numbers::pi / g.spacing(0);
    const double tmax = f.hbar * f.hbar * kmax * kmax / (2.0 * f.mass);
    return 0.5 * f.hbar / std::max(vmax, tmax);
}

WaveField evolve_split_step(const WaveField& f, const Potential1D& potential, double dt,
                            long n_steps, const std::optional<Absorber>& absorber) {
    const Grid& g = f.grid;
    if (g.dim != 1 || g.boundary != Boundary::Periodic)
        throw std::invalid_argument("evolve_split_step: periodic 1D grids only");
    if (!(dt > 0.0)) throw std::invalid_argument("evolve_split_step: dt must be positive");
    const double bound = split_step_dt_bound(f, potential);
    if (dt > bound)
        throw std::invalid_argument("evolve_split_step: dt " + std::to_string(dt) +
                                    " exceeds stability bound " + std::to_string(bound));

    const int n = g.n[0];
    const auto k = fft_wavenumbers(n, g.spacing(0));
    std::vector<cplx> half_v(n), kinetic(n);
    for (int j = 0; j < n; ++j) {
        const double vq = potential.value(g.point(0, j));
        half_v[j] = std::polar(1.0, -0.5 * vq * dt / f.hbar);
        kinetic[j] = std::polar(1.0, -f.hbar * k[j] * k[j] * dt / (2.0 * f.mass));
    }
    std::vector<double> damp;
    if (absorber) {
        damp.assign(n, 1.0);
        const double w = absorber->fraction * g.extent(0);
        for (int j = 0; j < n; ++j) {
            const double q = g.point(0, j);
            const double dl = q - g.qmin[0];
            const double dr = g.qmax[0] - q;
            const double d = std::min(dl, dr);
            if (d < w) {
                const double ramp = std::cos(0.5 * std::numbers::pi * d / w);
                damp[j] = std::exp(-absorber->strength * ramp * ramp * dt / f.hbar);
            }
        }
    }

    WaveField out = f;
    for (long step = 0; step < n_steps; ++step) {
        for (int j = 0; j < n; ++j) out.values[j] *= half_v[j];
        fft_forward(out.values);
        for (int j = 0; j < n; ++j) out.values[j] *= kinetic[j];
        fft_backward(out.values);
        for (int j = 0; j < n; ++j) out.values[j] *= half_v[j];
        if (absorber)
            for (int j = 0; j < n; ++j) out.values[j] *= damp[j];
        if (!std::isfinite(out.values[n / 2].real()) || !std::isfinite(std::norm(out.values[0])))
            throw std::runtime_error("evolve_split_step: NaN at step " + std::to_string(step));
    }
    out.time = f.time + dt * n_steps;
    return out;
}

double SpectralCoeffs::energy(int n, int m) const {
    const double pi = std::numbers::pi;
    return hbar * hbar * pi * pi * (static_cast<double>(n) * n + static_cast<double>(m) * m) /
           (2.0 * mass * L * L);
}

double SpectralCoeffs::norm2() const {
    double s = 0.0;
    for (const auto& v : c) s += std::norm(v);
    return s;
}

SpectralCoeffs billiard_project(const WaveField& f, int n_max, double residual_bound) {
    const Grid& g = f.grid;
    if (g.dim != 2 || g.boundary != Boundary::Dirichlet)
        throw std::invalid_argument("billiard_project: needs a 2D Dirichlet grid");
    if (std::abs(g.extent(0) - g.extent(1)) > 1e-12 * g.extent(0))
        throw std::invalid_argument("billiard_project: square box required");
    if (n_max < 8) throw std::invalid_argument("billiard_project: n_max must be >= 8");
    if (n_max >= std::min(g.n[0], g.n[1]))
        throw std::invalid_argument("billiard_project: n_max must be below grid resolution");

    SpectralCoeffs sc;
    sc.L = g.extent(0);
    sc.hbar = f.hbar;
    sc.mass = f.mass;
    sc.t0 = f.time;
    sc.n_max = n_max;
    sc.c.assign(static_cast<std::size_t>(n_max) * n_max, cplx{0.0, 0.0});

    const SineTables& t0 = sine_tables(g.n[0]);
    const SineTables& t1 = sine_tables(g.n[1]);
    // separable projection: tmp[n][j2] = sum_j1 psi(j1,j2) sin_n(j1)
    std::vector<cplx> tmp(static_cast<std::size_t>(n_max) * g.n[1]);
    for (int mode = 1; mode <= n_max; ++mode) {
        const double* s = &t0.s[static_cast<std::size_t>(mode - 1) * g.n[0]];
        for (int j2 = 0; j2 < g.n[1]; ++j2) {
            cplx acc{0.0, 0.0};
            for (int j1 = 0; j1 < g.n[0]; ++j1) acc += f.values[g.index(j1, j2)] * s[j1];
            tmp[static_cast<std::size_t>(mode - 1) * g.n[1] + j2] = acc;
        }
    }
    const double weight = (2.0 / sc.L) * g.spacing(0) * g.spacing(1);
    for (int n = 1; n <= n_max; ++n)
        for (int m = 1; m <= n_max; ++m) {
            const double* s = &t1.s[static_cast<std::size_t>(m - 1) * g.n[1]];
            cplx acc{0.0, 0.0};
            for (int j2 = 0; j2 < g.n[1]; ++j2)
                acc += tmp[static_cast<std::size_t>(n - 1) * g.n[1] + j2] * s[j2];
            sc.c[static_cast<std::size_t>(n - 1) * n_max + (m - 1)] = acc * weight;
        }

    const double in_norm2 = norm(f) * norm(f);
    sc.residual = std::max(0.0, in_norm2 - sc.norm2());
    if (sc.residual > residual_bound) {
        // crude estimate: modes needed scale with the sqrt of the mode energy cutoff
        const int suggest = static_cast<int>(n_max * std::sqrt(2.0));
        throw std::runtime_error("billiard_project: residual " + std::to_string(sc.residual) +
                                 " above bound; try n_max >= " + std::to_string(suggest));
    }
    return sc;
}

WaveField billiard_evolve(const SpectralCoeffs& coeffs, const Grid& grid, double t,
                          exec::Policy policy) {
    if (!std::isfinite(t)) throw std::invalid_argument("billiard_evolve: non-finite time");
    if (grid.dim != 2 || grid.boundary != Boundary::Dirichlet)
        throw std::invalid_argument("billiard_evolve: needs a 2D Dirichlet grid");
    const int nm = coeffs.n_max;
    std::vector<cplx> rotated(coeffs.c.size());
    for (int n = 1; n <= nm; ++n)
        for (int m = 1; m <= nm; ++m) {
            const std::size_t idx = static_cast<std::size_t>(n - 1) * nm + (m - 1);
            rotated[idx] =
                coeffs.c[idx] * std::polar(1.0, -coeffs.energy(n, m) * (t - coeffs.t0) / coeffs.hbar);
        }

    WaveField f = make_field(grid, coeffs.hbar, coeffs.mass);
    f.time = t;
    const SineTables& t0 = sine_tables(grid.n[0]);
    const SineTables& t1 = sine_tables(grid.n[1]);
    const double amp = 2.0 / coeffs.L;

    // tmp[n][j2] = sum_m rotated[n][m] sin_m(j2)
    std::vector<cplx> tmp(static_cast<std::size_t>(nm) * grid.n[1]);
    const bool par = (policy == exec::Policy::Parallel);
#pragma omp parallel for if (par) schedule(static)
    for (int n = 1; n <= nm; ++n) {
        for (int j2 = 0; j2 < grid.n[1]; ++j2) {
            cplx acc{0.0, 0.0};
            for (int m = 1; m <= nm; ++m)
                acc += rotated[static_cast<std::size_t>(n - 1) * nm + (m - 1)] *
                       t1.s[static_cast<std::size_t>(m - 1) * grid.n[1] + j2];
            tmp[static_cast<std::size_t>(n - 1) * grid.n[1] + j2] = acc;
        }
    }
#pragma omp parallel for if (par) schedule(static)
    for (int j1 = 0; j1 < grid.n[0]; ++j1) {
        for (int j2 = 0; j2 < grid.n[1]; ++j2) {
            cplx acc{0.0, 0.0};
            for (int n = 1; n <= nm; ++n)
                acc += tmp[static_cast<std::size_t>(n - 1) * grid.n[1] + j2] *
                       t0.s[static_cast<std::size_t>(n - 1) * grid.n[0] + j1];
            f.values[grid.index(j1, j2)] = amp * acc;
        }
    }
    return f;
}

WaveField billiard_mode(const Grid& grid, int n, int m, double hbar, double mass) {
    if (grid.dim != 2 || grid.boundary != Boundary::Dirichlet)
        throw std::invalid_argument("billiard_mode: needs a 2D Dirichlet grid");
    WaveField f = make_field(grid, hbar, mass);
    const double L = grid.extent(0);
    const double pi = std::numbers::pi;
    for (int i = 0; i < grid.n[0]; ++i) {
        const double sx = std::sin(n * pi * (grid.point(0, i) - grid.qmin[0]) / L);
        for (int j = 0; j < grid.n[1]; ++j) {
            const double sy = std::sin(m * pi * (grid.point(1, j) - grid.qmin[1]) / L);
            f.values[grid.index(i, j)] = (2.0 / L) * sx * sy;
        }
    }
    return f;
}

WaveField box_mode_1d(const Grid& grid, int n, double hbar, double mass) {
    if (grid.dim != 1 || grid.boundary != Boundary::Dirichlet)
        throw std::invalid_argument("box_mode_1d: needs a 1D Dirichlet grid");
    WaveField f = make_field(grid, hbar, mass);
    const double L = grid.extent(0);
    const double pi = std::numbers::pi;
    for (int i = 0; i < grid.n[0]; ++i)
        f.values[i] = std::sqrt(2.0 / L) * std::sin(n * pi * (grid.point(0, i) - grid.qmin[0]) / L);
    return f;
}

} // namespace qtraj
