#pragma once

#include <optional>
#include <vector>

#include "qtraj/exec.hpp"
#include "qtraj/wavefield.hpp"

namespace qtraj {

// Normalized Gaussian packet exp(-|q-q0|^2/4 sigma^2 + i p0.q/hbar).
// On Dirichlet grids the tail mass outside the box must be negligible;
// callers then project with billiard_project to enforce the walls exactly.
WaveField init_gaussian(const Grid& grid, const std::array<double, 2>& q0,
                        const std::array<double, 2>& p0, double sigma,
                        double hbar = 1.0, double mass = 1.0);

// cos^2-ramp imaginary absorber over the outer fraction of a periodic domain.
struct Absorber {
    double fraction = 0.1;
    double strength = 1.0; // peak damping rate (energy units)
};

// Stability bound of the Strang-split stepper: per-step phase < 0.5 rad.
double split_step_dt_bound(const WaveField& f, const Potential1D& potential);

// Second-order Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2),
// kinetic factor applied in FFT space.  Periodic 1D grids only.
WaveField evolve_split_step(const WaveField& f, const Potential1D& potential, double dt,
                            long n_steps, const std::optional<Absorber>& absorber = std::nullopt);

// Expansion of a 2D hard-wall square billiard state over
// phi_nm = (2/L) sin(n pi q1/L) sin(m pi q2/L), 1 <= n,m <= n_max.
struct SpectralCoeffs {
    double L = 1.0;
    double hbar = 1.0;
    double mass = 1.0;
    double t0 = 0.0;
    int n_max = 0;
    std::vector<cplx> c; // c[(n-1)*n_max + (m-1)]
    double residual = 0.0; // norm^2 lost by the projection

    double energy(int n, int m) const;
    double norm2() const;
};

SpectralCoeffs billiard_project(const WaveField& f, int n_max, double residual_bound = 1e-6);

// Exact unitary synthesis psi(q,t) = sum c_nm exp(-i E_nm (t-t0)/hbar) phi_nm(q).
WaveField billiard_evolve(const SpectralCoeffs& coeffs, const Grid& grid, double t,
                          exec::Policy policy = exec::Policy::Parallel);

// Single eigenmode phi_nm sampled on a grid (already normalized).
WaveField billiard_mode(const Grid& grid, int n, int m, double hbar = 1.0, double mass = 1.0);

// 1D particle-in-a-box eigenstate sqrt(2/L) sin(n pi q/L) on a Dirichlet grid.
WaveField box_mode_1d(const Grid& grid, int n, double hbar = 1.0, double mass = 1.0);

} // namespace qtraj
