#pragma once

#include <complex>
#include <vector>

#include "qtraj/grid.hpp"
#include "qtraj/potential.hpp"

namespace qtraj {

using cplx = std::complex<double>;

// Complex amplitude on a uniform grid.  Values are row-major
// (index = i * n[1] + j); storage is contiguous interleaved (re, im),
// which is also the on-disk layout of the binary dump.
struct WaveField {
    Grid grid;
    std::vector<cplx> values;
    double hbar = 1.0;
    double mass = 1.0;
    double time = 0.0;
};

WaveField make_field(const Grid& grid, double hbar = 1.0, double mass = 1.0);

double norm(const WaveField& f);
void normalize(WaveField& f);
bool is_normalized(const WaveField& f, double tol = 1e-8);

cplx overlap(const WaveField& a, const WaveField& b); // <a|b> with the grid measure

// <psi|H|psi> with H = -(hbar^2/2m) laplacian + V, derivatives spectral.
// potential may be null (V = 0).  For 2D Dirichlet grids V must be constant.
double energy_expectation(const WaveField& f, const Potential1D* potential = nullptr);

double momentum_expectation(const WaveField& f, int axis = 0); // <p_axis>, periodic grids

} // namespace qtraj
