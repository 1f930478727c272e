#pragma once

#include <span>
#include <vector>

#include "qtraj/exec.hpp"
#include "qtraj/grid.hpp"

namespace qtraj {

// Square-billiard spectrum E_nm = hbar^2 pi^2 (n^2+m^2)/(2 m L^2),
// all (n,m) in 1..n_max, degeneracies kept as separate entries.
struct Spectrum {
    struct Level {
        double E;
        int n, m;
    };
    double L = 1.0, hbar = 1.0, mass = 1.0;
    int n_max = 0;
    std::vector<Level> levels; // sorted ascending

    // no level below this bound is missing from the truncated list
    double completeness_bound() const;
    // counting staircase N(E) over the retained levels
    double count_below(double E) const;
};

Spectrum billiard_spectrum(double L, double hbar, double mass, int n_max);

enum class SmoothingKernel { Lorentzian, Gaussian };

// Lorentzian-smoothed density of states sum_k (1/pi) eps/(eps^2+(E-E_k)^2).
// E_grid must stay below completeness_bound - 10 eps so the truncation tail
// is controlled.
std::vector<double> smoothed_dos(const Spectrum& s, double eps, std::span<const double> E_grid,
                                 SmoothingKernel kernel = SmoothingKernel::Lorentzian,
                                 exec::Policy policy = exec::Policy::Parallel);

// Leading Weyl (mean) level density m A / (2 pi hbar^2), A = L^2.
double weyl_density(double L, double hbar, double mass);

// Fourier transform of the oscillatory level density over wavenumber k;
// peaks sit at the periodic-orbit family lengths 2L sqrt(a^2+b^2).
struct LengthSpectrumResult {
    std::vector<double> ell;
    std::vector<double> magnitude;
    std::vector<double> peaks; // local maxima positions, descending magnitude
    double bin_width = 0.0;    // 2 pi / (k_max - k_min)
};

LengthSpectrumResult length_spectrum(const Spectrum& s, double eps, double E_lo, double E_hi,
                                     double ell_max, int n_k = 4096, int n_ell = 2048);

// Lorentzian eigenstate weights of the coarse-grained microcanonical ensemble.
struct MicrocanonicalWeights {
    double E = 0.0, eps = 0.0;
    std::vector<double> w; // aligned with Spectrum::levels
    double sum = 0.0;      // equals the smoothed DOS at E by construction
};

MicrocanonicalWeights microcanonical_weights(const Spectrum& s, double E, double eps);

// Position-space density sum_k w_k |phi_k(q)|^2 / sum w_k on a grid.
std::vector<double> microcanonical_density(const Spectrum& s, const MicrocanonicalWeights& w,
                                           const Grid& grid,
                                           exec::Policy policy = exec::Policy::Parallel);

} // namespace qtraj
