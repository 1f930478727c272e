#include "qtraj/dos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtraj {

namespace {
constexpr double kPi = std::numbers::pi;
}

double Spectrum::completeness_bound() const {
    return hbar * hbar * kPi * kPi * (static_cast<double>(n_max) * n_max + 1.0) /
           (2.0 * mass * L * L);
}

double Spectrum::count_below(double E) const {
    auto it = std::upper_bound(levels.begin(), levels.end(), E,
                               [](double e, const Level& l) { return e < l.E; });
    return static_cast<double>(it - levels.begin());
}

Spectrum billiard_spectrum(double L, double hbar, double mass, int n_max) {
    if (n_max < 8) throw std::invalid_argument("billiard_spectrum: n_max must be >= 8");
    Spectrum s;
    s.L = L;
    s.hbar = hbar;
    s.mass = mass;
    s.n_max = n_max;
    s.levels.reserve(static_cast<std::size_t>(n_max) * n_max);
    const double fac = hbar * hbar * kPi * kPi / (2.0 * mass * L * L);
    for (int n = 1; n <= n_max; ++n)
        for (int m = 1; m <= n_max; ++m)
            s.levels.push_back({fac * (static_cast<double>(n) * n + static_cast<double>(m) * m),
                                n, m});
    std::sort(s.levels.begin(), s.levels.end(), [](const Spectrum::Level& a,
                                                   const Spectrum::Level& b) {
        if (a.E != b.E) return a.E < b.E;
        if (a.n != b.n) return a.n < b.n;
        return a.m < b.m;
    });
    return s;
}

std::vector<double> smoothed_dos(const Spectrum& s, double eps, std::span<const double> E_grid,
                                 SmoothingKernel kernel, exec::Policy policy) {
    if (!(eps > 0.0)) throw std::invalid_argument("smoothed_dos: eps must be positive");
    const double bound = s.completeness_bound() - 10.0 * eps;
    for (double e : E_grid)
        if (e > bound)
            throw std::invalid_argument("smoothed_dos: E grid too close to the spectrum "
                                        "completeness bound (raise n_max)");
    std::vector<double> out(E_grid.size(), 0.0);
    const bool par = (policy == exec::Policy::Parallel);
    const long n = static_cast<long>(E_grid.size());
#pragma omp parallel for if (par) schedule(static)
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        if (kernel == SmoothingKernel::Lorentzian) {
            for (const auto& l : s.levels) {
                const double d = E_grid[i] - l.E;
                acc += eps / (kPi * (eps * eps + d * d));
            }
        } else {
            const double inv = 1.0 / (eps * std::sqrt(2.0 * kPi));
            for (const auto& l : s.levels) {
                const double d = (E_grid[i] - l.E) / eps;
                acc += inv * std::exp(-0.5 * d * d);
            }
        }
        out[i] = acc;
    }
    return out;
}

double weyl_density(double L, double hbar, double mass) {
    return mass * L * L / (2.0 * kPi * hbar * hbar);
}

LengthSpectrumResult length_spectrum(const Spectrum& s, double eps, double E_lo, double E_hi,
                                     double ell_max, int n_k, int n_ell) {
    if (!(E_hi > E_lo) || !(ell_max > 0.0)) throw std::invalid_argument("length_spectrum: bad range");
    const double k_lo = std::sqrt(2.0 * s.mass * E_lo) / s.hbar;
    const double k_hi = std::sqrt(2.0 * s.mass * E_hi) / s.hbar;
    const double bin = 2.0 * kPi / (k_hi - k_lo);
    const double shortest = 2.0 * s.L;
    if (k_hi - k_lo < 2.0 * kPi / shortest)
        throw std::invalid_argument("length_spectrum: insufficient resolution "
                                    "(k window shorter than 2 pi / shortest orbit length)");

    // oscillatory density in k: d(k) = rho_eps(E(k)) dE/dk minus the smooth
    // Weyl part A k/(2 pi) - P/(4 pi) (area and perimeter terms)
    std::vector<double> kg(n_k), Eg(n_k);
    for (int i = 0; i < n_k; ++i) {
        kg[i] = k_lo + (k_hi - k_lo) * i / (n_k - 1);
        Eg[i] = s.hbar * s.hbar * kg[i] * kg[i] / (2.0 * s.mass);
    }
    const auto dos = smoothed_dos(s, eps, Eg);
    std::vector<double> osc(n_k);
    const double A = s.L * s.L, P = 4.0 * s.L;
    for (int i = 0; i < n_k; ++i) {
        const double dEdk = s.hbar * s.hbar * kg[i] / s.mass;
        osc[i] = dos[i] * dEdk - (A * kg[i] / (2.0 * kPi) - P / (4.0 * kPi));
    }

    LengthSpectrumResult r;
    r.bin_width = bin;
    r.ell.resize(n_ell);
    r.magnitude.resize(n_ell);
    const double dk = (k_hi - k_lo) / (n_k - 1);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n_ell; ++j) {
        const double ell = ell_max * (j + 1) / n_ell;
        double re = 0.0, im = 0.0;
        for (int i = 0; i < n_k; ++i) {
            // Hann window against spectral leakage
            const double w = 0.5 - 0.5 * std::cos(2.0 * kPi * i / (n_k - 1));
            re += osc[i] * w * std::cos(kg[i] * ell);
            im -= osc[i] * w * std::sin(kg[i] * ell);
        }
        r.ell[j] = ell;
        r.magnitude[j] = std::hypot(re, im) * dk;
    }
    // local maxima, reported in order of magnitude
    std::vector<std::pair<double, double>> peaks; // (magnitude, ell)
    for (int j = 1; j + 1 < n_ell; ++j)
        if (r.magnitude[j] > r.magnitude[j - 1] && r.magnitude[j] >= r.magnitude[j + 1])
            peaks.emplace_back(r.magnitude[j], r.ell[j]);
    std::sort(peaks.rbegin(), peaks.rend());
    for (const auto& p : peaks) r.peaks.push_back(p.second);
    return r;
}

MicrocanonicalWeights microcanonical_weights(const Spectrum& s, double E, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("microcanonical_weights: eps must be positive");
    MicrocanonicalWeights w;
    w.E = E;
    w.eps = eps;
    w.w.resize(s.levels.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
        const double d = E - s.levels[i].E;
        w.w[i] = eps / (kPi * (eps * eps + d * d));
        sum += w.w[i];
    }
    if (sum < 1e-300) throw std::runtime_error("microcanonical_weights: empty window");
    w.sum = sum;
    return w;
}

std::vector<double> microcanonical_density(const Spectrum& s, const MicrocanonicalWeights& w,
                                           const Grid& grid, exec::Policy policy) {
    if (grid.dim != 2) throw std::invalid_argument("microcanonical_density: 2D grid required");
    std::vector<double> out(grid.size(), 0.0);
    const double L = s.L;
    const bool par = (policy == exec::Policy::Parallel);
    // negligible weights skipped; cutoff far below double precision of the sum
    const double cut = w.sum * 1e-14;
#pragma omp parallel for if (par) schedule(static)
    for (int i = 0; i < grid.n[0]; ++i) {
        const double x = grid.point(0, i) - grid.qmin[0];
        for (int j = 0; j < grid.n[1]; ++j) {
            const double y = grid.point(1, j) - grid.qmin[1];
            double acc = 0.0;
            for (std::size_t k = 0; k < s.levels.size(); ++k) {
                if (w.w[k] < cut) continue;
                const auto& l = s.levels[k];
                const double sx = std::sin(l.n * kPi * x / L);
                const double sy = std::sin(l.m * kPi * y / L);
                acc += w.w[k] * (4.0 / (L * L)) * sx * sx * sy * sy;
            }
            out[grid.index(i, j)] = acc / w.sum;
        }
    }
    return out;
}

} // namespace qtraj
