#include "qtraj/wavefield.hpp"

#include <cmath>
#include <stdexcept>

#include "qtraj/spectral.hpp"

namespace qtraj {

WaveField make_field(const Grid& grid, double hbar, double mass) {
    if (!(hbar > 0.0) || !(mass > 0.0)) throw std::invalid_argument("hbar and mass must be positive");
    WaveField f;
    f.grid = grid;
    f.values.assign(grid.size(), cplx{0.0, 0.0});
    f.hbar = hbar;
    f.mass = mass;
    return f;
}

namespace {
double cell_volume(const Grid& g) {
    double dv = g.spacing(0);
    if (g.dim == 2) dv *= g.spacing(1);
    return dv;
}
} // namespace

double norm(const WaveField& f) {
    double s = 0.0;
    for (const auto& v : f.values) {
        const double a = std::norm(v);
        if (!std::isfinite(a)) throw std::runtime_error("norm: non-finite field value");
        s += a;
    }
    return std::sqrt(s * cell_volume(f.grid));
}

void normalize(WaveField& f) {
    const double n = norm(f);
    if (n == 0.0) throw std::runtime_error("normalize: zero field");
    const double inv = 1.0 / n;
    for (auto& v : f.values) v *= inv;
}

bool is_normalized(const WaveField& f, double tol) { return std::abs(norm(f) - 1.0) < tol; }

cplx overlap(const WaveField& a, const WaveField& b) {
    if (a.values.size() != b.values.size()) throw std::invalid_argument("overlap: size mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
    return s * cell_volume(a.grid);
}

double energy_expectation(const WaveField& f, const Potential1D* potential) {
    if (!is_normalized(f, 1e-8)) throw std::runtime_error("energy_expectation: field not normalized");
    const auto lap = laplacian(f);
    const double dv = cell_volume(f.grid);
    const double kfac = -f.hbar * f.hbar / (2.0 * f.mass);
    cplx e{0.0, 0.0};
    for (std::size_t i = 0; i < f.values.size(); ++i) e += std::conj(f.values[i]) * (kfac * lap[i]);
    double energy = e.real() * dv;
    if (std::abs(e.imag() * dv) > 1e-10 * std::max(1.0, std::abs(energy)))
        throw std::runtime_error("energy_expectation: non-real expectation (corrupt field?)");
    if (potential) {
        if (f.grid.dim == 2 && potential->kind != Potential1D::Kind::Constant)
            throw std::invalid_argument("energy_expectation: 2D supports constant potential only");
        double ve = 0.0;
        for (int i = 0; i < f.grid.n[0]; ++i) {
            const double vq = potential->value(f.grid.point(0, i));
            if (f.grid.dim == 1) {
                ve += vq * std::norm(f.values[i]);
            } else {
                for (int j = 0; j < f.grid.n[1]; ++j) ve += vq * std::norm(f.values[f.grid.index(i, j)]);
            }
        }
        energy += ve * dv;
    }
    return energy;
}

double momentum_expectation(const WaveField& f, int axis) {
    const auto grad = gradient(f, axis);
    const double dv = cell_volume(f.grid);
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < f.values.size(); ++i) s += std::conj(f.values[i]) * grad[i];
    // <p> = -i hbar <psi|d psi>
    return (cplx{0.0, -f.hbar} * s * dv).real();
}

} // namespace qtraj
