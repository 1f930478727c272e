#include "qtraj/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace qtraj {

namespace {

std::mutex fftw_mutex; // FFTW planning is not thread-safe

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

// In-place plans per size, created once with FFTW_ESTIMATE (deterministic).
fftw_plan get_plan(int n, int sign) {
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(fftw_mutex);
    auto& p = cache[n];
    fftw_plan& slot = (sign == FFTW_FORWARD) ? p.fwd : p.bwd;
    if (!slot) {
        std::vector<cplx> tmp(n);
        auto* ptr = reinterpret_cast<fftw_complex*>(tmp.data());
        slot = fftw_plan_dft_1d(n, ptr, ptr, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    return slot;
}

void run_fft(std::vector<cplx>& data, int sign) {
    fftw_plan plan = get_plan(static_cast<int>(data.size()), sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, ptr, ptr);
}

} // namespace

void fft_forward(std::vector<cplx>& data) { run_fft(data, FFTW_FORWARD); }

void fft_backward(std::vector<cplx>& data) {
    run_fft(data, FFTW_BACKWARD);
    const double inv = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= inv;
}

std::vector<double> fft_wavenumbers(int n, double dq) {
    std::vector<double> k(n);
    const double dk = 2.0 * std::numbers::pi / (n * dq);
    for (int j = 0; j < n; ++j) k[j] = dk * (j <= n / 2 ? j : j - n);
    return k;
}

const SineTables& sine_tables(int n) {
    static std::map<int, SineTables> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        SineTables t;
        t.n = n;
        t.s.resize(static_cast<std::size_t>(n - 1) * n);
        t.c.resize(static_cast<std::size_t>(n - 1) * n);
        for (int mode = 1; mode < n; ++mode)
            for (int j = 0; j < n; ++j) {
                const double arg = mode * std::numbers::pi * (j + 0.5) / n;
                t.s[static_cast<std::size_t>(mode - 1) * n + j] = std::sin(arg);
                t.c[static_cast<std::size_t>(mode - 1) * n + j] = std::cos(arg);
            }
        it = cache.emplace(n, std::move(t)).first;
    }
    return it->second;
}

namespace {

// Apply a Dirichlet spectral operation along `axis` of a (possibly 2D) field:
// analysis into sine coefficients, then synthesis against `basis` (sine or
// cosine tables) with per-mode multiplier mult(mode).
template <typename Mult>
std::vector<cplx> dirichlet_axis_op(const WaveField& f, int axis, bool cosine_synth, Mult mult) {
    const Grid& g = f.grid;
    const int n = g.n[axis];
    const SineTables& t = sine_tables(n);
    const double L = g.extent(axis);
    std::vector<cplx> out(f.values.size(), cplx{0.0, 0.0});

    const int n_lines = (g.dim == 2) ? g.n[1 - axis] : 1;
    const std::size_t stride = (axis == 0) ? static_cast<std::size_t>(g.n[1]) : 1;
    const std::size_t line_stride = (axis == 0) ? 1 : static_cast<std::size_t>(g.n[1]);

    std::vector<cplx> coeff(n - 1);
    for (int line = 0; line < n_lines; ++line) {
        const std::size_t base = line * line_stride;
        for (int mode = 1; mode < n; ++mode) {
            const double* sr = &t.s[static_cast<std::size_t>(mode - 1) * n];
            cplx acc{0.0, 0.0};
            for (int j = 0; j < n; ++j) acc += f.values[base + j * stride] * sr[j];
            coeff[mode - 1] = acc * (2.0 / n) * mult(mode, L);
        }
        const std::vector<double>& basis = cosine_synth ? t.c : t.s;
        for (int j = 0; j < n; ++j) {
            cplx acc{0.0, 0.0};
            for (int mode = 1; mode < n; ++mode)
                acc += coeff[mode - 1] * basis[static_cast<std::size_t>(mode - 1) * n + j];
            out[base + j * stride] = acc;
        }
    }
    return out;
}

} // namespace

std::vector<cplx> gradient(const WaveField& f, int axis) {
    const Grid& g = f.grid;
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("gradient: bad axis");
    if (g.boundary == Boundary::Periodic) {
        if (g.dim != 1) throw std::invalid_argument("periodic gradient implemented for 1D only");
        std::vector<cplx> data = f.values;
        fft_forward(data);
        const auto k = fft_wavenumbers(g.n[0], g.spacing(0));
        for (int j = 0; j < g.n[0]; ++j) data[j] *= cplx{0.0, k[j]};
        fft_backward(data);
        return data;
    }
    const double pi = std::numbers::pi;
    return dirichlet_axis_op(f, axis, /*cosine_synth=*/true,
                             [pi](int mode, double L) { return mode * pi / L; });
}

std::vector<cplx> laplacian(const WaveField& f) {
    const Grid& g = f.grid;
    if (g.boundary == Boundary::Periodic) {
        if (g.dim != 1) throw std::invalid_argument("periodic laplacian implemented for 1D only");
        std::vector<cplx> data = f.values;
        fft_forward(data);
        const auto k = fft_wavenumbers(g.n[0], g.spacing(0));
        for (int j = 0; j < g.n[0]; ++j) data[j] *= -k[j] * k[j];
        fft_backward(data);
        return data;
    }
    const double pi = std::numbers::pi;
    std::vector<cplx> out(f.values.size(), cplx{0.0, 0.0});
    for (int axis = 0; axis < g.dim; ++axis) {
        auto part = dirichlet_axis_op(f, axis, /*cosine_synth=*/false, [pi](int mode, double L) {
            const double kk = mode * pi / L;
            return -kk * kk;
        });
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
    }
    return out;
}

} // namespace qtraj
