#include "qtraj/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "qtraj/bohm.hpp"
#include "qtraj/chaos.hpp"
#include "qtraj/classical.hpp"
#include "qtraj/dos.hpp"
#include "qtraj/io.hpp"
#include "qtraj/madelung.hpp"
#include "qtraj/propagator.hpp"
#include "qtraj/special.hpp"
#include "qtraj/wkb.hpp"

namespace fs = std::filesystem;

namespace qtraj {

namespace {

constexpr const char* kVersion = "qtraj 1.0.0";

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

Potential1D make_potential(const ExperimentConfig& c) {
    if (c.potential == "constant") return Potential1D::constant(c.v0);
    if (c.potential == "sharp-step") return Potential1D::sharp_step(c.v0, c.v1, c.q_step);
    if (c.potential == "soft-step") return Potential1D::soft_step(c.v0, c.v1 - c.v0, c.q_step, c.width);
    if (c.potential == "linear-ramp") return Potential1D::linear_ramp(c.v0, c.slope);
    return Potential1D::harmonic(c.mass, c.omega);
}

// Tracks every file written so an abort can clean up partial output.
struct OutputDir {
    fs::path dir;
    std::vector<fs::path> written;

    explicit OutputDir(const std::string& out) : dir(out) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        std::ofstream probe(dir / ".write_probe");
        if (!probe) throw std::invalid_argument("output directory not writable: " + out);
        probe.close();
        fs::remove(dir / ".write_probe");
    }

    fs::path file(const std::string& name) {
        written.push_back(dir / name);
        return written.back();
    }

    void discard() {
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
};

std::ofstream open_text(const fs::path& p) {
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open " + p.string());
    os.precision(17);
    return os;
}

// ---- shared state/flow construction -------------------------------------

WaveField build_state_1d(const ExperimentConfig& c, const Grid& grid) {
    if (c.state == "gaussian")
        return init_gaussian(grid, {c.q0, 0.0}, {c.p0, 0.0}, c.sigma, c.hbar, c.mass);
    if (c.state == "box-mode") return box_mode_1d(grid, c.mode_n, c.hbar, c.mass);
    if (c.state == "plane-wave" || c.state == "standing-wave") {
        if (grid.boundary != Boundary::Periodic)
            throw std::invalid_argument(c.state + " state needs a periodic grid");
        // snap the momentum to the nearest grid-commensurate wavenumber so the
        // state is an exact stationary state of the discrete kinetic operator
        const double Lbox = grid.extent(0);
        const double k_unit = 2.0 * std::numbers::pi / Lbox;
        const double k = k_unit * std::round(c.p0 / (c.hbar * k_unit));
        WaveField f = make_field(grid, c.hbar, c.mass);
        for (int i = 0; i < grid.n[0]; ++i) {
            const double q = grid.point(0, i);
            f.values[i] = (c.state == "plane-wave") ? std::polar(1.0, k * q)
                                                    : cplx(2.0 * std::cos(k * q), 0.0);
        }
        normalize(f);
        return f;
    }
    throw std::invalid_argument("state '" + c.state + "' is not a 1D state");
}

SpectralCoeffs billiard_coeffs(const ExperimentConfig& c, const Grid& grid) {
    if (c.state == "billiard-mode") {
        WaveField f = billiard_mode(grid, c.mode_n, c.mode_m, c.hbar, c.mass);
        return billiard_project(f, std::max({c.n_max, c.mode_n + 1, c.mode_m + 1}));
    }
    WaveField f = init_gaussian(grid, {c.q0, c.q0_2}, {c.p0, c.p0_2}, c.sigma, c.hbar, c.mass);
    normalize(f);
    SpectralCoeffs coeffs = billiard_project(f, c.n_max, 1e-4);
    return coeffs;
}

bool is_2d(const ExperimentConfig& c) {
    return c.state == "billiard-mode" ||
           (c.state == "gaussian" && (c.boundary == "dirichlet" || c.n2 > 0));
}

double spectral_energy(const SpectralCoeffs& co) {
    double e = 0.0;
    for (int n = 1; n <= co.n_max; ++n)
        for (int m = 1; m <= co.n_max; ++m)
            e += std::norm(co.c[(n - 1) * co.n_max + (m - 1)]) * co.energy(n, m);
    return e / co.norm2();
}

// bilinear interpolation of the quantum potential, skipping masked nodes
double qpot_at(const FlowSnapshot& s, const std::array<double, 2>& q) {
    const Grid& g = s.grid;
    auto cell = [&](int axis, double x) {
        double u = (x - g.qmin[axis]) / g.spacing(axis) - 0.5;
        int i = static_cast<int>(std::floor(u));
        i = std::clamp(i, 0, g.n[axis] - 2);
        return std::pair<int, double>{i, std::clamp(u - i, 0.0, 1.0)};
    };
    auto [i, fx] = cell(0, q[0]);
    auto [j, fy] = cell(1, g.dim == 2 ? q[1] : g.qmin[1]);
    if (g.dim == 1) {
        j = 0;
        fy = 0.0;
    }
    double wsum = 0.0, qsum = 0.0;
    for (int di = 0; di < 2; ++di)
        for (int dj = 0; dj < (g.dim == 2 ? 2 : 1); ++dj) {
            const std::size_t idx = g.index(i + di, j + dj);
            if (s.node_mask[idx]) continue;
            const double w = (di ? fx : 1.0 - fx) * (dj ? fy : 1.0 - fy);
            wsum += w;
            qsum += w * s.qpot[idx];
        }
    if (wsum <= 0.0) {
        // whole cell masked: nearest unmasked sample
        double best = 1e300, val = 0.0;
        for (std::size_t idx = 0; idx < s.qpot.size(); ++idx) {
            if (s.node_mask[idx]) continue;
            const int ii = static_cast<int>(idx) / g.n[1], jj = static_cast<int>(idx) % g.n[1];
            const double dx = g.point(0, ii) - q[0];
            const double dy = g.dim == 2 ? g.point(1, jj) - q[1] : 0.0;
            const double d = dx * dx + dy * dy;
            if (d < best) {
                best = d;
                val = s.qpot[idx];
            }
        }
        return val;
    }
    return qsum / wsum;
}

void write_lyapunov(std::ofstream& os, const LyapunovSeries& s) {
    os << "# t lambda separation\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
        os << s.times[i] << " " << s.lambda[i] << " " << s.separation[i] << "\n";
}

// ---- experiments --------------------------------------------------------

struct Ctx {
    const ExperimentConfig& cfg;
    OutputDir& out;
    RunManifest& man;

    void add(const std::string& k, double v) { man.summary[k] = fmt(v); }
    void add(const std::string& k, const std::string& v) { man.summary[k] = v; }
};

void run_evolve(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const long n_frames = std::lround((c.t1 - c.t0) / c.dt);
    if (is_2d(c)) {
        const Grid grid = make_grid_2d(0.0, c.L, c.n);
        SpectralCoeffs coeffs = billiard_coeffs(c, grid);
        ctx.add("projection_residual", coeffs.residual);
        ctx.add("energy", spectral_energy(coeffs));
        auto norms = open_text(ctx.out.file("norms.txt"));
        norms << "# t norm\n";
        for (long k = 0; k <= n_frames; ++k) {
            const double t = c.t0 + k * c.dt;
            WaveField f = billiard_evolve(coeffs, grid, t);
            char name[32];
            std::snprintf(name, sizeof(name), "field_%04ld.bin", k);
            dump_field(f, ctx.out.file(name));
            norms << t << " " << norm(f) << "\n";
            if (k == n_frames) export_field_text(f, ctx.out.file("field_final.txt"));
        }
        export_coeffs_text(coeffs, ctx.out.file("coeffs.txt"));
        return;
    }
    const Grid grid = make_grid_1d(c.qmin, c.qmax, c.n);
    const Potential1D pot = make_potential(c);
    WaveField f = build_state_1d(c, grid);
    const double bound = split_step_dt_bound(f, pot);
    const long sub = std::max(1L, std::lround(std::ceil(c.dt / std::min(bound, c.dt))));
    ctx.add("dt_bound", bound);
    ctx.add("substeps_per_frame", static_cast<double>(sub));
    ctx.add("energy", energy_expectation(f, &pot));
    auto norms = open_text(ctx.out.file("norms.txt"));
    norms << "# t norm\n";
    dump_field(f, ctx.out.file("field_0000.bin"));
    norms << c.t0 << " " << norm(f) << "\n";
    for (long k = 1; k <= n_frames; ++k) {
        f = evolve_split_step(f, pot, c.dt / sub, sub);
        char name[32];
        std::snprintf(name, sizeof(name), "field_%04ld.bin", k);
        dump_field(f, ctx.out.file(name));
        norms << f.time << " " << norm(f) << "\n";
    }
    export_field_text(f, ctx.out.file("field_final.txt"));
    ctx.add("final_norm", norm(f));
}

std::unique_ptr<FlowSource> build_flow(const ExperimentConfig& c, Ctx* ctx) {
    if (is_2d(c)) {
        const Grid grid = make_grid_2d(0.0, c.L, c.n);
        SpectralCoeffs coeffs = billiard_coeffs(c, grid);
        if (ctx) ctx->add("projection_residual", coeffs.residual);
        return std::make_unique<BilliardFlow>(std::move(coeffs), grid);
    }
    const Grid grid = make_grid_1d(c.qmin, c.qmax, c.n);
    const Potential1D pot = make_potential(c);
    WaveField f = build_state_1d(c, grid);
    const double bound = split_step_dt_bound(f, pot);
    const long sub = std::max(1L, std::lround(std::ceil(c.dt / std::min(bound, c.dt))));
    const long n_frames = std::lround((c.t1 - c.t0) / c.dt);
    std::vector<FlowSnapshot> frames;
    frames.reserve(n_frames + 1);
    frames.push_back(polar_decompose(f));
    for (long k = 1; k <= n_frames; ++k) {
        f = evolve_split_step(f, pot, c.dt / sub, sub);
        frames.push_back(polar_decompose(f));
    }
    return std::make_unique<InterpolatedFlow1D>(std::move(frames));
}

void run_bohm_trace(Ctx& ctx) {
    const auto& c = ctx.cfg;
    auto flow = build_flow(c, &ctx);
    flow->seek(c.t0);
    const FlowSnapshot initial = flow->snapshot(c.t0);
    export_flow_text(initial, ctx.out.file("flow_initial.txt"));
    auto q0 = sample_initial(initial, c.n_particles, c.seed);

    IntegrateOptions opt;
    opt.dt = c.dt_traj;
    opt.sample_stride = c.stride;
    TrajectoryEnsemble ens = integrate_ensemble(*flow, q0, c.t0, c.t1, opt);
    ens.seed = c.seed;
    export_trajectories_text(ens, ctx.out.file("trajectories.txt"));

    const FlowSnapshot final_flow = flow->snapshot(c.t1);
    export_flow_text(final_flow, ctx.out.file("flow_final.txt"));
    std::vector<std::array<double, 2>> q_final(q0.size());
    for (int i = 0; i < ens.n_particles; ++i) q_final[i] = ens.at(ens.times.size() - 1, i);
    ctx.add("ks_initial", equivariance_test(q0, initial));
    ctx.add("ks_final", equivariance_test(q_final, final_flow));
    ctx.add("node_flags", static_cast<double>(ens.node_flags));
    ctx.add("clamp_events", static_cast<double>(ens.clamp_events));
}

void run_freeze_check(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const Potential1D pot = Potential1D::constant(c.v0);
    WaveField f;
    double E = 0.0;
    if (c.state == "box-mode") {
        const Grid grid = make_grid_1d(0.0, c.L, c.n, Boundary::Dirichlet);
        f = box_mode_1d(grid, c.mode_n, c.hbar, c.mass);
        E = c.hbar * c.hbar * std::numbers::pi * std::numbers::pi * c.mode_n * c.mode_n /
            (2.0 * c.mass * c.L * c.L);
    } else {
        const Grid grid = make_grid_2d(0.0, c.L, c.n);
        f = billiard_mode(grid, c.mode_n, c.mode_m, c.hbar, c.mass);
        E = c.hbar * c.hbar * std::numbers::pi * std::numbers::pi *
            (c.mode_n * c.mode_n + c.mode_m * c.mode_m) / (2.0 * c.mass * c.L * c.L);
    }
    const FreezeReport rep = frozen_q_check(f, E + c.v0, pot);
    const FlowSnapshot snap = polar_decompose(f);
    export_flow_text(snap, ctx.out.file("flow.txt"));

    // transport a few particles over t = 10 hbar/E and record the drift
    double max_disp = 0.0;
    if (f.grid.dim == 2) {
        SpectralCoeffs coeffs = billiard_project(f, std::max({c.n_max, c.mode_n + 1, c.mode_m + 1}));
        BilliardFlow flow(std::move(coeffs), f.grid);
        auto q0 = sample_initial(snap, std::min(c.n_particles, 64), c.seed);
        IntegrateOptions opt;
        opt.dt = c.dt_traj;
        opt.sample_stride = 1 << 30;
        const double horizon = 10.0 * c.hbar / E;
        TrajectoryEnsemble ens = integrate_ensemble(flow, q0, 0.0, horizon, opt);
        for (std::size_t i = 0; i < q0.size(); ++i) {
            const auto& qf = ens.at(ens.times.size() - 1, static_cast<int>(i));
            max_disp = std::max(max_disp, std::hypot(qf[0] - q0[i][0], qf[1] - q0[i][1]));
        }
        ctx.add("transport_horizon", horizon);
    }
    ctx.add("energy", E);
    ctx.add("max_speed", rep.max_speed);
    ctx.add("max_qpot_deviation", rep.max_qpot_deviation);
    ctx.add("max_displacement", max_disp);
}

void run_lyapunov(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const Grid grid = make_grid_2d(0.0, c.L, c.n);
    SpectralCoeffs coeffs = billiard_coeffs(c, grid);
    ctx.add("projection_residual", coeffs.residual);
    BilliardFlow flow(std::move(coeffs), grid);

    LyapunovSeries bohm = finite_time_lyapunov(bohmian_pair(flow, c.dt_traj), {c.q0, c.q0_2},
                                               {1.0, 1.0}, c.delta0 * c.L, c.t0, c.t1, c.tau, c.L);
    auto bl = open_text(ctx.out.file("bohm_lyapunov.txt"));
    write_lyapunov(bl, bohm);

    // classical baseline: position-only offset, same launch point and the
    // packet's mean momentum
    const double p_scale = std::max(1.0, std::hypot(c.p0, c.p0_2));
    const double T_cl = c.t1 - c.t0;
    LyapunovSeries cls = finite_time_lyapunov(
        classical_billiard_pair(c.mass, c.L), {c.q0, c.q0_2, c.p0, c.p0_2}, {1.0, 1.0, 0.0, 0.0},
        c.delta0 * c.L, 0.0, T_cl, c.tau, c.L);
    auto cl = open_text(ctx.out.file("classical_lyapunov.txt"));
    write_lyapunov(cl, cls);

    ctx.add("lambda_bohm", bohm.final_lambda());
    ctx.add("lambda_classical", cls.final_lambda());
    ctx.add("classical_momentum_scale", p_scale);
}

void run_wkb_compare(Ctx& ctx) {
    const auto& c = ctx.cfg;
    if (c.potential != "linear-ramp" || c.slope <= 0.0)
        throw std::invalid_argument("wkb-compare needs system.potential = linear-ramp, slope > 0");
    const double E = c.energy;
    const double q_turn = (E - c.v0) / c.slope;
    const double ell = std::cbrt(c.hbar * c.hbar / (2.0 * c.mass * c.slope));
    const Potential1D pot = make_potential(c);
    const WkbWave w = wkb_wave(pot, E, c.mass, c.hbar, c.qmin, c.qmax, c.n);
    // asymptotic matching constant: Ai((q - q_turn)/ell) = C * psi_wkb
    const double C = 0.5 / std::sqrt(std::numbers::pi) * std::sqrt(c.hbar / ell);

    auto os = open_text(ctx.out.file("wkb_vs_airy.txt"));
    os << "# q airy wkb_scaled abs_error\n";
    double max_err = 0.0;
    for (std::size_t i = 0; i < w.q.size(); ++i) {
        const double z = (w.q[i] - q_turn) / ell;
        const double exact = airy_ai(z);
        const double approx = C * w.psi[i].real();
        os << w.q[i] << " " << exact << " " << approx << " " << std::abs(exact - approx) << "\n";
        if (std::abs(z) >= 2.0) max_err = std::max(max_err, std::abs(exact - approx));
    }
    ctx.add("energy", E);
    ctx.add("turning_point", q_turn);
    ctx.add("airy_length", ell);
    ctx.add("scale_constant", C);
    ctx.add("max_error_beyond_2_airy_lengths", max_err);
}

void run_step_scan(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const double E = c.energy;
    const ScatteringAmplitudes sharp = step_scattering_sharp(c.v0, c.v1, E, c.mass, c.hbar);
    auto os = open_text(ctx.out.file("step_scan.txt"));
    os << "# width p1_width_over_hbar abs_B B_squared\n";
    double prev = 1e300;
    bool monotone = true;
    for (int i = 0; i < c.scan_points; ++i) {
        const double u = static_cast<double>(i) / (c.scan_points - 1);
        const double dq = c.scan_lo * std::pow(c.scan_hi / c.scan_lo, u);
        const ScatteringAmplitudes soft = step_scattering_soft(c.v0, c.v1, E, dq, c.mass, c.hbar);
        const double absB = std::abs(soft.B);
        os << dq << " " << soft.p1 * dq / c.hbar << " " << absB << " " << absB * absB << "\n";
        if (absB > prev * (1.0 + 1e-12)) monotone = false;
        prev = absB;
    }
    ctx.add("sharp_abs_B", std::abs(sharp.B));
    ctx.add("sharp_B_squared", std::norm(sharp.B));
    ctx.add("sharp_flux", sharp.flux());
    ctx.add("soft_monotone_decreasing", monotone ? "true" : "false");
}

const char* kPlotStub = R"(#!/usr/bin/env python3
"""Plots the columnar data files written next to this script."""
import sys
import matplotlib.pyplot as plt
import numpy as np

for path in sys.argv[1:]:
    d = np.loadtxt(path)
    for col in range(1, d.shape[1]):
        plt.plot(d[:, 0], d[:, col], label=f"{path}:{col}")
plt.legend()
plt.show()
)";

void write_plot_stub(Ctx& ctx) {
    auto os = open_text(ctx.out.file("plot.py"));
    os << kPlotStub;
}

void run_dos(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const Spectrum spec = billiard_spectrum(c.L, c.hbar, c.mass, c.n_max);
    auto sp = open_text(ctx.out.file("spectrum.txt"));
    sp << "# n m E\n";
    for (const auto& lv : spec.levels) sp << lv.n << " " << lv.m << " " << lv.E << "\n";

    std::vector<double> E_grid(c.n_e);
    for (int i = 0; i < c.n_e; ++i)
        E_grid[i] = c.e_lo + (c.e_hi - c.e_lo) * i / (c.n_e - 1);
    const std::vector<double> rho = smoothed_dos(spec, c.epsilon, E_grid);
    const double weyl = weyl_density(c.L, c.hbar, c.mass);
    auto os = open_text(ctx.out.file("dos.txt"));
    os << "# E dos weyl staircase\n";
    double mean_ratio = 0.0, max_resid = 0.0;
    for (int i = 0; i < c.n_e; ++i) {
        os << E_grid[i] << " " << rho[i] << " " << weyl << " " << spec.count_below(E_grid[i])
           << "\n";
        mean_ratio += rho[i] / weyl / c.n_e;
        max_resid = std::max(max_resid, std::abs(rho[i] - weyl) / weyl);
    }
    write_plot_stub(ctx);
    ctx.add("weyl_density", weyl);
    ctx.add("completeness_bound", spec.completeness_bound());
    ctx.add("mean_dos_over_weyl", mean_ratio);
    ctx.add("max_relative_residual", max_resid);
}

void run_length_spectrum(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const Spectrum spec = billiard_spectrum(c.L, c.hbar, c.mass, c.n_max);
    const LengthSpectrumResult ls = length_spectrum(spec, c.epsilon, c.e_lo, c.e_hi, c.ell_max);
    auto os = open_text(ctx.out.file("length_spectrum.txt"));
    os << "# ell magnitude\n";
    for (std::size_t i = 0; i < ls.ell.size(); ++i)
        os << ls.ell[i] << " " << ls.magnitude[i] << "\n";
    auto pk = open_text(ctx.out.file("peaks.txt"));
    pk << "# peak_ell\n";
    for (double p : ls.peaks) pk << p << "\n";
    write_plot_stub(ctx);
    ctx.add("bin_width", ls.bin_width);
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ls.peaks.size()); ++i)
        ctx.add("peak_" + std::to_string(i), ls.peaks[i]);
}

void run_microcanonical(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const Spectrum spec = billiard_spectrum(c.L, c.hbar, c.mass, c.n_max);
    const MicrocanonicalWeights w = microcanonical_weights(spec, c.energy, c.epsilon);
    auto os = open_text(ctx.out.file("weights.txt"));
    os << "# n m E w\n";
    double part = 0.0;
    for (std::size_t i = 0; i < w.w.size(); ++i) {
        os << spec.levels[i].n << " " << spec.levels[i].m << " " << spec.levels[i].E << " "
           << w.w[i] << "\n";
        part += (w.w[i] / w.sum) * (w.w[i] / w.sum);
    }
    const Grid grid = make_grid_2d(0.0, c.L, c.n);
    const std::vector<double> rho = microcanonical_density(spec, w, grid);
    auto dn = open_text(ctx.out.file("density.txt"));
    dn << "# q1 q2 rho\n";
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            dn << grid.point(0, i) << " " << grid.point(1, j) << " " << rho[grid.index(i, j)]
               << "\n";
    write_plot_stub(ctx);
    ctx.add("weight_sum", w.sum);
    ctx.add("participation_number", 1.0 / part);
}

void run_bipolar_demo(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const Grid grid = make_grid_1d(c.qmin, c.qmax, c.n);
    ExperimentConfig sc = c;
    sc.state = "standing-wave";
    WaveField f = build_state_1d(sc, grid);
    const Potential1D pot = Potential1D::constant(c.v0);
    const double E = energy_expectation(f, &pot);
    auto [plus, minus] = bipolar_decompose_1d(f, E, pot);
    export_field_text(f, ctx.out.file("standing.txt"));
    export_field_text(plus, ctx.out.file("plus.txt"));
    export_field_text(minus, ctx.out.file("minus.txt"));

    const FlowSnapshot mono = polar_decompose(f);
    const FlowSnapshot fp = polar_decompose(plus);
    const FlowSnapshot fm = polar_decompose(minus);
    export_flow_text(fp, ctx.out.file("flow_plus.txt"));

    const double pbar = std::sqrt(2.0 * c.mass * (E - c.v0));
    double vp = 0.0, vm = 0.0;
    int cnt = 0;
    for (std::size_t i = 0; i < fp.velocity.size(); ++i) {
        if (fp.node_mask[i] || fm.node_mask[i]) continue;
        vp += fp.velocity[i][0];
        vm += fm.velocity[i][0];
        ++cnt;
    }
    ctx.add("energy", E);
    ctx.add("p_bar", pbar);
    ctx.add("expected_speed", pbar / c.mass);
    ctx.add("mean_velocity_plus", vp / cnt);
    ctx.add("mean_velocity_minus", vm / cnt);
    ctx.add("monopolar_max_speed", mono.max_offnode_speed());
}

void run_perturbative_phase(Ctx& ctx) {
    const auto& c = ctx.cfg;
    const Grid grid = make_grid_2d(0.0, c.L, c.n);
    SpectralCoeffs coeffs = billiard_coeffs(c, grid);
    ctx.add("projection_residual", coeffs.residual);
    BilliardFlow flow(std::move(coeffs), grid);

    const long n_frames = std::lround((c.t1 - c.t0) / c.dt);
    IntegrateOptions opt;
    opt.dt = c.dt_traj;
    opt.sample_stride = std::max(1L, std::lround(c.dt / c.dt_traj));
    std::vector<std::array<double, 2>> q0 = {{c.q0, c.q0_2}};
    TrajectoryEnsemble bohm = integrate_ensemble(flow, q0, c.t0, c.t1, opt);
    const ClassicalTrajectory cls =
        billiard_trajectory({{c.q0, c.q0_2}, {c.p0, c.p0_2}}, c.mass, c.L, c.t1 - c.t0, c.dt);

    // first-order perturbative phase: integrate Q along the unperturbed
    // classical path (trapezoid over the frame times)
    auto os = open_text(ctx.out.file("phase.txt"));
    os << "# t qx_bohm qy_bohm qx_cl qy_cl Q_cl S_pert separation\n";
    double S = 0.0, prevQ = 0.0, final_sep = 0.0;
    for (long k = 0; k <= n_frames; ++k) {
        const double t = c.t0 + k * c.dt;
        const FlowSnapshot snap = flow.snapshot(t);
        const std::size_t ti = std::min<std::size_t>(k, bohm.times.size() - 1);
        const std::size_t ci = std::min<std::size_t>(k, cls.states.size() - 1);
        const auto& qb = bohm.at(ti, 0);
        const auto& qc = cls.states[ci].q;
        const double Q = qpot_at(snap, qc);
        if (k > 0) S += 0.5 * (Q + prevQ) * c.dt;
        prevQ = Q;
        final_sep = std::hypot(qb[0] - qc[0], qb[1] - qc[1]);
        os << t << " " << qb[0] << " " << qb[1] << " " << qc[0] << " " << qc[1] << " " << Q << " "
           << -S << " " << final_sep << "\n";
    }
    ctx.add("perturbative_phase", -S);
    ctx.add("final_separation", final_sep);
}

} // namespace

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["version"] = version;
    j["config"] = config_echo;
    j["summary"] = summary;
    nlohmann::ordered_json sums = nlohmann::ordered_json::object();
    for (const auto& [name, sum] : checksums) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(sum));
        sums[name] = buf;
    }
    j["checksums"] = sums;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2) + "\n";
}

RunManifest run(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const auto start = std::chrono::steady_clock::now();

    RunManifest man;
    man.version = kVersion;
    man.config_echo = echo_config(cfg);
    exec::set_max_threads(cfg.threads);

    OutputDir out(cfg.out);
    Ctx ctx{cfg, out, man};
    try {
        if (cfg.kind == "evolve") run_evolve(ctx);
        else if (cfg.kind == "bohm-trace") run_bohm_trace(ctx);
        else if (cfg.kind == "freeze-check") run_freeze_check(ctx);
        else if (cfg.kind == "lyapunov") run_lyapunov(ctx);
        else if (cfg.kind == "wkb-compare") run_wkb_compare(ctx);
        else if (cfg.kind == "step-scan") run_step_scan(ctx);
        else if (cfg.kind == "dos") run_dos(ctx);
        else if (cfg.kind == "length-spectrum") run_length_spectrum(ctx);
        else if (cfg.kind == "microcanonical") run_microcanonical(ctx);
        else if (cfg.kind == "bipolar-demo") run_bipolar_demo(ctx);
        else if (cfg.kind == "perturbative-phase") run_perturbative_phase(ctx);
        else throw std::invalid_argument("unknown experiment kind: " + cfg.kind);
    } catch (...) {
        out.discard();
        throw;
    }

    for (const auto& p : out.written)
        man.checksums[p.filename().string()] = file_checksum(p);
    man.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ofstream mf(out.dir / "manifest.json");
    if (!mf) throw std::runtime_error("cannot write manifest");
    mf << man.to_json();
    return man;
}

} // namespace qtraj
