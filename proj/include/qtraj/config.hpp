#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qtraj {

// Flat, typed key-value configuration with [sections].  Parsing is strict:
// unknown sections or keys are fatal, so a typo cannot silently change the
// physics.  Every parameter has an explicit default that is echoed into the
// run manifest.
struct ExperimentConfig {
    // [experiment]
    std::string kind;       // evolve, bohm-trace, freeze-check, lyapunov, wkb-compare,
                            // step-scan, dos, length-spectrum, microcanonical,
                            // bipolar-demo, perturbative-phase
    std::uint64_t seed = 1;
    std::string out = "run_out";
    int threads = 0;        // 0 = library default

    // [system]
    double hbar = 1.0;
    double mass = 1.0;
    double L = 1.0;            // box side / domain length
    std::string potential = "constant";
    double v0 = 0.0, v1 = 0.0, q_step = 0.5, width = 0.05, slope = 1.0, omega = 1.0;

    // [state]
    std::string state = "gaussian"; // gaussian, billiard-mode, box-mode, plane-wave, standing-wave
    double q0 = 0.5, q0_2 = 0.5;
    double p0 = 0.0, p0_2 = 0.0;
    double sigma = 0.05;
    int mode_n = 1, mode_m = 1;
    double energy = 0.0; // for wkb / standing-wave states

    // [grid]
    int n = 256, n2 = 0;        // n2 = 0 means square
    double qmin = 0.0, qmax = 1.0;
    std::string boundary = "auto"; // auto, periodic, dirichlet
    int n_max = 32;             // billiard truncation

    // [time]
    double t0 = 0.0, t1 = 0.1;
    double dt = 1e-3;       // frame / cache interval
    double dt_traj = 1e-4;  // trajectory integrator step

    // [particles]
    int n_particles = 1024;
    int stride = 1;

    // [lyapunov]
    double delta0 = 1e-7;
    double tau = 0.02;

    // [dos]
    double epsilon = 1.0;
    double e_lo = 100.0, e_hi = 1000.0;
    int n_e = 512;
    double ell_max = 6.0;

    // [scan] (step-scan widths, relative to 1/p)
    double scan_lo = 0.05, scan_hi = 0.5;
    int scan_points = 16;
};

// Parses the config text; throws std::invalid_argument listing every
// violation (unknown keys, bad types, bad values).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Full validation for the configured experiment kind; throws listing every
// violated field.
void validate_config(const ExperimentConfig& cfg);

// Canonical echo of every parameter (user-set or defaulted).
std::map<std::string, std::string> echo_config(const ExperimentConfig& cfg);

} // namespace qtraj
