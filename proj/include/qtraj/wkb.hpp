#pragma once

#include <complex>
#include <vector>

#include "qtraj/madelung.hpp"
#include "qtraj/potential.hpp"
#include "qtraj/wavefield.hpp"

namespace qtraj {

// Classical action integral of p(q) = sqrt(2m(E-V(q))) over [q0, q1];
// adaptive Simpson quadrature, relative error < 1e-10.  Throws if a turning
// point lies inside the interval (use wkb_wave's connection handling there).
double action_integral(const Potential1D& potential, double E, double q0, double q1, double mass);

struct ScatteringAmplitudes {
    cplx B{0.0, 0.0}; // reflected
    cplx T{0.0, 0.0}; // transmitted
    double E = 0.0;
    double p1 = 0.0, p2 = 0.0; // channel momenta
    // |B|^2 + (p2/p1)|T|^2, equal to 1 when both channels propagate
    double flux() const;
};

ScatteringAmplitudes step_scattering_sharp(double V0, double V1, double E, double mass,
                                           double hbar);
// Logistic (Eckart) step of width dq; closed-form |B| from the sinh formula.
ScatteringAmplitudes step_scattering_soft(double V0, double V1, double E, double dq, double mass,
                                          double hbar);

// Primitive WKB wave on [qa, qb] with at most one linear-regime turning
// point: amplitude 1/sqrt(p), phase from the action, standard linearized
// connection (|B| = 1, pi/2 reflection phase; transmitted amplitude 1/2
// with evanescent decay).
struct WkbWave {
    std::vector<double> q;
    std::vector<cplx> psi;
    bool has_turning_point = false;
    double q_turn = 0.0;
};

WkbWave wkb_wave(const Potential1D& potential, double E, double mass, double hbar, double qa,
                 double qb, int n_points);

// Certifies the stationary-state freeze: max off-node |v| and
// max off-node |Q - (E - V)|.
struct FreezeReport {
    double max_speed = 0.0;
    double max_qpot_deviation = 0.0;
};

FreezeReport frozen_q_check(const WaveField& f, double E, const Potential1D& potential);

} // namespace qtraj
