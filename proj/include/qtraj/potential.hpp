#pragma once

namespace qtraj {

// 1D classical potentials.  The soft step uses a logistic (Eckart) profile
// V0 + dV / (1 + exp(-(q - q_step)/width)), which has a closed-form
// transmission coefficient used as a scattering oracle.
struct Potential1D {
    enum class Kind { Constant, SharpStep, SoftStep, LinearRamp, Harmonic };

    Kind kind = Kind::Constant;
    double v0 = 0.0;      // base level
    double dv = 0.0;      // step height (SharpStep, SoftStep)
    double q_step = 0.0;  // step location
    double width = 0.0;   // soft step width dq
    double slope = 0.0;   // linear ramp force coefficient: V = v0 + slope*q
    double omega = 0.0;   // harmonic frequency
    double q_center = 0.0;
    double mass = 1.0;    // used by the harmonic kind only

    double value(double q) const;
    double derivative(double q) const; // dV/dq (SharpStep is not differentiable at q_step)

    static Potential1D constant(double V0);
    static Potential1D sharp_step(double V0, double V1, double q_step);
    static Potential1D soft_step(double V0, double dV, double q_step, double width);
    static Potential1D linear_ramp(double V0, double slope);
    static Potential1D harmonic(double mass, double omega, double q_center = 0.0);
};

} // namespace qtraj
