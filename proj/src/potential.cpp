#include "qtraj/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace qtraj {

double Potential1D::value(double q) const {
    switch (kind) {
    case Kind::Constant:
        return v0;
    case Kind::SharpStep:
        return q < q_step ? v0 : v0 + dv;
    case Kind::SoftStep:
        return v0 + dv / (1.0 + std::exp(-(q - q_step) / width));
    case Kind::LinearRamp:
        return v0 + slope * q;
    case Kind::Harmonic: {
        const double d = q - q_center;
        return 0.5 * mass * omega * omega * d * d;
    }
    }
    return 0.0;
}

double Potential1D::derivative(double q) const {
    switch (kind) {
    case Kind::Constant:
        return 0.0;
    case Kind::SharpStep:
        return 0.0; // away from q_step; callers requiring smoothness must not straddle it
    case Kind::SoftStep: {
        const double e = std::exp(-(q - q_step) / width);
        const double s = 1.0 + e;
        return dv * e / (width * s * s);
    }
    case Kind::LinearRamp:
        return slope;
    case Kind::Harmonic:
        return mass * omega * omega * (q - q_center);
    }
    return 0.0;
}

Potential1D Potential1D::constant(double V0) {
    Potential1D p;
    p.kind = Kind::Constant;
    p.v0 = V0;
    return p;
}

Potential1D Potential1D::sharp_step(double V0, double V1, double q_step) {
    Potential1D p;
    p.kind = Kind::SharpStep;
    p.v0 = V0;
    p.dv = V1 - V0;
    p.q_step = q_step;
    return p;
}

Potential1D Potential1D::soft_step(double V0, double dV, double q_step, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("soft step width must be positive");
    Potential1D p;
    p.kind = Kind::SoftStep;
    p.v0 = V0;
    p.dv = dV;
    p.q_step = q_step;
    p.width = width;
    return p;
}

Potential1D Potential1D::linear_ramp(double V0, double slope) {
    Potential1D p;
    p.kind = Kind::LinearRamp;
    p.v0 = V0;
    p.slope = slope;
    return p;
}

Potential1D Potential1D::harmonic(double mass, double omega, double q_center) {
    Potential1D p;
    p.kind = Kind::Harmonic;
    p.mass = mass;
    p.omega = omega;
    p.q_center = q_center;
    return p;
}

} // namespace qtraj
