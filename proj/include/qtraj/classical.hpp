#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "qtraj/potential.hpp"

namespace qtraj {

struct PhasePoint {
    std::array<double, 2> q{0.0, 0.0};
    std::array<double, 2> p{0.0, 0.0};
};

struct ClassicalTrajectory {
    int dim = 1;
    std::vector<double> times;
    std::vector<PhasePoint> states;
};

// Leapfrog (velocity Verlet) for H = p^2/2m + V(q) in 1D.
ClassicalTrajectory integrate_1d(const Potential1D& potential, double q0, double p0, double mass,
                                 double t1, double dt);

// Event-driven square billiard in [0,L]^2: exact free flight plus specular
// reflection, no time-stepping error.  Simultaneous reflections at a corner
// (within 1e-12 L of both walls) are resolved by reflecting both components.
class BilliardState {
  public:
    BilliardState(const PhasePoint& x0, double mass, double L);

    void advance(double dt);
    const PhasePoint& state() const { return x_; }
    double time() const { return t_; }
    long bounces() const { return bounces_; }
    long corner_hits() const { return corner_hits_; }
    double mass() const { return mass_; }
    double side() const { return L_; }

  private:
    PhasePoint x_;
    double mass_, L_;
    double t_ = 0.0;
    long bounces_ = 0;
    long corner_hits_ = 0;
};

ClassicalTrajectory billiard_trajectory(const PhasePoint& x0, double mass, double L, double t1,
                                        double dt_sample);

using Observable = std::function<double(const PhasePoint&)>;

// Numeric Poisson bracket sum_m (dF/dp_m dG/dq_m - dF/dq_m dG/dp_m) by
// central differences with step h (sign convention of the classical
// integrability test: {p, q} = +1 for a canonical pair).
double poisson_bracket(const Observable& F, const Observable& G, const PhasePoint& x, double h,
                       int dim = 2);

// max_t |F(x(t)) - F(x(0))| / scale, scale = max(|F(x(0))|, 1e-300)
double constancy_check(const Observable& F, std::span<const PhasePoint> states);

} // namespace qtraj
