#include "qtraj/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtraj {

ClassicalTrajectory integrate_1d(const Potential1D& potential, double q0, double p0, double mass,
                                 double t1, double dt) {
    if (!(dt > 0.0) || !(t1 > 0.0)) throw std::invalid_argument("integrate_1d: bad time span");
    const long n = std::lround(t1 / dt);
    ClassicalTrajectory traj;
    traj.dim = 1;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);

    double q = q0, p = p0;
    double f = -potential.derivative(q);
    traj.times.push_back(0.0);
    traj.states.push_back({{q, 0.0}, {p, 0.0}});
    for (long i = 0; i < n; ++i) {
        const double p_half = p + 0.5 * dt * f;
        q += dt * p_half / mass;
        f = -potential.derivative(q);
        p = p_half + 0.5 * dt * f;
        if (!std::isfinite(q) || !std::isfinite(p))
            throw std::runtime_error("integrate_1d: NaN at step " + std::to_string(i));
        traj.times.push_back((i + 1) * dt);
        traj.states.push_back({{q, 0.0}, {p, 0.0}});
    }
    return traj;
}

BilliardState::BilliardState(const PhasePoint& x0, double mass, double L)
    : x_(x0), mass_(mass), L_(L) {
    for (int a = 0; a < 2; ++a)
        if (x_.q[a] <= 0.0 || x_.q[a] >= L_)
            throw std::invalid_argument("BilliardState: initial point must be interior");
}

void BilliardState::advance(double dt) {
    double remaining = dt;
    const double corner_tol = 1e-12 * L_;
    while (remaining > 0.0) {
        // time to the next wall along each axis
        double t_hit[2];
        for (int a = 0; a < 2; ++a) {
            const double v = x_.p[a] / mass_;
            if (v > 0.0) t_hit[a] = (L_ - x_.q[a]) / v;
            else if (v < 0.0) t_hit[a] = -x_.q[a] / v;
            else t_hit[a] = 1e300;
        }
        const double t_wall = std::min(t_hit[0], t_hit[1]);
        if (t_wall >= remaining) {
            for (int a = 0; a < 2; ++a) x_.q[a] += remaining * x_.p[a] / mass_;
            t_ += remaining;
            return;
        }
        for (int a = 0; a < 2; ++a) x_.q[a] += t_wall * x_.p[a] / mass_;
        t_ += t_wall;
        remaining -= t_wall;
        const bool both = std::abs(t_hit[0] - t_hit[1]) * std::hypot(x_.p[0], x_.p[1]) / mass_ <
                          corner_tol;
        for (int a = 0; a < 2; ++a) {
            if (both || t_hit[a] <= t_hit[1 - a]) {
                x_.p[a] = -x_.p[a];
                x_.q[a] = std::clamp(x_.q[a], 0.0, L_);
                ++bounces_;
            }
        }
        if (both) ++corner_hits_;
    }
}

ClassicalTrajectory billiard_trajectory(const PhasePoint& x0, double mass, double L, double t1,
                                        double dt_sample) {
    BilliardState s(x0, mass, L);
    const long n = std::lround(t1 / dt_sample);
    ClassicalTrajectory traj;
    traj.dim = 2;
    traj.times.reserve(n + 1);
    traj.states.reserve(n + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(s.state());
    for (long i = 0; i < n; ++i) {
        s.advance(dt_sample);
        traj.times.push_back(s.time());
        traj.states.push_back(s.state());
    }
    return traj;
}

double poisson_bracket(const Observable& F, const Observable& G, const PhasePoint& x, double h,
                       int dim) {
    if (!(h > 0.0)) throw std::invalid_argument("poisson_bracket: h must be positive");
    auto dq = [&](const Observable& f, int a) {
        PhasePoint xp = x, xm = x;
        xp.q[a] += h;
        xm.q[a] -= h;
        return (f(xp) - f(xm)) / (2.0 * h);
    };
    auto dp = [&](const Observable& f, int a) {
        PhasePoint xp = x, xm = x;
        xp.p[a] += h;
        xm.p[a] -= h;
        return (f(xp) - f(xm)) / (2.0 * h);
    };
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += dp(F, a) * dq(G, a) - dq(F, a) * dp(G, a);
    if (!std::isfinite(s))
        throw std::runtime_error("poisson_bracket: non-finite (evaluation at a discontinuity?)");
    return s;
}

double constancy_check(const Observable& F, std::span<const PhasePoint> states) {
    if (states.empty()) return 0.0;
    const double f0 = F(states.front());
    const double scale = std::max(std::abs(f0), 1e-300);
    double m = 0.0;
    for (const auto& x : states) m = std::max(m, std::abs(F(x) - f0));
    return m / scale;
}

} // namespace qtraj
