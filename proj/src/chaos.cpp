#include "qtraj/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtraj {

LyapunovSeries finite_time_lyapunov(const PairAdvance& advance, const std::vector<double>& x0,
                                    const std::vector<double>& offset_direction, double delta0,
                                    double t0, double t1, double tau, double domain_scale) {
    if (!(delta0 > 0.0) || !(tau > 0.0) || !(t1 > t0))
        throw std::invalid_argument("finite_time_lyapunov: bad parameters");
    const std::size_t d = x0.size();
    if (offset_direction.size() != d)
        throw std::invalid_argument("finite_time_lyapunov: offset dimension mismatch");
    double dn = 0.0;
    for (double v : offset_direction) dn += v * v;
    dn = std::sqrt(dn);
    if (!(dn > 0.0)) throw std::invalid_argument("finite_time_lyapunov: null offset direction");

    std::vector<double> a = x0, b = x0;
    for (std::size_t i = 0; i < d; ++i) b[i] += offset_direction[i] * (delta0 / dn);

    LyapunovSeries series;
    series.tau = tau;
    series.delta0 = delta0;
    const long n_windows = std::lround((t1 - t0) / tau);
    double log_sum = 0.0;
    for (long w = 0; w < n_windows; ++w) {
        const double ta = t0 + w * tau;
        const double tb = t0 + (w + 1) * tau;
        advance(a, b, ta, tb);
        double sep = 0.0;
        for (std::size_t i = 0; i < d; ++i) sep += (b[i] - a[i]) * (b[i] - a[i]);
        sep = std::sqrt(sep);
        if (!(sep > 0.0)) sep = 1e-300; // identical trajectories
        if (w == 0 && sep >= domain_scale)
            throw std::runtime_error("finite_time_lyapunov: tau too long "
                                     "(separation reached domain scale in one window)");
        log_sum += std::log(sep / delta0);
        const double t_elapsed = tb - t0;
        series.times.push_back(tb);
        series.lambda.push_back(log_sum / t_elapsed);
        series.separation.push_back(sep);
        // renormalize b back to distance delta0 from a
        const double scale = delta0 / sep;
        for (std::size_t i = 0; i < d; ++i) b[i] = a[i] + (b[i] - a[i]) * scale;
    }
    return series;
}

PairAdvance bohmian_pair(FlowSource& flow, double dt_traj, double wall_eps_rel) {
    return [&flow, dt_traj, wall_eps_rel](std::vector<double>& a, std::vector<double>& b,
                                          double t0, double t1) {
        const int dim = flow.dim();
        std::vector<std::array<double, 2>> pos(2, {0.0, 0.0});
        for (int i = 0; i < dim; ++i) {
            pos[0][i] = a[i];
            pos[1][i] = b[i];
        }
        IntegrateOptions opt;
        opt.dt = dt_traj;
        opt.sample_stride = 1 << 30; // endpoints only
        opt.policy = exec::Policy::Serial; // two particles, threading is pure overhead
        opt.wall_eps_rel = wall_eps_rel;
        const TrajectoryEnsemble ens = integrate_ensemble(flow, pos, t0, t1, opt);
        const std::size_t last = ens.times.size() - 1;
        for (int i = 0; i < dim; ++i) {
            a[i] = ens.at(last, 0)[i];
            b[i] = ens.at(last, 1)[i];
        }
    };
}

PairAdvance classical_billiard_pair(double mass, double L) {
    return [mass, L](std::vector<double>& a, std::vector<double>& b, double t0, double t1) {
        const double eps = 1e-13 * L; // keep restart points interior after a wall contact
        for (std::vector<double>* s : {&a, &b}) {
            PhasePoint x{{std::clamp((*s)[0], eps, L - eps), std::clamp((*s)[1], eps, L - eps)},
                         {(*s)[2], (*s)[3]}};
            BilliardState state(x, mass, L);
            state.advance(t1 - t0);
            (*s)[0] = state.state().q[0];
            (*s)[1] = state.state().q[1];
            (*s)[2] = state.state().p[0];
            (*s)[3] = state.state().p[1];
        }
    };
}

} // namespace qtraj
