#include "qtraj/madelung.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qtraj/spectral.hpp"

namespace qtraj {

double FlowSnapshot::max_offnode_speed() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (node_mask[i]) continue;
        const double s = std::hypot(velocity[i][0], grid.dim == 2 ? velocity[i][1] : 0.0);
        m = std::max(m, s);
    }
    return m;
}

double FlowSnapshot::max_offnode_qpot_deviation(double reference) const {
    double m = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        if (node_mask[i]) continue;
        m = std::max(m, std::abs(qpot[i] - reference));
    }
    return m;
}

FlowSnapshot polar_decompose(const WaveField& f, double eps_node) {
    FlowSnapshot s;
    s.grid = f.grid;
    s.time = f.time;
    s.hbar = f.hbar;
    s.mass = f.mass;
    const std::size_t sz = f.values.size();
    s.rho.resize(sz);
    s.velocity.assign(sz, {0.0, 0.0});
    s.qpot.assign(sz, 0.0);
    s.node_mask.assign(sz, 0);

    double rho_max = 0.0;
    for (std::size_t i = 0; i < sz; ++i) {
        s.rho[i] = std::norm(f.values[i]);
        rho_max = std::max(rho_max, s.rho[i]);
    }
    if (rho_max == 0.0) throw std::runtime_error("polar_decompose: null amplitude");
    const double rho_cut = eps_node * rho_max;

    const auto lap = laplacian(f);
    std::array<std::vector<cplx>, 2> grad;
    for (int a = 0; a < f.grid.dim; ++a) grad[a] = gradient(f, a);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < sz; ++i) {
        if (s.rho[i] < rho_cut) {
            s.node_mask[i] = 1;
            s.velocity[i] = {nan, nan};
            s.qpot[i] = nan;
            continue;
        }
        // grad psi / psi; its imaginary part is grad S / hbar (single valued off nodes)
        double grad_s2 = 0.0; // |grad S / hbar|^2
        for (int a = 0; a < f.grid.dim; ++a) {
            const cplx r = grad[a][i] / f.values[i];
            const double gs = r.imag();
            s.velocity[i][a] = f.hbar / f.mass * gs;
            grad_s2 += gs * gs;
        }
        // laplacian(R)/R = Re(laplacian(psi)/psi) + |grad S/hbar|^2, avoiding |psi| kinks
        const double lr_over_r = (lap[i] / f.values[i]).real() + grad_s2;
        s.qpot[i] = -f.hbar * f.hbar / (2.0 * f.mass) * lr_over_r;
    }
    return s;
}

std::vector<double> quantum_potential(const WaveField& f, double eps_node) {
    return polar_decompose(f, eps_node).qpot;
}

} // namespace qtraj
