#include "qtraj/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qtraj {

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

double action_integral(const Potential1D& potential, double E, double q0, double q1, double mass) {
    const double lo = std::min(q0, q1), hi = std::max(q0, q1);
    const int n_check = 2048;
    for (int i = 0; i <= n_check; ++i) {
        const double q = lo + (hi - lo) * i / n_check;
        if (E <= potential.value(q))
            throw std::domain_error("action_integral: turning point inside interval; "
                                    "use the turning-point connection");
    }
    auto p = [&](double q) { return std::sqrt(2.0 * mass * (E - potential.value(q))); };
    const double scale = std::abs(hi - lo) * p(0.5 * (lo + hi));
    const double s = integrate(p, q0, q1, 1e-12 * std::max(scale, 1.0));
    return s;
}

double ScatteringAmplitudes::flux() const {
    return std::norm(B) + (p2 / p1) * std::norm(T);
}

ScatteringAmplitudes step_scattering_sharp(double V0, double V1, double E, double mass,
                                           double hbar) {
    (void)hbar;
    if (E <= V0 && E <= V1) throw std::domain_error("step_scattering: E below both plateaus");
    if (E <= std::max(V0, V1))
        throw std::domain_error("step_scattering: closed channel (E below one plateau)");
    ScatteringAmplitudes a;
    a.E = E;
    a.p1 = std::sqrt(2.0 * mass * (E - V0));
    a.p2 = std::sqrt(2.0 * mass * (E - V1));
    a.B = (a.p1 - a.p2) / (a.p1 + a.p2);
    a.T = 2.0 * a.p1 / (a.p1 + a.p2);
    return a;
}

ScatteringAmplitudes step_scattering_soft(double V0, double V1, double E, double dq, double mass,
                                          double hbar) {
    if (!(dq > 0.0)) throw std::invalid_argument("step_scattering_soft: width must be positive");
    if (E <= std::max(V0, V1)) throw std::domain_error("step_scattering: closed channel");
    ScatteringAmplitudes a;
    a.E = E;
    a.p1 = std::sqrt(2.0 * mass * (E - V0));
    a.p2 = std::sqrt(2.0 * mass * (E - V1));
    const double k1 = a.p1 / hbar, k2 = a.p2 / hbar;
    const double pi = std::numbers::pi;
    // logistic step V0 + (V1-V0)/(1+exp(-q/dq)): |B| = sinh(pi dq (k1-k2)) / sinh(pi dq (k1+k2))
    const double num = std::sinh(pi * dq * (k1 - k2));
    const double den = std::sinh(pi * dq * (k1 + k2));
    const double absB = std::abs(num / den);
    a.B = absB;
    a.T = std::sqrt((1.0 - absB * absB) * a.p1 / a.p2);
    return a;
}

WkbWave wkb_wave(const Potential1D& potential, double E, double mass, double hbar, double qa,
                 double qb, int n_points) {
    if (!(qb > qa) || n_points < 2) throw std::invalid_argument("wkb_wave: bad range");
    WkbWave w;
    w.q.resize(n_points);
    w.psi.assign(n_points, cplx{0.0, 0.0});
    for (int i = 0; i < n_points; ++i) w.q[i] = qa + (qb - qa) * i / (n_points - 1);

    // locate turning points by sign changes of E - V on a fine scan
    const int n_scan = 4096;
    int crossings = 0;
    double q_turn = 0.0;
    double prev = E - potential.value(qa);
    for (int i = 1; i <= n_scan; ++i) {
        const double q = qa + (qb - qa) * i / n_scan;
        const double cur = E - potential.value(q);
        if ((prev > 0.0) != (cur > 0.0)) {
            ++crossings;
            // bisect
            double lo = qa + (qb - qa) * (i - 1) / n_scan, hi = q;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((E - potential.value(mid) > 0.0) == (prev > 0.0)) lo = mid;
                else hi = mid;
            }
            q_turn = 0.5 * (lo + hi);
        }
        prev = cur;
    }
    if (crossings > 1) throw std::domain_error("wkb_wave: more than one turning point in range");

    auto pq = [&](double q) { return 2.0 * mass * (E - potential.value(q)); };

    if (crossings == 0) {
        if (pq(qa) <= 0.0) throw std::domain_error("wkb_wave: entirely forbidden range");
        // traveling wave / sqrt(p)
        for (int i = 0; i < n_points; ++i) {
            const double p = std::sqrt(pq(w.q[i]));
            const double s = action_integral(potential, E, qa, w.q[i], mass);
            w.psi[i] = std::polar(1.0 / std::sqrt(p), s / hbar);
        }
        return w;
    }

    w.has_turning_point = true;
    w.q_turn = q_turn;
    const bool allowed_left = pq(qa) > 0.0;
    auto pabs = [&](double q) { return std::sqrt(std::abs(pq(q))); };
    const double tiny = 1e-300;
    for (int i = 0; i < n_points; ++i) {
        const double q = w.q[i];
        const bool allowed = (q < q_turn) == allowed_left && std::abs(q - q_turn) > 0.0;
        const double p = pabs(q);
        if (p < 1e-12) {
            w.psi[i] = cplx{std::numeric_limits<double>::quiet_NaN(), 0.0};
            continue;
        }
        // integrate |p| from q to the turning point (integrand vanishes at q_turn,
        // so plain quadrature is safe)
        auto f = [&](double x) { return pabs(x); };
        const double s = std::abs(integrate(f, std::min(q, q_turn), std::max(q, q_turn),
                                            1e-12 * std::max(p * std::abs(q - q_turn), 1.0)));
        if (allowed) {
            // incident + reflected with |B| = 1 and the pi/2 connection phase
            w.psi[i] = 2.0 / std::sqrt(p) * std::cos(s / hbar - 0.25 * std::numbers::pi);
        } else {
            w.psi[i] = 0.5 / std::sqrt(std::max(p, tiny)) * std::exp(-s / hbar);
        }
    }
    return w;
}

FreezeReport frozen_q_check(const WaveField& f, double E, const Potential1D& potential) {
    const FlowSnapshot s = polar_decompose(f);
    FreezeReport r;
    r.max_speed = s.max_offnode_speed();
    for (int i = 0; i < f.grid.n[0]; ++i) {
        const double ref = E - potential.value(f.grid.point(0, i));
        if (f.grid.dim == 1) {
            if (!s.node_mask[i]) r.max_qpot_deviation = std::max(r.max_qpot_deviation,
                                                                 std::abs(s.qpot[i] - ref));
        } else {
            for (int j = 0; j < f.grid.n[1]; ++j) {
                const std::size_t idx = f.grid.index(i, j);
                if (!s.node_mask[idx])
                    r.max_qpot_deviation = std::max(r.max_qpot_deviation, std::abs(s.qpot[idx] - ref));
            }
        }
    }
    return r;
}

} // namespace qtraj
