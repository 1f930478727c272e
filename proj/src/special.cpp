#include "qtraj/special.hpp"

#include <cmath>
#include <numbers>

namespace qtraj {

namespace {

// asymptotic coefficients u_k, u_{k+1} = u_k (6k+1)(6k+5)/(72(k+1))
double u_coeff(int k) {
    double u = 1.0;
    for (int i = 0; i < k; ++i) u *= (6.0 * i + 1.0) * (6.0 * i + 5.0) / (72.0 * (i + 1.0));
    return u;
}

} // namespace

double airy_ai(double x) {
    const double pi = std::numbers::pi;
    if (std::abs(x) <= 5.5) {
        // Ai(x) = c1 f(x) - c2 g(x)
        const double c1 = 0.35502805388781724;
        const double c2 = 0.25881940379280680;
        const double x3 = x * x * x;
        double f = 1.0, tf = 1.0;
        double g = x, tg = x;
        for (int k = 0; k < 60; ++k) {
            tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
            tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
            f += tf;
            g += tg;
            if (std::abs(tf) < 1e-18 * std::abs(f) && std::abs(tg) < 1e-18 * std::abs(g)) break;
        }
        return c1 * f - c2 * g;
    }
    if (x > 0.0) {
        const double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
        double sum = 0.0, sign = 1.0;
        for (int k = 0; k < 12; ++k) {
            const double term = u_coeff(k) / std::pow(zeta, k);
            if (k > 0 && term > u_coeff(k - 1) / std::pow(zeta, k - 1)) break; // divergent tail
            sum += sign * term;
            sign = -sign;
        }
        return std::exp(-zeta) / (2.0 * std::sqrt(pi) * std::pow(x, 0.25)) * sum;
    }
    const double z = -x;
    const double zeta = 2.0 / 3.0 * std::pow(z, 1.5);
    double even = 0.0, odd = 0.0;
    double sign = 1.0;
    for (int k = 0; k < 6; ++k) {
        even += sign * u_coeff(2 * k) / std::pow(zeta, 2 * k);
        odd += sign * u_coeff(2 * k + 1) / std::pow(zeta, 2 * k + 1);
        sign = -sign;
    }
    const double phase = zeta + 0.25 * pi;
    return (std::sin(phase) * even - std::cos(phase) * odd) /
           (std::sqrt(pi) * std::pow(z, 0.25));
}

} // namespace qtraj
