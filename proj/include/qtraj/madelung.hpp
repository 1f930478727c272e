#pragma once

#include <cstdint>
#include <vector>

#include "qtraj/wavefield.hpp"

namespace qtraj {

// Hydrodynamic view of a wave field at one time: density rho = |psi|^2,
// velocity v = J/rho with J = (hbar/m) Im(psi* grad psi), and the quantum
// potential Q = -(hbar^2/2m) laplacian(R)/R.  Q and v are NaN on the node
// mask (rho < eps_node * max rho) and excluded from statistics there.
struct FlowSnapshot {
    Grid grid;
    double time = 0.0;
    double hbar = 1.0;
    double mass = 1.0;
    std::vector<double> rho;
    std::vector<std::array<double, 2>> velocity; // [1] unused when dim == 1
    std::vector<double> qpot;
    std::vector<std::uint8_t> node_mask;

    double max_offnode_speed() const;
    double max_offnode_qpot_deviation(double reference) const; // max |Q - reference|
};

constexpr double kDefaultNodeEps = 1e-6;

FlowSnapshot polar_decompose(const WaveField& f, double eps_node = kDefaultNodeEps);

// Quantum potential alone; NaN at masked nodes.  Throws on a null amplitude.
std::vector<double> quantum_potential(const WaveField& f, double eps_node = kDefaultNodeEps);

} // namespace qtraj
