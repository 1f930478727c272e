#pragma once

#include <array>
#include <cstddef>

namespace qtraj {

enum class Boundary { Periodic, Dirichlet };

// Uniform grid over [qmin, qmax] per axis, sampled at cell midpoints
// q_j = qmin + (j + 1/2) dq.  Midpoint sampling makes the discrete sine
// transform exactly orthogonal for Dirichlet boxes and is equally valid
// for periodic FFTs.
struct Grid {
    int dim = 1;
    std::array<double, 2> qmin{0.0, 0.0};
    std::array<double, 2> qmax{1.0, 1.0};
    std::array<int, 2> n{0, 1}; // n[1] == 1 when dim == 1
    Boundary boundary = Boundary::Periodic;

    double spacing(int axis) const { return (qmax[axis] - qmin[axis]) / n[axis]; }
    double extent(int axis) const { return qmax[axis] - qmin[axis]; }
    std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1]; }
    double point(int axis, int i) const { return qmin[axis] + (i + 0.5) * spacing(axis); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n[1] + j; }

    bool contains(double q0, double q1 = 0.0) const {
        if (q0 < qmin[0] || q0 > qmax[0]) return false;
        if (dim == 2 && (q1 < qmin[1] || q1 > qmax[1])) return false;
        return true;
    }
};

Grid make_grid(int dim, const std::array<std::array<double, 2>, 2>& extents,
               const std::array<int, 2>& n_points, Boundary boundary);

Grid make_grid_1d(double qmin, double qmax, int n, Boundary boundary = Boundary::Periodic);
Grid make_grid_2d(double qmin, double qmax, int n, Boundary boundary = Boundary::Dirichlet);

} // namespace qtraj
