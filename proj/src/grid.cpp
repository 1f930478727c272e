#include "qtraj/grid.hpp"

#include <stdexcept>
#include <string>

namespace qtraj {

Grid make_grid(int dim, const std::array<std::array<double, 2>, 2>& extents,
               const std::array<int, 2>& n_points, Boundary boundary) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
    Grid g;
    g.dim = dim;
    g.boundary = boundary;
    for (int a = 0; a < dim; ++a) {
        if (!(extents[a][1] > extents[a][0]))
            throw std::invalid_argument("inverted extent on axis " + std::to_string(a));
        if (n_points[a] < 16)
            throw std::invalid_argument("n_points must be >= 16 (axis " + std::to_string(a) + ")");
        g.qmin[a] = extents[a][0];
        g.qmax[a] = extents[a][1];
        g.n[a] = n_points[a];
    }
    if (dim == 1) {
        g.qmin[1] = 0.0;
        g.qmax[1] = 0.0;
        g.n[1] = 1;
    }
    return g;
}

Grid make_grid_1d(double qmin, double qmax, int n, Boundary boundary) {
    return make_grid(1, {{{qmin, qmax}, {0.0, 0.0}}}, {n, 1}, boundary);
}

Grid make_grid_2d(double qmin, double qmax, int n, Boundary boundary) {
    return make_grid(2, {{{qmin, qmax}, {qmin, qmax}}}, {n, n}, boundary);
}

} // namespace qtraj
