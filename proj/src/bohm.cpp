#include "qtraj/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qtraj/rng.hpp"
#include "qtraj/spectral.hpp"

namespace qtraj {

// ---------------------------------------------------------------- spline

void CubicSpline::build(std::vector<double> x, std::vector<double> y) {
    const std::size_t n = x.size();
    if (n < 3 || y.size() != n) throw std::invalid_argument("CubicSpline: need >= 3 points");
    x_ = std::move(x);
    y_ = std::move(y);
    y2_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (x_[i] - x_[i - 1]) / (x_[i + 1] - x_[i - 1]);
        const double p = sig * y2_[i - 1] + 2.0;
        y2_[i] = (sig - 1.0) / p;
        u[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]) - (y_[i] - y_[i - 1]) / (x_[i] - x_[i - 1]);
        u[i] = (6.0 * u[i] / (x_[i + 1] - x_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t i = n - 1; i-- > 0;) y2_[i] = y2_[i] * y2_[i + 1] + u[i];
}

double CubicSpline::eval(double x) const {
    x = std::clamp(x, x_.front(), x_.back());
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t hi = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - x_.begin(), 1), x_.size() - 1);
    const std::size_t lo = hi - 1;
    const double h = x_[hi] - x_[lo];
    const double a = (x_[hi] - x) / h;
    const double b = (x - x_[lo]) / h;
    return a * y_[lo] + b * y_[hi] +
           ((a * a * a - a) * y2_[lo] + (b * b * b - b) * y2_[hi]) * h * h / 6.0;
}

// ------------------------------------------------------- interpolated 1D

InterpolatedFlow1D::InterpolatedFlow1D(std::vector<FlowSnapshot> frames)
    : frames_(std::move(frames)) {
    if (frames_.empty()) throw std::invalid_argument("InterpolatedFlow1D: no frames");
    for (const auto& f : frames_)
        if (f.grid.dim != 1) throw std::invalid_argument("InterpolatedFlow1D: 1D frames only");
    const Grid& g = frames_.front().grid;
    node_x_.resize(g.n[0]);
    for (int i = 0; i < g.n[0]; ++i) node_x_[i] = g.point(0, i);
    seek(frames_.front().time);
}

void InterpolatedFlow1D::seek(double t) {
    const std::size_t n = node_x_.size();
    v_.assign(n, 0.0);
    mask_.assign(n, 0);
    const FlowSnapshot* a = &frames_.front();
    const FlowSnapshot* b = a;
    double w = 0.0;
    if (frames_.size() > 1 && t > frames_.front().time) {
        auto it = std::lower_bound(frames_.begin(), frames_.end(), t,
                                   [](const FlowSnapshot& f, double tt) { return f.time < tt; });
        if (it == frames_.end()) {
            a = b = &frames_.back();
        } else if (it != frames_.begin()) {
            b = &*it;
            a = &*(it - 1);
            w = (t - a->time) / (b->time - a->time);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        mask_[i] = a->node_mask[i] | b->node_mask[i];
        if (!mask_[i]) v_[i] = (1.0 - w) * a->velocity[i][0] + w * b->velocity[i][0];
    }
    // fill masked samples from the nearest unmasked one so the spline stays finite
    std::vector<double> filled = v_;
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask_[i]) continue;
        for (std::size_t d = 1; d < n; ++d) {
            if (i >= d && !mask_[i - d]) { filled[i] = v_[i - d]; break; }
            if (i + d < n && !mask_[i + d]) { filled[i] = v_[i + d]; break; }
        }
    }
    spline_.build(node_x_, filled);
    t_current_ = t;
}

std::array<double, 2> InterpolatedFlow1D::velocity(const std::array<double, 2>& q,
                                                   bool* flagged) const {
    const Grid& g = frames_.front().grid;
    double x = q[0];
    if (g.boundary == Boundary::Periodic) {
        const double L = g.extent(0);
        x = g.qmin[0] + std::fmod(std::fmod(x - g.qmin[0], L) + L, L);
    } else if (x < g.qmin[0] || x > g.qmax[0]) {
        throw std::out_of_range("velocity: position outside grid extent");
    }
    // interpolation cell
    const double dq = g.spacing(0);
    const double s = (x - node_x_.front()) / dq;
    const std::size_t lo = static_cast<std::size_t>(std::clamp<double>(std::floor(s), 0.0,
                                                    static_cast<double>(node_x_.size() - 2)));
    if (mask_[lo] || mask_[lo + 1]) {
        if (flagged) *flagged = true;
        // nearest unmasked sample
        for (std::size_t d = 0; d < node_x_.size(); ++d) {
            if (lo >= d && !mask_[lo - d]) return {v_[lo - d], 0.0};
            if (lo + d < node_x_.size() && !mask_[lo + d]) return {v_[lo + d], 0.0};
        }
        return {0.0, 0.0};
    }
    return {spline_.eval(x), 0.0};
}

FlowSnapshot InterpolatedFlow1D::snapshot(double t) const {
    const FlowSnapshot* best = &frames_.front();
    for (const auto& f : frames_)
        if (std::abs(f.time - t) < std::abs(best->time - t)) best = &f;
    return *best;
}

// ------------------------------------------------------------- billiard

BilliardFlow::BilliardFlow(SpectralCoeffs coeffs, const Grid& snapshot_grid, double eps_node)
    : coeffs_(std::move(coeffs)), grid_(snapshot_grid), eps_node_(eps_node) {
    if (grid_.dim != 2 || grid_.boundary != Boundary::Dirichlet)
        throw std::invalid_argument("BilliardFlow: needs a 2D Dirichlet grid");
    rotated_ = coeffs_.c;
    rho_ref_ = 4.0 * coeffs_.norm2() / (coeffs_.L * coeffs_.L);
}

void BilliardFlow::seek(double t) {
    const int nm = coeffs_.n_max;
    for (int n = 1; n <= nm; ++n)
        for (int m = 1; m <= nm; ++m) {
            const std::size_t idx = static_cast<std::size_t>(n - 1) * nm + (m - 1);
            rotated_[idx] = coeffs_.c[idx] *
                            std::polar(1.0, -coeffs_.energy(n, m) * (t - coeffs_.t0) / coeffs_.hbar);
        }
}

void BilliardFlow::synthesize(const std::array<double, 2>& q, cplx& psi, cplx& dx, cplx& dy) const {
    const int nm = coeffs_.n_max;
    const double L = coeffs_.L;
    const double pi = std::numbers::pi;
    const double tx = pi * (q[0] - grid_.qmin[0]) / L;
    const double ty = pi * (q[1] - grid_.qmin[1]) / L;

    // sin/cos of n*theta by the angle-addition recurrence
    thread_local std::vector<double> sx, cx, sy, cy;
    sx.resize(nm + 1); cx.resize(nm + 1); sy.resize(nm + 1); cy.resize(nm + 1);
    const double s1x = std::sin(tx), c1x = std::cos(tx);
    const double s1y = std::sin(ty), c1y = std::cos(ty);
    sx[1] = s1x; cx[1] = c1x; sy[1] = s1y; cy[1] = c1y;
    for (int n = 2; n <= nm; ++n) {
        sx[n] = sx[n - 1] * c1x + cx[n - 1] * s1x;
        cx[n] = cx[n - 1] * c1x - sx[n - 1] * s1x;
        sy[n] = sy[n - 1] * c1y + cy[n - 1] * s1y;
        cy[n] = cy[n - 1] * c1y - sy[n - 1] * s1y;
    }

    psi = dx = dy = cplx{0.0, 0.0};
    for (int n = 1; n <= nm; ++n) {
        cplx a{0.0, 0.0}, b{0.0, 0.0};
        const cplx* row = &rotated_[static_cast<std::size_t>(n - 1) * nm];
        for (int m = 1; m <= nm; ++m) {
            a += row[m - 1] * sy[m];
            b += row[m - 1] * (m * pi / L) * cy[m];
        }
        psi += sx[n] * a;
        dx += (n * pi / L) * cx[n] * a;
        dy += sx[n] * b;
    }
    const double amp = 2.0 / L;
    psi *= amp;
    dx *= amp;
    dy *= amp;
}

std::array<double, 2> BilliardFlow::velocity(const std::array<double, 2>& q, bool* flagged) const {
    cplx psi, dx, dy;
    std::array<double, 2> p = q;
    const double delta = coeffs_.L / 1024.0;
    for (int attempt = 0; attempt < 5; ++attempt) {
        synthesize(p, psi, dx, dy);
        if (std::norm(psi) >= eps_node_ * rho_ref_) {
            const double f = coeffs_.hbar / coeffs_.mass;
            return {f * (dx / psi).imag(), f * (dy / psi).imag()};
        }
        if (flagged) *flagged = true;
        // step away from the node along the grid diagonal, staying inside
        for (int a = 0; a < 2; ++a) {
            p[a] += delta;
            if (p[a] > grid_.qmax[a] - delta) p[a] = q[a] - (attempt + 1) * delta;
            p[a] = std::clamp(p[a], grid_.qmin[a] + delta, grid_.qmax[a] - delta);
        }
    }
    return {0.0, 0.0};
}

FlowSnapshot BilliardFlow::snapshot(double t) const {
    return polar_decompose(billiard_evolve(coeffs_, grid_, t), eps_node_);
}

// ------------------------------------------------------------- sampling

std::vector<std::array<double, 2>> sample_initial(const FlowSnapshot& flow, int n,
                                                  std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_initial: N must be >= 1");
    const Grid& g = flow.grid;
    double total = 0.0;
    for (double r : flow.rho) total += r;
    if (!(total > 0.0)) throw std::runtime_error("sample_initial: degenerate density");

    CounterRng rng{seed};
    std::vector<std::array<double, 2>> out(n, {0.0, 0.0});

    if (g.dim == 1) {
        std::vector<double> cum(g.n[0] + 1, 0.0);
        for (int i = 0; i < g.n[0]; ++i) cum[i + 1] = cum[i] + flow.rho[i];
        for (auto& c : cum) c /= cum.back();
        for (int p = 0; p < n; ++p) {
            const double u = rng.uniform(p, 0);
            auto it = std::upper_bound(cum.begin(), cum.end(), u);
            const int cell = std::clamp<int>(static_cast<int>(it - cum.begin()) - 1, 0, g.n[0] - 1);
            const double frac = (u - cum[cell]) / std::max(cum[cell + 1] - cum[cell], 1e-300);
            out[p][0] = g.qmin[0] + (cell + frac) * g.spacing(0);
        }
        return out;
    }

    double rho_max = 0.0;
    for (double r : flow.rho) rho_max = std::max(rho_max, r);
    for (int p = 0; p < n; ++p) {
        bool ok = false;
        for (std::uint64_t j = 0; j < 100000; ++j) {
            const double x = g.qmin[0] + rng.uniform(p, 3 * j) * g.extent(0);
            const double y = g.qmin[1] + rng.uniform(p, 3 * j + 1) * g.extent(1);
            const int i0 = std::clamp<int>(static_cast<int>((x - g.qmin[0]) / g.spacing(0)), 0, g.n[0] - 1);
            const int i1 = std::clamp<int>(static_cast<int>((y - g.qmin[1]) / g.spacing(1)), 0, g.n[1] - 1);
            if (rng.uniform(p, 3 * j + 2) * rho_max <= flow.rho[g.index(i0, i1)]) {
                out[p] = {x, y};
                ok = true;
                break;
            }
        }
        if (!ok) throw std::runtime_error("sample_initial: rejection sampling failed");
    }
    return out;
}

std::array<double, 2> velocity_at(const FlowSnapshot& flow, const std::array<double, 2>& q) {
    const Grid& g = flow.grid;
    if (g.dim == 1) {
        InterpolatedFlow1D f({flow});
        return f.velocity(q, nullptr);
    }
    if (!g.contains(q[0], q[1])) throw std::out_of_range("velocity_at: position outside grid extent");
    // bilinear on the midpoint lattice, nearest unmasked fallback
    auto cell = [&](int axis, double x) {
        const double s = (x - g.qmin[axis]) / g.spacing(axis) - 0.5;
        return std::clamp(s, 0.0, static_cast<double>(g.n[axis] - 1));
    };
    const double sx = cell(0, q[0]), sy = cell(1, q[1]);
    const int i0 = std::min(static_cast<int>(sx), g.n[0] - 2);
    const int j0 = std::min(static_cast<int>(sy), g.n[1] - 2);
    const double fx = sx - i0, fy = sy - j0;
    std::array<double, 2> v{0.0, 0.0};
    bool masked = false;
    for (int di = 0; di < 2 && !masked; ++di)
        for (int dj = 0; dj < 2; ++dj)
            if (flow.node_mask[g.index(i0 + di, j0 + dj)]) { masked = true; break; }
    if (!masked) {
        for (int a = 0; a < 2; ++a) {
            const auto vv = [&](int i, int j) { return flow.velocity[g.index(i, j)][a]; };
            v[a] = (1 - fx) * (1 - fy) * vv(i0, j0) + fx * (1 - fy) * vv(i0 + 1, j0) +
                   (1 - fx) * fy * vv(i0, j0 + 1) + fx * fy * vv(i0 + 1, j0 + 1);
        }
        return v;
    }
    // nearest unmasked grid point
    double best = 1e300;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            if (flow.node_mask[g.index(i, j)]) continue;
            const double d = std::hypot(g.point(0, i) - q[0], g.point(1, j) - q[1]);
            if (d < best) { best = d; v = flow.velocity[g.index(i, j)]; }
        }
    return v;
}

// ------------------------------------------------------------ transport

namespace {

void apply_bounds(std::array<double, 2>& q, const Grid& g, double wall_eps, long* clamps) {
    for (int a = 0; a < g.dim; ++a) {
        if (g.boundary == Boundary::Periodic) {
            const double L = g.extent(a);
            q[a] = g.qmin[a] + std::fmod(std::fmod(q[a] - g.qmin[a], L) + L, L);
        } else {
            const double lo = g.qmin[a] + wall_eps;
            const double hi = g.qmax[a] - wall_eps;
            if (q[a] < lo || q[a] > hi) {
                q[a] = std::clamp(q[a], lo, hi);
                if (clamps) ++(*clamps);
            }
        }
    }
}

} // namespace

TrajectoryEnsemble integrate_ensemble(FlowSource& flow,
                                      const std::vector<std::array<double, 2>>& initial,
                                      double t0, double t1, const IntegrateOptions& opt) {
    if (!(t1 > t0)) throw std::invalid_argument("integrate_ensemble: need t1 > t0");
    const Grid& g = flow.domain();
    const int np = static_cast<int>(initial.size());
    const long n_steps = std::max<long>(1, std::lround((t1 - t0) / opt.dt));
    const double h = (t1 - t0) / n_steps;
    const double wall_eps = opt.wall_eps_rel * g.extent(0);
    const bool par = (opt.policy == exec::Policy::Parallel);

    TrajectoryEnsemble ens;
    ens.dim = g.dim;
    ens.n_particles = np;
    std::vector<std::array<double, 2>> q = initial;
    for (auto& p : q) apply_bounds(p, g, wall_eps, nullptr);

    auto record = [&](double t) {
        ens.times.push_back(t);
        ens.positions.insert(ens.positions.end(), q.begin(), q.end());
    };
    record(t0);

    std::vector<std::array<double, 2>> k1(np), k2(np), k3(np);
    long flags = 0, clamps = 0;
    for (long step = 0; step < n_steps; ++step) {
        const double t = t0 + step * h;

        flow.seek(t);
#pragma omp parallel for if (par) schedule(static) reduction(+ : flags)
        for (int p = 0; p < np; ++p) {
            bool fl = false;
            k1[p] = flow.velocity(q[p], &fl);
            flags += fl;
        }
        flow.seek(t + 0.5 * h);
#pragma omp parallel for if (par) schedule(static) reduction(+ : flags)
        for (int p = 0; p < np; ++p) {
            bool fl = false;
            std::array<double, 2> qq{q[p][0] + 0.5 * h * k1[p][0], q[p][1] + 0.5 * h * k1[p][1]};
            apply_bounds(qq, g, wall_eps, nullptr);
            k2[p] = flow.velocity(qq, &fl);
            qq = {q[p][0] + 0.5 * h * k2[p][0], q[p][1] + 0.5 * h * k2[p][1]};
            apply_bounds(qq, g, wall_eps, nullptr);
            k3[p] = flow.velocity(qq, &fl);
            flags += fl;
        }
        flow.seek(t + h);
#pragma omp parallel for if (par) schedule(static) reduction(+ : flags, clamps)
        for (int p = 0; p < np; ++p) {
            bool fl = false;
            std::array<double, 2> qq{q[p][0] + h * k3[p][0], q[p][1] + h * k3[p][1]};
            apply_bounds(qq, g, wall_eps, nullptr);
            const auto k4 = flow.velocity(qq, &fl);
            flags += fl;
            long local_clamps = 0;
            for (int a = 0; a < g.dim; ++a)
                q[p][a] += h / 6.0 * (k1[p][a] + 2.0 * k2[p][a] + 2.0 * k3[p][a] + k4[a]);
            apply_bounds(q[p], g, wall_eps, &local_clamps);
            clamps += local_clamps;
        }
        for (int p = 0; p < np; ++p)
            if (!std::isfinite(q[p][0]) || (g.dim == 2 && !std::isfinite(q[p][1])))
                throw std::runtime_error("integrate_ensemble: NaN for particle " +
                                         std::to_string(p) + " at t=" + std::to_string(t + h));
        if ((step + 1) % opt.sample_stride == 0 || step + 1 == n_steps) record(t0 + (step + 1) * h);
    }
    ens.node_flags = flags;
    ens.clamp_events = clamps;
    return ens;
}

// ---------------------------------------------------------- equivariance

namespace {

// KS distance of sorted samples against a piecewise-linear CDF given by
// (value, cumulative) pairs with cumulative ending at 1.
double ks_against_cdf(std::vector<double> samples, const std::vector<double>& xs,
                      const std::vector<double>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double x = samples[i];
        double F;
        if (x <= xs.front()) F = 0.0;
        else if (x >= xs.back()) F = 1.0;
        else {
            auto it = std::upper_bound(xs.begin(), xs.end(), x);
            const std::size_t hi = it - xs.begin();
            const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
            F = cdf[hi - 1] + w * (cdf[hi] - cdf[hi - 1]);
        }
        ks = std::max(ks, std::max(std::abs(F - i / n), std::abs(F - (i + 1) / n)));
    }
    return ks;
}

} // namespace

double equivariance_test(const std::vector<std::array<double, 2>>& positions,
                         const FlowSnapshot& flow) {
    const Grid& g = flow.grid;
    if (g.dim == 1) {
        std::vector<double> xs(g.n[0] + 1), cdf(g.n[0] + 1, 0.0);
        xs[0] = g.qmin[0];
        for (int i = 0; i < g.n[0]; ++i) {
            xs[i + 1] = g.qmin[0] + (i + 1) * g.spacing(0);
            cdf[i + 1] = cdf[i] + flow.rho[i];
        }
        for (auto& c : cdf) c /= cdf.back();
        std::vector<double> s(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i) s[i] = positions[i][0];
        return ks_against_cdf(std::move(s), xs, cdf);
    }

    double ks = 0.0;
    // marginals
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<double> xs(g.n[axis] + 1), cdf(g.n[axis] + 1, 0.0);
        xs[0] = g.qmin[axis];
        for (int i = 0; i < g.n[axis]; ++i) {
            xs[i + 1] = g.qmin[axis] + (i + 1) * g.spacing(axis);
            double m = 0.0;
            for (int j = 0; j < g.n[1 - axis]; ++j)
                m += flow.rho[axis == 0 ? g.index(i, j) : g.index(j, i)];
            cdf[i + 1] = cdf[i] + m;
        }
        for (auto& c : cdf) c /= cdf.back();
        std::vector<double> s(positions.size());
        for (std::size_t i = 0; i < positions.size(); ++i) s[i] = positions[i][axis];
        ks = std::max(ks, ks_against_cdf(std::move(s), xs, cdf));
    }

    // radial coordinate about the density centroid, 2x2 subsampled cells
    double cx = 0.0, cy = 0.0, mass = 0.0;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            const double m = flow.rho[g.index(i, j)];
            cx += m * g.point(0, i);
            cy += m * g.point(1, j);
            mass += m;
        }
    cx /= mass;
    cy /= mass;
    std::vector<std::pair<double, double>> atoms; // (r, weight)
    atoms.reserve(4 * g.size());
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            const double m = flow.rho[g.index(i, j)] / 4.0;
            if (m == 0.0) continue;
            for (int si = 0; si < 2; ++si)
                for (int sj = 0; sj < 2; ++sj) {
                    const double x = g.qmin[0] + (i + 0.25 + 0.5 * si) * g.spacing(0);
                    const double y = g.qmin[1] + (j + 0.25 + 0.5 * sj) * g.spacing(1);
                    atoms.emplace_back(std::hypot(x - cx, y - cy), m);
                }
        }
    std::sort(atoms.begin(), atoms.end());
    std::vector<double> xs(atoms.size()), cdf(atoms.size());
    double acc = 0.0, tot = 0.0;
    for (const auto& a : atoms) tot += a.second;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        xs[i] = atoms[i].first;
        acc += atoms[i].second;
        cdf[i] = (acc - 0.5 * atoms[i].second) / tot;
    }
    std::vector<double> s(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i)
        s[i] = std::hypot(positions[i][0] - cx, positions[i][1] - cy);
    return std::max(ks, ks_against_cdf(std::move(s), xs, cdf));
}

// -------------------------------------------------------------- bipolar

std::pair<WaveField, WaveField> bipolar_decompose_1d(const WaveField& f, double E,
                                                     const Potential1D& potential) {
    const Grid& g = f.grid;
    if (g.dim != 1) throw std::invalid_argument("bipolar_decompose_1d: 1D only");
    double max_re = 0.0, max_im = 0.0;
    for (const auto& v : f.values) {
        max_re = std::max(max_re, std::abs(v.real()));
        max_im = std::max(max_im, std::abs(v.imag()));
    }
    if (max_im > 1e-8 * max_re)
        throw std::invalid_argument("bipolar_decompose_1d: field must be real (stationary)");
    for (int i = 0; i < g.n[0]; ++i)
        if (E <= potential.value(g.point(0, i)))
            throw std::invalid_argument("bipolar_decompose_1d: classically forbidden region in range");

    const auto du = gradient(f, 0);
    WaveField plus = f, minus = f;
    for (int i = 0; i < g.n[0]; ++i) {
        const double pbar = std::sqrt(2.0 * f.mass * (E - potential.value(g.point(0, i))));
        const double u = f.values[i].real();
        const double up = du[i].real();
        const cplx half_iu{0.0, 0.5 * f.hbar * up / pbar};
        plus.values[i] = 0.5 * u - half_iu;
        minus.values[i] = 0.5 * u + half_iu;
    }
    return {plus, minus};
}

} // namespace qtraj
