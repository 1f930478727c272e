#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "qtraj/exec.hpp"
#include "qtraj/madelung.hpp"
#include "qtraj/propagator.hpp"

namespace qtraj {

struct TrajectoryEnsemble {
    enum class Kind { Bohmian, Classical, BipolarPlus, BipolarMinus };

    Kind kind = Kind::Bohmian;
    std::uint64_t seed = 0;
    int dim = 1;
    int n_particles = 0;
    std::vector<double> times;
    std::vector<std::array<double, 2>> positions; // times.size() * n_particles, row-major
    long node_flags = 0;
    long clamp_events = 0;

    const std::array<double, 2>& at(std::size_t t_idx, int particle) const {
        return positions[t_idx * n_particles + particle];
    }
};

// Natural cubic spline through (x_i, y_i); evaluation clamps to [x_front, x_back].
class CubicSpline {
  public:
    void build(std::vector<double> x, std::vector<double> y);
    double eval(double x) const;

  private:
    std::vector<double> x_, y_, y2_;
};

// Time-dependent velocity field sampled by the trajectory integrator.
// seek() is single-writer; velocity() is read-only and thread-safe afterwards.
class FlowSource {
  public:
    virtual ~FlowSource() = default;
    virtual int dim() const = 0;
    virtual const Grid& domain() const = 0;
    virtual void seek(double t) = 0;
    // flagged is set when the node policy had to substitute a nearby velocity
    virtual std::array<double, 2> velocity(const std::array<double, 2>& q, bool* flagged) const = 0;
    virtual FlowSnapshot snapshot(double t) const = 0;
};

// 1D flow interpolated from cached FlowSnapshot frames (cubic spline in q,
// linear in t).  A single frame gives a frozen (time-independent) flow.
class InterpolatedFlow1D : public FlowSource {
  public:
    explicit InterpolatedFlow1D(std::vector<FlowSnapshot> frames);

    int dim() const override { return 1; }
    const Grid& domain() const override { return frames_.front().grid; }
    void seek(double t) override;
    std::array<double, 2> velocity(const std::array<double, 2>& q, bool* flagged) const override;
    FlowSnapshot snapshot(double t) const override;

  private:
    std::vector<FlowSnapshot> frames_;
    CubicSpline spline_;
    std::vector<double> node_x_;   // grid coordinates
    std::vector<std::uint8_t> mask_;
    std::vector<double> v_;        // current blended velocity samples
    double t_current_ = 0.0;
};

// Exact billiard flow: velocity synthesized spectrally at arbitrary positions,
// no spatial interpolation.  seek(t) rotates the eigenmode coefficients.
class BilliardFlow : public FlowSource {
  public:
    BilliardFlow(SpectralCoeffs coeffs, const Grid& snapshot_grid,
                 double eps_node = kDefaultNodeEps);

    int dim() const override { return 2; }
    const Grid& domain() const override { return grid_; }
    void seek(double t) override;
    std::array<double, 2> velocity(const std::array<double, 2>& q, bool* flagged) const override;
    FlowSnapshot snapshot(double t) const override;

    // psi and its gradient at one point from the rotated coefficients
    void synthesize(const std::array<double, 2>& q, cplx& psi, cplx& dpsi_dx, cplx& dpsi_dy) const;

  private:
    SpectralCoeffs coeffs_;
    Grid grid_;
    std::vector<cplx> rotated_;
    double rho_ref_ = 1.0; // node threshold scale
    double eps_node_;
};

// N i.i.d. draws from the snapshot density (inverse CDF in 1D, rejection in
// 2D); deterministic given the seed, order-independent across particles.
std::vector<std::array<double, 2>> sample_initial(const FlowSnapshot& flow, int n,
                                                  std::uint64_t seed);

std::array<double, 2> velocity_at(const FlowSnapshot& flow, const std::array<double, 2>& q);

struct IntegrateOptions {
    double dt = 1e-3;
    int sample_stride = 1;      // store every k-th step
    exec::Policy policy = exec::Policy::Parallel;
    double wall_eps_rel = 1e-9; // clamp distance, relative to box size
};

// Classic RK4 transport of dq/dt = v(q, t) for all particles.
TrajectoryEnsemble integrate_ensemble(FlowSource& flow,
                                      const std::vector<std::array<double, 2>>& initial,
                                      double t0, double t1, const IntegrateOptions& opt);

// Kolmogorov-Smirnov distance between the ensemble positions and the density
// of the snapshot; in 2D the max over both marginals and the radial
// coordinate about the density centroid.
double equivariance_test(const std::vector<std::array<double, 2>>& positions,
                         const FlowSnapshot& flow);

// Two-wave split of a real 1D stationary state in a classically allowed
// region: psi_pm = (u -/+ i hbar u'/pbar)/2 with pbar = sqrt(2m(E-V)).
std::pair<WaveField, WaveField> bipolar_decompose_1d(const WaveField& f, double E,
                                                     const Potential1D& potential);

} // namespace qtraj
