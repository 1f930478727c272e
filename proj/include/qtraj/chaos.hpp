#pragma once

#include <functional>
#include <vector>

#include "qtraj/bohm.hpp"
#include "qtraj/classical.hpp"

namespace qtraj {

struct LyapunovSeries {
    std::vector<double> times;      // window end times
    std::vector<double> lambda;     // running estimate (1/time)
    std::vector<double> separation; // separation before renormalization
    double tau = 0.0;
    double delta0 = 0.0;

    double final_lambda() const { return lambda.empty() ? 0.0 : lambda.back(); }
};

// Advances a pair of state vectors from t0 to t1 under identical dynamics
// (shared flow cache for Bohmian pairs).
using PairAdvance =
    std::function<void(std::vector<double>& a, std::vector<double>& b, double t0, double t1)>;

// Benettin two-trajectory renormalization: evolve the pair over windows of
// length tau, accumulate log(|delta|/delta0), rescale delta back to delta0.
// Throws "tau too long" if the separation reaches domain_scale before the
// first renormalization.
LyapunovSeries finite_time_lyapunov(const PairAdvance& advance, const std::vector<double>& x0,
                                    const std::vector<double>& offset_direction, double delta0,
                                    double t0, double t1, double tau, double domain_scale);

// Pair stepper for Bohmian transport in a shared FlowSource (state = position).
PairAdvance bohmian_pair(FlowSource& flow, double dt_traj, double wall_eps_rel = 1e-9);

// Pair stepper for the exact classical billiard (state = (q1,q2,p1,p2)).
PairAdvance classical_billiard_pair(double mass, double L);

} // namespace qtraj
