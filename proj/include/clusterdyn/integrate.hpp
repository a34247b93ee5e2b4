#ifndef CLUSTERDYN_INTEGRATE_HPP
#define CLUSTERDYN_INTEGRATE_HPP

#include "clusterdyn/systems.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace clusterdyn {

enum class Method {
    rk4_fixed,
    rk45_adaptive // Dormand-Prince 5(4), FSAL
};

struct IntegratorConfig {
    Method method = Method::rk45_adaptive;
    double t0 = 0.0;
    double t1 = 1.0;
    double dt = 0.0;     // step for rk4_fixed; initial step guess for rk45 (0: auto)
    double rtol = 1e-10; // rk45 only
    double atol = 1e-12; // rk45 only
    double sample_every = 0.0; // sampling grid spacing; <= 0 records every accepted step
};

struct StepStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
    double max_err_ratio = 0.0; // largest accepted error estimate / tolerance
};

struct Trajectory {
    SystemKind system;
    std::size_t n_sites = 0;
    std::vector<double> times;
    // Flat site coordinates per sample, layout (s3_1, s+_1, s-_1, ...), size 3N.
    std::vector<std::vector<double>> states;
    std::vector<int> tracked_clusters;
    // clusters[sample][j] is cluster m = tracked_clusters[j].
    std::vector<std::vector<ClusterVars>> clusters;
    // Invariant values per sample, columns named by invariant_names:
    // Casimir tower, conserved deltas, energy.
    std::vector<std::string> invariant_names;
    std::vector<std::vector<double>> invariants;
    StepStats stats;
};

// Integrates the chain from c0 over [cfg.t0, cfg.t1]. Samples land on the
// grid t0 + k*sample_every (cubic Hermite between accepted steps) and the
// exact endpoint t1. Throws numerics_error when the state blows up or the
// adaptive step collapses.
Trajectory integrate(const SystemKind& k, const ChainState& c0, const IntegratorConfig& cfg,
                     const std::vector<int>& tracked_clusters = {});

// Max over samples of |v(t) - v(t0)| / max(1, |v(t0)|), one entry per
// invariant column.
std::vector<std::pair<std::string, double>> invariant_drift(const Trajectory& tr);

// First-return time of tracked cluster m to its initial point, located by
// parabolic interpolation of the squared phase-space distance. Throws
// numerics_error when no return completes inside the window.
double measure_period(const Trajectory& tr, int m);

} // namespace clusterdyn

#endif
