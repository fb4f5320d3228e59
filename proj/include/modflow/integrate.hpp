#ifndef MODFLOW_INTEGRATE_HPP
#define MODFLOW_INTEGRATE_HPP

#include <functional>
#include <string>
#include <vector>

#include "modflow/core.hpp"
#include "modflow/system.hpp"

namespace modflow
{

// Straight segment t0 -> t1 in the system's own time. When `upper_half_plane`
// is set both endpoints (hence the whole segment) must have Im t > im_floor.
struct PathSegment {
    cplx t0 = 0.0;
    cplx t1 = 1.0;
    bool upper_half_plane = false;
};

struct Sample {
    cplx t;
    std::vector<cplx> state;
    double error = 0.0;  // normalized local error estimate of the step that produced it
};

struct StepStats {
    int accepted = 0;
    int rejected = 0;
    int evaluations = 0;
    double min_step = 1.0;  // smallest accepted step in sigma
};

struct Trajectory {
    SystemId system;
    std::vector<Sample> samples;
    StepStats stats;
    std::vector<std::string> invariant_names;
    std::vector<std::vector<cplx>> invariants;  // one row per sample

    SystemState state(std::size_t i) const { return {system, samples.at(i).state}; }
    const Sample &front() const { return samples.front(); }
    const Sample &back() const { return samples.back(); }
};

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    int min_interior = 64;
    // Attempted steps before giving up with NoConvergence.
    int max_steps = 200000;
    // Optional admissibility test; a false result raises DomainEscape.
    std::function<bool(const std::vector<cplx> &)> admissible;
};

// Dormand-Prince 5(4) with PI step control on dX/dsigma = (t1 - t0) V(X),
// sigma in [0, 1].
Trajectory integrate(const SystemState &init, const PathSegment &path, const IntegrateOptions &opt);
Trajectory integrate(const SystemState &init, const PathSegment &path, double rtol, double atol);

// Samples at the n + 1 uniform nodes t0 + j (t1 - t0) / n, obtained by
// integrating the n sub-segments in turn.
Trajectory integrate_uniform(const SystemState &init, const PathSegment &path, int n, const IntegrateOptions &opt);

} // namespace modflow

#endif
