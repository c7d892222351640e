#include "mechent/wigner_snapshot.hpp"

namespace mechent {

WignerSnapshot wigner_snapshot(const SystemParams& p, double t, Mode mode, const WignerGrid& grid,
                               const IntegratorOptions& opts)
{
    WignerSnapshot snap;
    snap.t = t;
    snap.mode = mode;

    Matrix6 cov = initial_covariance(thermal_occupancy(p.temp_ratio));
    ClassicalMeanState mean;
    if (t > 0.0) {
        IntegratorOptions o = opts;
        o.record_from = t; // only the endpoint matters
        const TrajectoryRecord rec = integrate(p, t, o);
        if (rec.diverged)
            throw DivergenceError(rec.divergence_time);
        cov = rec.final_covariance;
        mean = rec.final_mean;
    }
    snap.covariance = cov;
    snap.mean = mean;
    snap.state = single_mode_reduce(cov, mean, mode);
    snap.field = wigner_field(snap.state.cm, grid);
    return snap;
}

} // namespace mechent
