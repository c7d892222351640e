#pragma once

#include "mechent/dynamics.hpp"
#include "mechent/params.hpp"

#include <limits>
#include <string>
#include <vector>

namespace mechent {

inline constexpr int kMinSamplesPerPeriod = 200;

/// When the per-period entanglement maximum counts as stationary.
struct SettleCriterion {
    double rel_change = 0.01; // between consecutive period maxima
    double min_time = 0.0;    // earliest settle time
    double abs_floor = 1e-6;  // relative change measured against max(|previous|, abs_floor)
    double max_growth = 0.01; // allowed rise of max |V_ij| from the settle period to the record's end

    /// min_time = 10 / gamma_m.
    static SettleCriterion for_params(const SystemParams& p);
};

// Growing: the entanglement maximum looks periodic but the covariance is still
// rising, i.e. the trajectory would trip the divergence flag beyond the horizon.
enum class StationaryStatus { Settled, Diverged, Growing, NotSettled };

const char* to_string(StationaryStatus s);

struct StationaryEntanglement {
    static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

    StationaryStatus status = StationaryStatus::NotSettled;
    double e_n = kNaN;          // max of E_N over the settled period
    double signed_value = kNaN; // max of -ln(2 nu_minus) over that period (may be negative)
    double settle_time = kNaN;
    double divergence_time = kNaN;

    bool settled() const { return status == StationaryStatus::Settled; }
};

struct PeriodMaximum {
    long index = 0;             // period [index * tau, (index + 1) * tau)
    double e_n = 0;
    double signed_value = 0;
    double covariance_scale = 0;
    int samples = 0;
};

/// Maxima over each complete modulation period covered by the record.
std::vector<PeriodMaximum> period_maxima(const TrajectoryRecord& traj, double omega_mod);

/// Per-period maximum of E_N at the first period start T >= settle.min_time
/// whose maximum differs from the previous period's by less than rel_change.
/// A diverged trajectory, or one whose covariance keeps growing after T,
/// yields a non-settled status instead of a number.
StationaryEntanglement stationary_entanglement(const TrajectoryRecord& traj, double omega_mod,
                                               const SettleCriterion& settle);

/// Integrates just long enough to evaluate the stationary entanglement for p.
StationaryEntanglement stationary_for(const SystemParams& p, const IntegratorOptions& opts = {},
                                      int extra_periods = 20);

struct SweepSpec {
    std::string parameter; // a SystemParams key
    std::vector<double> values;
    SystemParams base;
    int extra_periods = 20; // integration horizon beyond 10 / gamma_m, in periods
    IntegratorOptions integrator;
    unsigned threads = 0; // 0 = hardware concurrency
};

struct SweepPoint {
    double value = 0;
    StationaryEntanglement result;
    std::string error; // non-empty when the integration failed
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepPoint> points;
};

SweepResult run_sweep(const SweepSpec& spec);

/// Linear interpolation of the first positive-to-non-positive crossing of the
/// signed stationary value along a sweep; NaN if entanglement never vanishes.
double entanglement_death_point(const SweepResult& sweep);

/// Sweep point with the largest settled stationary E_N; throws if none settled.
const SweepPoint& sweep_peak(const SweepResult& sweep);

/// E_N(t) at `samples_per_period` points per modulation period.
TrajectoryRecord entanglement_timeseries(const SystemParams& p, double t_end,
                                         int samples_per_period = 40,
                                         const IntegratorOptions& opts = {});

/// Last sample time with E_N > 0; NaN if never entangled.
double last_entangled_time(const TrajectoryRecord& traj);

/// Bisects lambda0 in [lo, hi] for the smallest value whose trajectory trips
/// the divergence flag before `horizon`. Requires lo bounded and hi divergent.
double divergence_onset(const SystemParams& base, double lo, double hi, double horizon,
                        double rel_tol = 1e-3, const IntegratorOptions& opts = {});

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn);

} // namespace mechent

#include "mechent/detail/parallel.hpp"
