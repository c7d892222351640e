#include "mechent/analysis.hpp"

#include "mechent/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mechent {

namespace {

// Tolerates rounding in t / tau for samples placed on multiples of tau / n.
constexpr double kPeriodSlack = 1e-9;

long period_index(double t, double tau) { return static_cast<long>(std::floor(t / tau + kPeriodSlack)); }

} // namespace

SettleCriterion SettleCriterion::for_params(const SystemParams& p)
{
    SettleCriterion s;
    s.min_time = 10.0 / p.gamma_m;
    return s;
}

const char* to_string(StationaryStatus s)
{
    switch (s) {
    case StationaryStatus::Settled: return "settled";
    case StationaryStatus::Diverged: return "diverged";
    case StationaryStatus::Growing: return "growing";
    case StationaryStatus::NotSettled: return "not_settled";
    }
    return "?";
}

std::vector<PeriodMaximum> period_maxima(const TrajectoryRecord& traj, double omega_mod)
{
    std::vector<PeriodMaximum> out;
    if (traj.times.empty())
        return out;
    const double tau = 2.0 * std::numbers::pi / omega_mod;
    const long first = period_index(traj.times.front(), tau);
    const long last = period_index(traj.times.back(), tau);
    // a period is complete when recording started at its beginning and continued past its end
    const bool first_complete = traj.times.front() <= first * tau * (1.0 + kPeriodSlack);

    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const long k = period_index(traj.times[i], tau);
        if (k == last || (k == first && !first_complete))
            continue;
        if (out.empty() || out.back().index != k)
            out.push_back({k, traj.log_negativity[i], -std::log(2.0 * traj.nu_minus[i]),
                           traj.covariance_scale[i], 0});
        auto& pm = out.back();
        pm.covariance_scale = std::max(pm.covariance_scale, traj.covariance_scale[i]);
        pm.e_n = std::max(pm.e_n, traj.log_negativity[i]);
        pm.signed_value = std::max(pm.signed_value, -std::log(2.0 * traj.nu_minus[i]));
        ++pm.samples;
    }
    return out;
}

StationaryEntanglement stationary_entanglement(const TrajectoryRecord& traj, double omega_mod,
                                               const SettleCriterion& settle)
{
    StationaryEntanglement r;
    if (traj.diverged) {
        r.status = StationaryStatus::Diverged;
        r.divergence_time = traj.divergence_time;
        return r;
    }
    const double tau = 2.0 * std::numbers::pi / omega_mod;
    const auto maxima = period_maxima(traj, omega_mod);
    for (std::size_t i = 1; i < maxima.size(); ++i) {
        const auto& cur = maxima[i];
        const auto& prev = maxima[i - 1];
        if (cur.index != prev.index + 1)
            continue;
        if (cur.samples < kMinSamplesPerPeriod)
            throw std::invalid_argument("stationary_entanglement: fewer than 200 samples per period");
        const double start = cur.index * tau;
        if (start < settle.min_time)
            continue;
        const double scale = std::max(std::abs(prev.e_n), settle.abs_floor);
        if (std::abs(cur.e_n - prev.e_n) < settle.rel_change * scale) {
            r.settle_time = start;
            if (maxima.back().covariance_scale > (1.0 + settle.max_growth) * prev.covariance_scale) {
                r.status = StationaryStatus::Growing;
                return r;
            }
            r.status = StationaryStatus::Settled;
            r.e_n = cur.e_n;
            r.signed_value = cur.signed_value;
            return r;
        }
    }
    return r;
}

StationaryEntanglement stationary_for(const SystemParams& p, const IntegratorOptions& opts,
                                      int extra_periods)
{
    const SettleCriterion settle = SettleCriterion::for_params(p);
    const double tau = p.period();
    IntegratorOptions o = opts;
    o.sample_every = tau / kMinSamplesPerPeriod;
    // keep the period preceding the first admissible settle time
    const double first_start = std::ceil(settle.min_time / tau - kPeriodSlack) * tau;
    o.record_from = std::max(0.0, first_start - tau - 0.5 * o.sample_every);
    const double t_end = first_start + (extra_periods + 1) * tau;
    return stationary_entanglement(integrate(p, t_end, o), p.omega_mod, settle);
}

SweepResult run_sweep(const SweepSpec& spec)
{
    if (spec.values.empty())
        throw std::invalid_argument("run_sweep: no sweep values");
    for (double v : spec.values)
        if (!std::isfinite(v))
            throw std::invalid_argument("run_sweep: sweep values must be finite");
    {
        SystemParams probe = spec.base;
        set_param(probe, spec.parameter, spec.values.front()); // validates the name
    }

    SweepResult out;
    out.parameter = spec.parameter;
    out.points.resize(spec.values.size());
    parallel_for(spec.values.size(), spec.threads, [&](std::size_t i) {
        SweepPoint& pt = out.points[i];
        pt.value = spec.values[i];
        SystemParams p = spec.base;
        set_param(p, spec.parameter, pt.value);
        try {
            pt.result = stationary_for(p, spec.integrator, spec.extra_periods);
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
    });
    return out;
}

double entanglement_death_point(const SweepResult& sweep)
{
    const auto& pts = sweep.points;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto& a = pts[i - 1].result;
        const auto& b = pts[i].result;
        if (!a.settled() || !b.settled())
            continue;
        if (a.signed_value > 0.0 && b.signed_value <= 0.0) {
            const double f = a.signed_value / (a.signed_value - b.signed_value);
            return pts[i - 1].value + f * (pts[i].value - pts[i - 1].value);
        }
    }
    return StationaryEntanglement::kNaN;
}

const SweepPoint& sweep_peak(const SweepResult& sweep)
{
    const SweepPoint* best = nullptr;
    for (const auto& pt : sweep.points)
        if (pt.result.settled() && (!best || pt.result.e_n > best->result.e_n))
            best = &pt;
    if (!best)
        throw std::runtime_error("sweep_peak: no settled sweep point");
    return *best;
}

TrajectoryRecord entanglement_timeseries(const SystemParams& p, double t_end, int samples_per_period,
                                         const IntegratorOptions& opts)
{
    if (samples_per_period < 1)
        throw std::invalid_argument("entanglement_timeseries: samples_per_period must be positive");
    IntegratorOptions o = opts;
    o.sample_every = p.period() / samples_per_period;
    return integrate(p, t_end, o);
}

double last_entangled_time(const TrajectoryRecord& traj)
{
    for (std::size_t i = traj.times.size(); i-- > 0;)
        if (traj.log_negativity[i] > 0.0)
            return traj.times[i];
    return StationaryEntanglement::kNaN;
}

double divergence_onset(const SystemParams& base, double lo, double hi, double horizon,
                        double rel_tol, const IntegratorOptions& opts)
{
    IntegratorOptions o = opts;
    o.record_from = 2.0 * horizon; // nothing needs to be stored
    auto diverges = [&](double lambda) {
        SystemParams p = base;
        p.lambda0 = lambda;
        return integrate(p, horizon, o).diverged;
    };
    if (diverges(lo))
        throw std::invalid_argument("divergence_onset: lower bracket already diverges");
    if (!diverges(hi))
        throw std::invalid_argument("divergence_onset: upper bracket stays bounded");
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (diverges(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace mechent
