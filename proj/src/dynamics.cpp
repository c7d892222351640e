#include "mechent/dynamics.hpp"

#include "mechent/gaussian.hpp"
#include "mechent/ode.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mechent {

Vector6 ClassicalMeanState::as_vector() const
{
    Vector6 v;
    v << q1, p1, q2, p2, a_re, a_im;
    return v;
}

ClassicalMeanState ClassicalMeanState::from_vector(const Vector6& v)
{
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

ClassicalMeanState classical_rhs(double t, const ClassicalMeanState& s, const SystemParams& p)
{
    const double lambda = mechanical_coupling(t, p);
    const double drive = drive_amplitude(t, p);
    const double photons = s.a_re * s.a_re + s.a_im * s.a_im;
    const double detuning = p.delta0 + p.g * (s.q1 + s.q2);

    ClassicalMeanState d;
    d.q1 = p.omega_m * s.p1;
    d.p1 = -p.omega_m * s.q1 - p.g * photons - lambda * s.q2 - p.gamma_m * s.p1;
    d.q2 = p.omega_m * s.p2;
    d.p2 = -p.omega_m * s.q2 - p.g * photons - lambda * s.q1 - p.gamma_m * s.p2;
    // d<a>/dt = -(i detuning + kappa) <a> + E(t)
    d.a_re = -p.kappa * s.a_re + detuning * s.a_im + drive;
    d.a_im = -p.kappa * s.a_im - detuning * s.a_re;
    return d;
}

DriftMatrix drift_matrix(double t, const ClassicalMeanState& s, const SystemParams& p)
{
    DriftMatrix d;
    d.g_x = -std::numbers::sqrt2 * p.g * s.a_re;
    d.g_y = -std::numbers::sqrt2 * p.g * s.a_im;
    d.detuning = p.delta0 + p.g * (s.q1 + s.q2);
    const double lambda = mechanical_coupling(t, p);
    const double w = p.omega_m;

    auto& a = d.a;
    a.setZero();
    a(0, 1) = w;
    a(1, 0) = -w;
    a(1, 1) = -p.gamma_m;
    a(1, 2) = -lambda;
    a(1, 4) = d.g_x;
    a(1, 5) = d.g_y;
    a(2, 3) = w;
    a(3, 0) = -lambda;
    a(3, 2) = -w;
    a(3, 3) = -p.gamma_m;
    a(3, 4) = d.g_x;
    a(3, 5) = d.g_y;
    a(4, 0) = -d.g_y;
    a(4, 2) = -d.g_y;
    a(4, 4) = -p.kappa;
    a(4, 5) = d.detuning;
    a(5, 0) = d.g_x;
    a(5, 2) = d.g_x;
    a(5, 4) = -d.detuning;
    a(5, 5) = -p.kappa;
    return d;
}

Matrix6 covariance_rhs(const Matrix6& v, const DriftMatrix& a, const NoiseMatrix& d)
{
    const Matrix6 av = a.a * v;
    Matrix6 out = av + av.transpose();
    out.diagonal() += d.diagonal;
    return out;
}

PackedState pack_state(const ClassicalMeanState& s, const Matrix6& v)
{
    PackedState y;
    y.head<6>() = s.as_vector();
    int k = 6;
    for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j)
            y[k++] = v(i, j);
    return y;
}

void unpack_state(const PackedState& y, ClassicalMeanState& s, Matrix6& v)
{
    s = ClassicalMeanState::from_vector(y.head<6>());
    int k = 6;
    for (int i = 0; i < kDim; ++i)
        for (int j = i; j < kDim; ++j) {
            v(i, j) = y[k];
            v(j, i) = y[k];
            ++k;
        }
}

namespace {

bool covariance_diverged(const Matrix6& v, double threshold)
{
    return !(v.trace() <= threshold) || !(v.cwiseAbs().maxCoeff() <= threshold);
}

} // namespace

TrajectoryRecord integrate(const SystemParams& p, double t_end, const IntegratorOptions& opts)
{
    if (!(t_end > 0.0))
        throw std::invalid_argument("integrate: t_end must be positive");
    if (!(p.omega_mod > 0.0))
        throw std::invalid_argument("integrate: omega_mod must be positive");

    const double tau = p.period();
    const double h_max = opts.max_step > 0.0 ? opts.max_step : tau / 200.0;
    const double sample_every = opts.sample_every > 0.0 ? opts.sample_every : tau / 200.0;
    const double n_th = thermal_occupancy(p.temp_ratio);
    const NoiseMatrix noise = noise_matrix(p, n_th);

    auto rhs = [&](double t, const PackedState& y) -> PackedState {
        ClassicalMeanState s;
        Matrix6 v;
        unpack_state(y, s, v);
        const DriftMatrix a = drift_matrix(t, s, p);
        const ClassicalMeanState ds = classical_rhs(t, s, p);
        return pack_state(ds, covariance_rhs(v, a, noise));
    };

    TrajectoryRecord rec;
    ClassicalMeanState mean;
    Matrix6 cov = initial_covariance(n_th);
    PackedState y = pack_state(mean, cov);
    double t = 0.0;

    auto observe = [&](double time, bool sample, bool snapshot) {
        if (sample && time >= opts.record_from) {
            EntanglementValue en;
            try {
                en = log_negativity(reduce_mechanical(cov));
            } catch (const std::domain_error& e) {
                throw IntegrationError(std::string("unphysical covariance: ") + e.what(), time);
            }
            rec.times.push_back(time);
            rec.log_negativity.push_back(en.e_n);
            rec.nu_minus.push_back(en.nu_minus);
            rec.covariance_scale.push_back(cov.cwiseAbs().maxCoeff());
        }
        if (snapshot)
            rec.snapshots.push_back({time, mean, cov});
    };

    long sample_index = 0;
    long snapshot_index = 0;
    auto next_sample = [&] { return sample_index * sample_every; };
    auto next_snapshot = [&] {
        return opts.snapshot_every > 0.0 ? snapshot_index * opts.snapshot_every
                                         : std::numeric_limits<double>::infinity();
    };

    // events at t = 0
    {
        const bool s0 = next_sample() <= 0.0;
        const bool n0 = next_snapshot() <= 0.0;
        observe(0.0, s0, n0);
        if (s0)
            ++sample_index;
        if (n0)
            ++snapshot_index;
    }

    const bool fixed = opts.fixed_step > 0.0;
    double h = fixed ? opts.fixed_step : 0.1 * h_max;
    PackedState k1 = rhs(t, y);
    PackedState y_new, k_new, err;

    while (t < t_end) {
        const double next_event = std::min({next_sample(), next_snapshot(), t_end});
        const double to_event = next_event - t;
        const double min_step = 1e-12 * std::max(1.0, std::abs(t));
        double step = fixed ? opts.fixed_step : std::min(h, h_max);
        // absorb a sliver left over by rounding rather than taking a tiny extra step
        const bool lands_on_event = step >= to_event - min_step;
        if (lands_on_event)
            step = to_event;
        else if (step < min_step)
            throw IntegrationError("step size underflow", t);

        ode::dopri_step(rhs, t, y, k1, step, y_new, k_new, err);
        const bool finite = y_new.allFinite() && k_new.allFinite();

        if (!fixed) {
            const double e = finite ? ode::error_norm(err, y, y_new, opts.rtol, opts.atol)
                                    : std::numeric_limits<double>::infinity();
            if (!(e <= 1.0)) {
                ++rec.rejected_steps;
                h = std::isfinite(e) ? ode::next_step(step, e) : 0.25 * step;
                continue;
            }
            // only grow h from a full (unclipped) step
            const double proposal = ode::next_step(step, e);
            if (!lands_on_event || proposal < h)
                h = proposal;
        } else if (!finite) {
            throw IntegrationError("non-finite state", t);
        }

        ++rec.accepted_steps;
        t = lands_on_event ? next_event : t + step;
        y = y_new;
        k1 = k_new;
        unpack_state(y, mean, cov);

        if (covariance_diverged(cov, opts.divergence_threshold)) {
            rec.diverged = true;
            rec.divergence_time = t;
            break;
        }

        // coincident grids (e.g. snapshots on a multiple of the sample spacing) differ by rounding
        const bool at_sample = lands_on_event && next_sample() - t <= min_step;
        const bool at_snapshot = lands_on_event && next_snapshot() - t <= min_step;
        observe(t, at_sample, at_snapshot);
        if (at_sample)
            ++sample_index;
        if (at_snapshot)
            ++snapshot_index;
    }

    rec.final_time = t;
    rec.final_mean = mean;
    rec.final_covariance = cov;
    return rec;
}

} // namespace mechent
