#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace mechent::ode {

// Dormand-Prince 5(4) tableau.
namespace dp {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b* (difference between the 5th and embedded 4th order weights)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
} // namespace dp

/// One Dormand-Prince step from (t, y) with derivative k1 = f(t, y) already known.
/// Writes the 5th-order solution, its derivative (FSAL) and the local error estimate.
template <class State, class Rhs>
void dopri_step(const Rhs& f, double t, const State& y, const State& k1, double h,
                State& y_out, State& k_out, State& err_out)
{
    using namespace dp;
    const State k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
    const State k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
    const State k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 =
        f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    y_out = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k_out = f(t + h, y_out);
    err_out = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k_out);
}

/// RMS error norm scaled by atol + rtol * max(|y|, |y_new|).
template <class State>
double error_norm(const State& err, const State& y, const State& y_new, double rtol, double atol)
{
    const auto scale = (atol + rtol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array());
    return std::sqrt((err.array() / scale).square().mean());
}

/// Step-size update for a 5th-order method with the usual safety clamps.
inline double next_step(double h, double err)
{
    constexpr double safety = 0.9, min_factor = 0.2, max_factor = 5.0;
    if (err == 0.0)
        return h * max_factor;
    return h * std::clamp(safety * std::pow(err, -0.2), min_factor, max_factor);
}

/// Fixed-step integration of y' = f(t, y) from t0 to t1 with n equal steps.
template <class State, class Rhs>
State integrate_fixed(const Rhs& f, double t0, double t1, State y, int n)
{
    const double h = (t1 - t0) / n;
    State k = f(t0, y);
    State y_new = y, k_new = y, err = y;
    for (int i = 0; i < n; ++i) {
        dopri_step(f, t0 + i * h, y, k, h, y_new, k_new, err);
        y = y_new;
        k = k_new;
    }
    return y;
}

} // namespace mechent::ode
