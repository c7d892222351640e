#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace mechent {

using Matrix2 = Eigen::Matrix<double, 2, 2>;
using Matrix4 = Eigen::Matrix<double, 4, 4>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector2 = Eigen::Matrix<double, 2, 1>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

// Quadrature ordering used throughout: (q1, p1, q2, p2, X, Y).
inline constexpr int kModes = 3;
inline constexpr int kDim = 2 * kModes;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when the ODE solver cannot continue (step underflow or non-finite state).
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Raised when a requested quantity lies beyond the point where the covariance diverged.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(double time)
        : std::runtime_error("covariance diverged at t=" + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace mechent
