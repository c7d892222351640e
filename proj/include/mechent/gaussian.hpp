#pragma once

#include "mechent/dynamics.hpp"
#include "mechent/types.hpp"

#include <vector>

namespace mechent {

/// Two-mode covariance matrix [[A, C], [C^T, B]] in (q1, p1, q2, p2) order.
struct TwoModeCM {
    Matrix4 m = Matrix4::Zero();

    Matrix2 a() const { return m.block<2, 2>(0, 0); }
    Matrix2 b() const { return m.block<2, 2>(2, 2); }
    Matrix2 c() const { return m.block<2, 2>(0, 2); }
};

struct EntanglementValue {
    double e_n = 0;      // max(0, -ln 2 nu_minus)
    double nu_minus = 0;

    /// Unclamped -ln(2 nu_minus); positive exactly when entangled.
    double signed_log_negativity() const;
};

TwoModeCM reduce_mechanical(const Matrix6& v);

/// Logarithmic negativity via the closed-form two-mode symplectic invariants.
/// Throws std::domain_error for covariance matrices that violate the
/// uncertainty principle beyond numerical tolerance.
EntanglementValue log_negativity(const TwoModeCM& cm);

/// Orthogonal, symplectic map (q1, p1, q2, p2) -> (q+, p+, q-, p-) with the
/// cavity quadratures untouched. It is its own inverse.
Matrix6 normal_mode_matrix();
Matrix6 normal_mode_transform(const Matrix6& v);

/// Quadrature means in normal-mode ordering; cavity means as X = sqrt(2) Re<a>, Y = sqrt(2) Im<a>.
Vector6 normal_mode_means(const ClassicalMeanState& s);

enum class Mode { Plus, Minus, Cavity };

const char* to_string(Mode m);
Mode mode_from_string(const std::string& name);

struct SingleModeState {
    Matrix2 cm = Matrix2::Zero();
    Vector2 mean = Vector2::Zero();
};

SingleModeState single_mode_reduce(const Matrix6& v, const ClassicalMeanState& mean, Mode mode);

/// Gaussian Wigner density of a single mode at phase-space point r.
double wigner(const Vector2& r, const Matrix2& cm, const Vector2& mean);

struct WignerGrid {
    int points = 201;        // per axis
    double half_width = 6.0; // in standard deviations of the largest CM eigenvalue
};

struct WignerField {
    std::vector<double> x;      // axis values
    std::vector<double> p;
    std::vector<double> values; // row-major, values[i * p.size() + j] = W(x[i], p[j])
};

/// Evaluates the zero-mean (fluctuation) Wigner function of `cm` on a square grid.
WignerField wigner_field(const Matrix2& cm, const WignerGrid& grid = {});

} // namespace mechent
