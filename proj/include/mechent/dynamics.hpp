#pragma once

#include "mechent/params.hpp"
#include "mechent/types.hpp"

#include <vector>

namespace mechent {

/// Classical mean values of the mechanical quadratures and the cavity amplitude.
struct ClassicalMeanState {
    double q1 = 0, p1 = 0, q2 = 0, p2 = 0;
    double a_re = 0, a_im = 0;

    Vector6 as_vector() const;
    static ClassicalMeanState from_vector(const Vector6& v);
};

ClassicalMeanState classical_rhs(double t, const ClassicalMeanState& s, const SystemParams& p);

/// Linear generator of the quadrature fluctuations, ordered (q1, p1, q2, p2, X, Y).
struct DriftMatrix {
    Matrix6 a = Matrix6::Zero();
    double g_x = 0, g_y = 0;  // G = -sqrt(2) g <a> = g_x + i g_y
    double detuning = 0;      // effective detuning Delta0 + g (q1 + q2)
};

DriftMatrix drift_matrix(double t, const ClassicalMeanState& s, const SystemParams& p);

/// dV/dt = A V + V A^T + D.
Matrix6 covariance_rhs(const Matrix6& v, const DriftMatrix& a, const NoiseMatrix& d);

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double max_step = 0.0;              // 0 means period / 200
    double fixed_step = 0.0;            // > 0 disables error control
    double divergence_threshold = 1e12; // on trace(V) and every |V_ij|
    double sample_every = 0.0;          // 0 means period / 200
    double record_from = 0.0;           // samples earlier than this are not stored
    double snapshot_every = 0.0;        // 0 disables covariance snapshots
};

struct CovarianceSnapshot {
    double t = 0;
    ClassicalMeanState mean;
    Matrix6 v = Matrix6::Zero();
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> log_negativity; // E_N, clamped at zero
    std::vector<double> nu_minus;       // smallest partially transposed symplectic eigenvalue
    std::vector<double> covariance_scale; // max |V_ij|
    std::vector<CovarianceSnapshot> snapshots;

    bool diverged = false;
    double divergence_time = 0;

    double final_time = 0;
    ClassicalMeanState final_mean;
    Matrix6 final_covariance = Matrix6::Zero();

    long accepted_steps = 0;
    long rejected_steps = 0;
};

/// Jointly integrates the classical means (6 values) and the 21 independent
/// covariance entries from the empty-cavity, oscillators-at-rest state with
/// thermal fluctuations. Stops early when the covariance diverges.
TrajectoryRecord integrate(const SystemParams& p, double t_end, const IntegratorOptions& opts = {});

/// Packed state helpers (upper triangle, row-major) exposed for tests.
using PackedState = Eigen::Matrix<double, 27, 1>;
PackedState pack_state(const ClassicalMeanState& s, const Matrix6& v);
void unpack_state(const PackedState& y, ClassicalMeanState& s, Matrix6& v);

} // namespace mechent
