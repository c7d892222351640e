#include "mechent/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mechent {

namespace {

// Radicand Sigma^2 - 4 det V may dip below zero by rounding for states near
// the symplectic-degenerate line (e.g. vacuum); clamp within this fraction.
constexpr double kRadicandTolerance = 1e-12;

} // namespace

double EntanglementValue::signed_log_negativity() const { return -std::log(2.0 * nu_minus); }

TwoModeCM reduce_mechanical(const Matrix6& v) { return {v.block<4, 4>(0, 0)}; }

namespace {

// Above this entry magnitude the 4x4 determinant in the closed form cancels
// catastrophically (error ~ eps * |V|^4), so nu_minus is taken from the spectrum.
constexpr double kClosedFormMaxEntry = 1e3;

EntanglementValue from_nu_minus(double nu_minus)
{
    EntanglementValue out;
    out.nu_minus = nu_minus;
    out.e_n = std::max(0.0, -std::log(2.0 * nu_minus));
    return out;
}

EntanglementValue closed_form(const TwoModeCM& cm)
{
    const double sigma = cm.a().determinant() + cm.b().determinant() - 2.0 * cm.c().determinant();
    const double det = cm.m.determinant();
    double radicand = sigma * sigma - 4.0 * det;
    if (radicand < 0.0) {
        if (radicand < -kRadicandTolerance * sigma * sigma)
            throw std::domain_error("log_negativity: covariance matrix is not physical");
        radicand = 0.0;
    }
    const double big = sigma + std::sqrt(radicand); // 2 nu_+^2
    if (!(big > 0.0) || !(det > 0.0))
        throw std::domain_error("log_negativity: covariance matrix is not positive definite");
    // nu_-^2 = (sigma - sqrt(radicand)) / 2, rewritten via nu_+^2 nu_-^2 = det
    // to avoid cancellation when nu_+ >> nu_-.
    return from_nu_minus(std::sqrt(2.0 * det / big));
}

// Eigenvalues of J V~ are +-i nu_+-; their absolute error is eps * |V|,
// which keeps nu_minus accurate for strongly stretched states.
EntanglementValue spectral(const TwoModeCM& cm)
{
    Matrix4 vt = cm.m;
    vt.row(3) *= -1.0;
    vt.col(3) *= -1.0;
    Matrix4 j = Matrix4::Zero();
    j(0, 1) = j(2, 3) = 1.0;
    j(1, 0) = j(3, 2) = -1.0;
    const Eigen::EigenSolver<Matrix4> es(j * vt, false);
    if (es.info() != Eigen::Success)
        throw std::domain_error("log_negativity: eigenvalue computation failed");
    const double scale = vt.cwiseAbs().maxCoeff();
    double nu = std::numeric_limits<double>::infinity();
    for (const auto& ev : es.eigenvalues()) {
        if (std::abs(ev.real()) > 1e-6 * scale + 1e-9)
            throw std::domain_error("log_negativity: covariance matrix is not physical");
        nu = std::min(nu, std::abs(ev.imag()));
    }
    if (!(nu > 0.0))
        throw std::domain_error("log_negativity: covariance matrix is not positive definite");
    return from_nu_minus(nu);
}

} // namespace

EntanglementValue log_negativity(const TwoModeCM& cm)
{
    if (cm.m.cwiseAbs().maxCoeff() <= kClosedFormMaxEntry)
        return closed_form(cm);
    return spectral(cm);
}

Matrix6 normal_mode_matrix()
{
    const double r = 1.0 / std::numbers::sqrt2;
    Matrix6 s = Matrix6::Zero();
    for (int k = 0; k < 2; ++k) {
        s(k, k) = r;
        s(k, k + 2) = r;
        s(k + 2, k) = r;
        s(k + 2, k + 2) = -r;
    }
    s(4, 4) = 1.0;
    s(5, 5) = 1.0;
    return s;
}

Matrix6 normal_mode_transform(const Matrix6& v)
{
    static const Matrix6 s = normal_mode_matrix();
    return s * v * s.transpose();
}

Vector6 normal_mode_means(const ClassicalMeanState& st)
{
    Vector6 raw = st.as_vector();
    raw[4] *= std::numbers::sqrt2;
    raw[5] *= std::numbers::sqrt2;
    return normal_mode_matrix() * raw;
}

const char* to_string(Mode m)
{
    switch (m) {
    case Mode::Plus: return "plus";
    case Mode::Minus: return "minus";
    case Mode::Cavity: return "cavity";
    }
    return "?";
}

Mode mode_from_string(const std::string& name)
{
    if (name == "plus" || name == "+")
        return Mode::Plus;
    if (name == "minus" || name == "-")
        return Mode::Minus;
    if (name == "cavity")
        return Mode::Cavity;
    throw std::invalid_argument("unknown mode '" + name + "' (expected plus, minus or cavity)");
}

SingleModeState single_mode_reduce(const Matrix6& v, const ClassicalMeanState& mean, Mode mode)
{
    const int offset = mode == Mode::Plus ? 0 : mode == Mode::Minus ? 2 : 4;
    const Matrix6 w = normal_mode_transform(v);
    const Vector6 m = normal_mode_means(mean);
    return {w.block<2, 2>(offset, offset), m.segment<2>(offset)};
}

double wigner(const Vector2& r, const Matrix2& cm, const Vector2& mean)
{
    const double det = cm.determinant();
    if (!(det > 0.0) || !(cm(0, 0) > 0.0))
        throw std::domain_error("wigner: covariance matrix must be positive definite");
    const Vector2 d = r - mean;
    const double quad = d.dot(cm.inverse() * d);
    return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
}

WignerField wigner_field(const Matrix2& cm, const WignerGrid& grid)
{
    if (grid.points < 2)
        throw std::invalid_argument("wigner_field: need at least two grid points per axis");
    Eigen::SelfAdjointEigenSolver<Matrix2> eig(cm);
    const double sigma = std::sqrt(eig.eigenvalues().maxCoeff());
    const double half = grid.half_width * sigma;
    const double dx = 2.0 * half / (grid.points - 1);

    WignerField f;
    f.x.resize(grid.points);
    for (int i = 0; i < grid.points; ++i)
        f.x[i] = -half + i * dx;
    f.p = f.x;
    f.values.resize(static_cast<std::size_t>(grid.points) * grid.points);
    const Vector2 zero = Vector2::Zero();
    for (int i = 0; i < grid.points; ++i)
        for (int j = 0; j < grid.points; ++j)
            f.values[static_cast<std::size_t>(i) * grid.points + j] =
                wigner(Vector2(f.x[i], f.p[j]), cm, zero);
    return f;
}

} // namespace mechent
