#include <doctest.h>

#include "mechent/gaussian.hpp"
#include "mechent/params.hpp"
#include "mechent/wigner_snapshot.hpp"
#include "oracles/quadrature.hpp"
#include "oracles/symplectic.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace mechent;
using doctest::Approx;
using Eigen::Vector4d;

namespace {

Matrix4 tmsv(double r)
{
    Matrix4 m = Matrix4::Zero();
    const double c = 0.5 * std::cosh(2 * r), s = 0.5 * std::sinh(2 * r);
    m.diagonal().setConstant(c);
    m(0, 2) = m(2, 0) = s;
    m(1, 3) = m(3, 1) = -s;
    return m;
}

// A two-mode gate acting on modes (i, j) of a three-mode system.
Matrix6 embed(const Matrix4& gate, int i, int j)
{
    Matrix6 s = Matrix6::Identity();
    const int idx[4] = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            s(idx[r], idx[c]) = gate(r, c);
    return s;
}

Matrix6 random_three_mode_cm(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix6 v = Matrix6::Zero();
    v.topLeftCorner<4, 4>() = oracle::random_physical_cm(rng);
    v(4, 4) = v(5, 5) = 0.5 + u(rng);
    const Matrix6 s = embed(oracle::two_mode_squeezer(0.8 * u(rng)), 1, 2) *
                      embed(oracle::beam_splitter(3.0 * u(rng)), 0, 2);
    return s * v * s.transpose();
}

} // namespace

TEST_CASE("mechanical reduction")
{
    Vector6 d;
    d << 2, 2, 2, 2, 7, 7;
    CHECK(reduce_mechanical(d.asDiagonal()).m.isApprox(Matrix4(Vector4d(2, 2, 2, 2).asDiagonal())));
    CHECK(reduce_mechanical(initial_covariance(0.0)).m.isApprox(0.5 * Matrix4::Identity()));

    Matrix6 v = Matrix6::Random();
    v = (v + v.transpose()).eval();
    const TwoModeCM cm = reduce_mechanical(v);
    CHECK(cm.m == v.topLeftCorner<4, 4>());
    CHECK(cm.a() == v.block<2, 2>(0, 0));
    CHECK(cm.b() == v.block<2, 2>(2, 2));
    CHECK(cm.c() == v.block<2, 2>(0, 2));
}

TEST_CASE("logarithmic negativity: reference states")
{
    const auto vac = log_negativity({0.5 * Matrix4::Identity()});
    CHECK(vac.nu_minus == Approx(0.5));
    CHECK(vac.e_n == 0.0);

    const auto sq = log_negativity({tmsv(0.5)});
    CHECK(sq.e_n == Approx(1.0).epsilon(1e-12));
    CHECK(sq.nu_minus == Approx(0.5 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(sq.signed_log_negativity() == Approx(1.0).epsilon(1e-12));

    for (double r : {0.01, 0.2, 1.3, 2.0})
        CHECK(log_negativity({tmsv(r)}).e_n == Approx(2 * r).epsilon(1e-10));

    const auto thermal = log_negativity({2.3 * Matrix4::Identity()});
    CHECK(thermal.e_n == 0.0);
    CHECK(thermal.nu_minus >= 0.5);
    CHECK(thermal.signed_log_negativity() < 0.0);
}

TEST_CASE("logarithmic negativity: strongly stretched states use the spectral route")
{
    // cosh(2r)/2 > 1e3 puts these above the closed-form range
    // eigenvalues carry an absolute error ~ eps |V|, i.e. a relative error |V| / nu_minus
    for (double r : {4.2, 5.0, 6.0}) {
        const Matrix4 m = tmsv(r);
        const auto v = log_negativity({m});
        CHECK(std::abs(v.e_n - 2 * r) < 1e-13 * m.maxCoeff() / v.nu_minus);
    }
    // a large local squeeze on an entangled state leaves E_N unchanged
    const Matrix4 s = oracle::local_ops(4.5, 0.3, -4.5, 1.1);
    const Matrix4 v = s * tmsv(0.4) * s.transpose();
    REQUIRE(v.cwiseAbs().maxCoeff() > 1e3);
    CHECK(log_negativity({v}).e_n == Approx(0.8).epsilon(1e-8));
}

TEST_CASE("logarithmic negativity: rejects non-positive input")
{
    Matrix4 bad = Vector4d(1, 1, 1, -1).asDiagonal();
    CHECK_THROWS_AS(log_negativity({bad}), std::domain_error);
    CHECK_THROWS_AS(log_negativity({Matrix4::Zero()}), std::domain_error);
}

TEST_CASE("logarithmic negativity: random physical states")
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    int entangled = 0, separable = 0;
    for (int k = 0; k < 1000; ++k) {
        const Matrix4 v = oracle::random_physical_cm(rng);
        const auto en = log_negativity({v});

        // radicand non-negative and nu_minus real and positive
        const TwoModeCM cm{v};
        const double sigma = cm.a().determinant() + cm.b().determinant() - 2 * cm.c().determinant();
        CHECK(sigma * sigma - 4 * v.determinant() >= -1e-12 * sigma * sigma);
        CHECK(en.nu_minus > 0.0);

        // closed form against the general symplectic eigensolver
        CHECK(en.nu_minus == Approx(oracle::pt_nu_minus(v)).epsilon(1e-9));

        // Simon consistency
        CHECK((en.e_n > 0.0) == (en.nu_minus < 0.5));
        const double simon = oracle::simon_invariant(v);
        if (std::abs(simon) > 1e-10)
            CHECK((en.e_n > 0.0) == (simon < 0.0));
        (en.e_n > 0.0 ? entangled : separable)++;

        // local rotations leave E_N unchanged
        const Matrix4 r = oracle::local_ops(0.0, angle(rng), 0.0, angle(rng));
        CHECK(std::abs(log_negativity({r * v * r.transpose()}).e_n - en.e_n) < 1e-10);
    }
    // the generator must exercise both sides of the criterion
    CHECK(entangled > 100);
    CHECK(separable > 100);
}

TEST_CASE("normal-mode transform")
{
    const Matrix6 s = normal_mode_matrix();
    Matrix6 j = Matrix6::Zero();
    for (int k = 0; k < 3; ++k) {
        j(2 * k, 2 * k + 1) = 1;
        j(2 * k + 1, 2 * k) = -1;
    }
    CHECK((s * s.transpose() - Matrix6::Identity()).norm() < 1e-15);
    CHECK((s * s - Matrix6::Identity()).norm() < 1e-15);
    CHECK((s * j * s.transpose() - j).norm() < 1e-15);

    CHECK(normal_mode_transform(3.0 * Matrix6::Identity()).isApprox(3.0 * Matrix6::Identity()));

    SUBCASE("sum and difference variances")
    {
        Matrix6 v = Matrix6::Identity() * 2.0;
        v(0, 2) = v(2, 0) = 0.7;
        const Matrix6 w = normal_mode_transform(v);
        CHECK(w(0, 0) == Approx(2.7));
        CHECK(w(2, 2) == Approx(1.3));
    }

    SUBCASE("involution and spectrum preservation")
    {
        std::mt19937_64 rng(7);
        for (int k = 0; k < 50; ++k) {
            const Matrix6 v = random_three_mode_cm(rng);
            const Matrix6 w = normal_mode_transform(v);
            CHECK((normal_mode_transform(w) - v).cwiseAbs().maxCoeff() < 1e-12);
            const auto a = oracle::symplectic_eigenvalues(v);
            const auto b = oracle::symplectic_eigenvalues(w);
            for (std::size_t i = 0; i < a.size(); ++i)
                CHECK(std::abs(a[i] - b[i]) < 1e-9);
        }
    }
}

TEST_CASE("single-mode reduction")
{
    const ClassicalMeanState zero;
    CHECK(single_mode_reduce(1.7 * Matrix6::Identity(), zero, Mode::Plus).cm.isApprox(1.7 * Matrix2::Identity()));
    CHECK(single_mode_reduce(initial_covariance(0.0), zero, Mode::Cavity).cm.isApprox(0.5 * Matrix2::Identity()));
    const double n = thermal_occupancy(3.0);
    CHECK(single_mode_reduce(initial_covariance(n), zero, Mode::Minus).cm.isApprox((n + 0.5) * Matrix2::Identity()));

    ClassicalMeanState s{1.0, 2.0, 3.0, 4.0, 5.0, -6.0};
    const auto plus = single_mode_reduce(initial_covariance(0.0), s, Mode::Plus);
    const auto minus = single_mode_reduce(initial_covariance(0.0), s, Mode::Minus);
    const auto cav = single_mode_reduce(initial_covariance(0.0), s, Mode::Cavity);
    CHECK(plus.mean[0] == Approx(4.0 / std::numbers::sqrt2));
    CHECK(plus.mean[1] == Approx(6.0 / std::numbers::sqrt2));
    CHECK(minus.mean[0] == Approx(-2.0 / std::numbers::sqrt2));
    CHECK(minus.mean[1] == Approx(-2.0 / std::numbers::sqrt2));
    CHECK(cav.mean[0] == Approx(5.0 * std::numbers::sqrt2));
    CHECK(cav.mean[1] == Approx(-6.0 * std::numbers::sqrt2));

    CHECK(mode_from_string("minus") == Mode::Minus);
    CHECK(mode_from_string("+") == Mode::Plus);
    CHECK(std::string(to_string(Mode::Cavity)) == "cavity");
    CHECK_THROWS_AS(mode_from_string("sideways"), std::invalid_argument);
}

TEST_CASE("Wigner function")
{
    const Vector2 mean(0.3, -1.2);
    CHECK(wigner(mean, 0.5 * Matrix2::Identity(), mean) == Approx(1.0 / std::numbers::pi));

    Matrix2 cm;
    cm << 2.0, 0.6, 0.6, 0.4;
    CHECK(wigner(mean, cm, mean) == Approx(1.0 / (2 * std::numbers::pi * std::sqrt(cm.determinant()))));
    CHECK(wigner(Vector2(5, 5), cm, mean) > 0.0);

    Matrix2 singular;
    singular << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(wigner(mean, singular, mean), std::domain_error);
    CHECK_THROWS_AS(wigner(mean, -Matrix2::Identity(), mean), std::domain_error);

    SUBCASE("normalization over an 8 sigma box")
    {
        const double sigma = std::sqrt(Eigen::SelfAdjointEigenSolver<Matrix2>(cm).eigenvalues().maxCoeff());
        const double h = 8 * sigma;
        const double total = oracle::simpson_2d(
            [&](double x, double p) { return wigner(Vector2(x, p), cm, Vector2::Zero()); }, -h, h, -h, h, 1200);
        CHECK(total == Approx(1.0).epsilon(1e-6));
    }

    SUBCASE("default grid captures the density")
    {
        const WignerField f = wigner_field(cm);
        REQUIRE(f.x.size() == 201);
        REQUIRE(f.values.size() == 201u * 201u);
        const double dx = f.x[1] - f.x[0];
        double sum = 0.0;
        for (double w : f.values)
            sum += w;
        CHECK(sum * dx * dx == Approx(1.0).epsilon(1e-6));
        CHECK(f.values[100 * 201 + 100] == Approx(wigner(Vector2::Zero(), cm, Vector2::Zero())));
        CHECK_THROWS_AS(wigner_field(cm, {1, 6.0}), std::invalid_argument);
    }
}

TEST_CASE("Wigner snapshots")
{
    SystemParams p;
    p.temp_ratio = 1.0;
    const double n = thermal_occupancy(1.0);

    // at t = 0 every normal mode is an isotropic thermal Gaussian
    const auto start = wigner_snapshot(p, 0.0, Mode::Minus, {21, 6.0});
    CHECK(start.state.cm.isApprox((n + 0.5) * Matrix2::Identity()));
    CHECK(start.field.values[10 * 21 + 10] == Approx(1.0 / (2 * std::numbers::pi * (n + 0.5))));

    const auto later = wigner_snapshot(p, 10 * p.period(), Mode::Plus, {11, 6.0});
    CHECK(later.t == Approx(10 * p.period()));
    CHECK(later.field.values.size() == 121);
    CHECK(later.state.cm.isApprox(single_mode_reduce(later.covariance, later.mean, Mode::Plus).cm));

    SystemParams wild;
    wild.lambda0 = 0.05;
    CHECK_THROWS_AS(wigner_snapshot(wild, 3000 * wild.period(), Mode::Minus, {11, 6.0}), DivergenceError);
}
