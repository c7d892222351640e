#include <doctest.h>

#include "mechent/dynamics.hpp"
#include "oracles/lyapunov.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace mechent;
using doctest::Approx;

namespace {

Matrix6 swap_oscillators(const Matrix6& v)
{
    Eigen::PermutationMatrix<6> perm;
    perm.indices() << 2, 3, 0, 1, 4, 5;
    return perm * v * perm.transpose();
}

} // namespace

TEST_CASE("classical right-hand side")
{
    SystemParams p;
    const auto d = classical_rhs(0.0, {}, p);
    CHECK(d.as_vector().isApprox((Vector6() << 0, 0, 0, 0, 1.1e4, 0).finished()));

    SUBCASE("symmetric data stays symmetric")
    {
        ClassicalMeanState s{0.3, -0.2, 0.3, -0.2, 50.0, -700.0};
        for (double t : {0.0, 0.7, 31.0}) {
            const auto ds = classical_rhs(t, s, p);
            CHECK(ds.q1 == ds.q2);
            CHECK(ds.p1 == ds.p2);
        }
    }

    SUBCASE("pack and unpack round trip")
    {
        ClassicalMeanState s{1, 2, 3, 4, 5, 6};
        Matrix6 v = Matrix6::Random();
        v = (v + v.transpose()).eval();
        ClassicalMeanState s2;
        Matrix6 v2;
        unpack_state(pack_state(s, v), s2, v2);
        CHECK(s2.as_vector() == s.as_vector());
        CHECK(v2 == v);
    }
}

TEST_CASE("drift matrix pattern")
{
    SystemParams p;
    p.lambda0 = 0.0;
    const DriftMatrix free = drift_matrix(0.0, {}, p);
    CHECK(free.g_x == 0.0);
    CHECK(free.g_y == 0.0);
    CHECK(free.a.block<2, 4>(0, 2).isZero());
    CHECK(free.a.block<2, 2>(2, 0).isZero());
    CHECK(free.a.block<4, 2>(0, 4).isZero());
    CHECK(free.a.block<2, 4>(4, 0).isZero());
    CHECK(free.a(1, 1) == -p.gamma_m);
    CHECK(free.a(4, 4) == -p.kappa);
    CHECK(free.a(4, 5) == p.delta0);
    CHECK(free.a(5, 4) == -p.delta0);

    ClassicalMeanState s;
    s.a_re = 1000.0;
    const DriftMatrix real = drift_matrix(0.0, s, p);
    CHECK(real.g_x == Approx(-std::numbers::sqrt2 * 1e-2));
    CHECK(real.g_y == 0.0);

    SUBCASE("mechanical coupling entries")
    {
        SystemParams q;
        const DriftMatrix c = drift_matrix(0.0, {}, q);
        CHECK(c.a(1, 2) == Approx(-0.005));
        CHECK(c.a(3, 0) == Approx(-0.005));
    }

    SUBCASE("effective coupling at the static operating point is of order one")
    {
        // |<a>| ~ E0 / sqrt(kappa^2 + Delta0^2)
        ClassicalMeanState op;
        const std::complex<double> a = 1e4 / std::complex<double>(0.1, 1.0);
        op.a_re = a.real();
        op.a_im = a.imag();
        const DriftMatrix dm = drift_matrix(0.0, op, p);
        const double g = std::hypot(dm.g_x, dm.g_y);
        CHECK(g == Approx(std::numbers::sqrt2 * 1e-5 * std::abs(a)));
        CHECK(g > 0.01);
        CHECK(g < 10.0);
    }
}

TEST_CASE("covariance right-hand side")
{
    CHECK(covariance_rhs(Matrix6::Identity(), DriftMatrix{}, NoiseMatrix{}).isZero());

    SUBCASE("vacuum is the fixed point of pure cavity decay")
    {
        SystemParams p;
        p.g = 0.0;
        DriftMatrix a = drift_matrix(0.0, {}, p);
        a.a.topLeftCorner<4, 4>().setZero();
        NoiseMatrix d = noise_matrix(p, 0.0);
        d.diagonal.head<4>().setZero();
        const Matrix6 rhs = covariance_rhs(0.5 * Matrix6::Identity(), a, d);
        CHECK(rhs.bottomRightCorner<2, 2>().norm() < 1e-15);
    }

    SUBCASE("algebraic Lyapunov solution is stationary")
    {
        SystemParams p;
        p.gamma_m = 0.02;
        ClassicalMeanState s;
        s.a_re = 990.0;
        s.a_im = -9900.0;
        s.q1 = s.q2 = -1.9;
        p.lambda0 = 0.0;
        const DriftMatrix a = drift_matrix(0.0, s, p);
        const NoiseMatrix d = noise_matrix(p, 0.3);
        const Matrix6 v = oracle::solve_lyapunov(a.a, d.matrix());
        CHECK(covariance_rhs(v, a, d).cwiseAbs().maxCoeff() < 1e-10 * v.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("integrate: invalid horizon")
{
    CHECK_THROWS_AS(integrate(SystemParams{}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(SystemParams{}, -1.0), std::invalid_argument);
}

TEST_CASE("integrate: empty-cavity fixed point")
{
    SystemParams p;
    p.g = 0.0;
    p.lambda0 = 0.0;
    p.e1 = 0.0;
    const auto rec = integrate(p, 300.0);
    CHECK(rec.final_mean.a_re == Approx(990.09900990099).epsilon(1e-8));
    CHECK(rec.final_mean.a_im == Approx(-9900.990099009901).epsilon(1e-8));
}

TEST_CASE("integrate: samples are increasing and non-negative")
{
    SystemParams p;
    const double tau = p.period();
    IntegratorOptions o;
    o.sample_every = tau / 40;
    o.snapshot_every = tau;
    const auto rec = integrate(p, 20 * tau, o);
    REQUIRE(rec.times.size() == 801);
    CHECK(rec.snapshots.size() == 21);
    for (std::size_t i = 1; i < rec.times.size(); ++i)
        CHECK(rec.times[i] > rec.times[i - 1]);
    for (double e : rec.log_negativity)
        CHECK(e >= 0.0);
    CHECK(rec.final_time == Approx(20 * tau));
    CHECK((rec.final_covariance - rec.final_covariance.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK((rec.final_covariance.diagonal().array() >= 0.0).all());
}

TEST_CASE("integrate: fifth-order convergence of the fixed-step scheme")
{
    SystemParams p;
    const double t_end = 10.0;
    auto run = [&](int n) {
        IntegratorOptions o;
        o.fixed_step = t_end / n;
        o.sample_every = t_end;
        const auto rec = integrate(p, t_end, o);
        return pack_state(rec.final_mean, rec.final_covariance);
    };
    const PackedState ref = run(6400);
    const double e1 = (run(100) - ref).cwiseAbs().maxCoeff();
    const double e2 = (run(200) - ref).cwiseAbs().maxCoeff();
    const double order = std::log2(e1 / e2);
    MESSAGE("observed order " << order);
    CHECK(order == Approx(5.0).epsilon(0.1));
}

TEST_CASE("integrate: exchange symmetry")
{
    SystemParams p;
    p.temp_ratio = 0.5;
    const auto rec = integrate(p, 300 * p.period());
    const Matrix6 v = rec.final_covariance;
    CHECK((v - swap_oscillators(v)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(rec.final_mean.q1 == Approx(rec.final_mean.q2).epsilon(1e-12));
}

TEST_CASE("integrate: constant drift converges to the algebraic Lyapunov solution")
{
    SystemParams p;
    p.e1 = 0.0;
    p.lambda0 = 0.0;
    p.gamma_m = 0.02;
    p.temp_ratio = 0.4;
    const auto rec = integrate(p, 3000.0);
    REQUIRE_FALSE(rec.diverged);
    const DriftMatrix a = drift_matrix(rec.final_time, rec.final_mean, p);
    const Matrix6 v_inf =
        oracle::solve_lyapunov(a.a, noise_matrix(p, thermal_occupancy(p.temp_ratio)).matrix());
    CHECK((rec.final_covariance - v_inf).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("integrate: strongly damped mechanics relax to the thermal state")
{
    SystemParams p;
    p.g = 0.0;
    p.lambda0 = 0.0;
    p.gamma_m = 0.5;
    p.temp_ratio = 1.0;
    const auto rec = integrate(p, 150.0);
    const double n = thermal_occupancy(1.0);
    const Matrix4 expected = (n + 0.5) * Matrix4::Identity();
    CHECK((rec.final_covariance.topLeftCorner<4, 4>() - expected).cwiseAbs().maxCoeff() < 1e-8);

    // the same fixed point from the oracle on the decoupled sub-block
    const DriftMatrix a = drift_matrix(0.0, {}, p);
    const Matrix6 v_inf = oracle::solve_lyapunov(a.a, noise_matrix(p, n).matrix());
    CHECK((v_inf.topLeftCorner<4, 4>() - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("integrate: divergence is flagged and stops the run")
{
    SystemParams p;
    p.lambda0 = 0.05;
    const double tau = p.period();
    const auto rec = integrate(p, 2000 * tau);
    CHECK(rec.diverged);
    CHECK(rec.divergence_time < 2000 * tau);
    CHECK(rec.final_time == rec.divergence_time);
    // entanglement is gone by the time the state blows up
    CHECK(rec.log_negativity.back() == 0.0);
    CHECK(*std::max_element(rec.log_negativity.begin(), rec.log_negativity.end()) > 0.0);
}

TEST_CASE("integrate: a lowered threshold triggers divergence early")
{
    SystemParams p;
    IntegratorOptions o;
    o.divergence_threshold = 1.0;
    const auto rec = integrate(p, 100.0, o);
    CHECK(rec.diverged);
}
