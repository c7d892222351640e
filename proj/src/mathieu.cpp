#include "mechent/mathieu.hpp"

#include "mechent/ode.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mechent {

const char* to_string(Stability s)
{
    switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Boundary: return "boundary";
    case Stability::Unstable: return "unstable";
    }
    return "?";
}

MathieuPoint mathieu_params(const SystemParams& p)
{
    if (!(p.omega_mod > 0.0))
        throw std::invalid_argument("mathieu_params: omega_mod must be positive");
    const double w = p.omega_m;
    const double omega2 = p.omega_mod * p.omega_mod;
    MathieuPoint pt;
    pt.delta = (4.0 * w * w - p.gamma_m * p.gamma_m) / omega2;
    pt.epsilon = 2.0 * w * std::abs(p.lambda0) / omega2;
    pt.classification = classify_stability(pt.delta, pt.epsilon);
    return pt;
}

TongueEdges mathieu_eigenvalues(double epsilon, SeriesOrder order)
{
    const double e = epsilon;
    if (order == SeriesOrder::First)
        return {1.0 + e, 1.0 - e};
    const double e2 = e * e, e3 = e2 * e;
    return {1.0 + e - e2 / 8.0 - e3 / 64.0, 1.0 - e - e2 / 8.0 + e3 / 64.0};
}

double mathieu_alpha0(double epsilon)
{
    const double e2 = epsilon * epsilon;
    return -0.5 * e2 + 7.0 / 128.0 * e2 * e2;
}

Stability classify_stability(double delta, double epsilon, SeriesOrder order, double tol)
{
    const TongueEdges edges = mathieu_eigenvalues(epsilon, order);
    if (std::abs(delta - edges.alpha1) <= tol || std::abs(delta - edges.beta1) <= tol)
        return Stability::Boundary;
    if (delta > edges.beta1 && delta < edges.alpha1)
        return Stability::Unstable;
    return Stability::Stable;
}

Stability classify_stability(const MathieuPoint& point, SeriesOrder order, double tol)
{
    return classify_stability(point.delta, point.epsilon, order, tol);
}

double critical_coupling(const SystemParams& p)
{
    const double w = p.omega_m;
    const double offset = p.omega_mod * p.omega_mod - 4.0 * w * w + p.gamma_m * p.gamma_m;
    return std::abs(offset) / (2.0 * w);
}

FloquetResult floquet_analysis(const SystemParams& p, double tol)
{
    const MathieuPoint pt = mathieu_params(p);
    auto rhs = [&](double s, const Vector2& y) -> Vector2 {
        return {y[1], -(pt.delta - 2.0 * pt.epsilon * std::cos(2.0 * s)) * y[0]};
    };
    constexpr int kSteps = 2000;
    FloquetResult r;
    r.monodromy.col(0) = ode::integrate_fixed(rhs, 0.0, std::numbers::pi, Vector2(1.0, 0.0), kSteps);
    r.monodromy.col(1) = ode::integrate_fixed(rhs, 0.0, std::numbers::pi, Vector2(0.0, 1.0), kSteps);

    // Hill's equation: det M = 1, so the spectrum follows from the trace.
    const double half_trace = 0.5 * r.monodromy.trace();
    const double det = r.monodromy.determinant();
    const double disc = half_trace * half_trace - det;
    r.spectral_radius = disc > 0.0 ? std::abs(half_trace) + std::sqrt(disc) : std::sqrt(std::abs(det));

    const double gamma_scaled = 2.0 * p.gamma_m / p.omega_mod;
    r.damping_factor = std::exp(-gamma_scaled * std::numbers::pi / 2.0);
    const double ratio = r.spectral_radius * r.damping_factor;
    // per period pi in scaled time, which is 2 pi / Omega in physical time
    r.growth_rate = std::log(ratio) / p.period();

    if (std::abs(ratio - 1.0) <= tol)
        r.classification = Stability::Boundary;
    else
        r.classification = ratio > 1.0 ? Stability::Unstable : Stability::Stable;
    return r;
}

Stability floquet_classify(const SystemParams& p, double tol)
{
    return floquet_analysis(p, tol).classification;
}

double floquet_critical_coupling(const SystemParams& p, double rel_tol)
{
    auto unstable = [&](double lambda) {
        SystemParams q = p;
        q.lambda0 = lambda;
        return floquet_analysis(q, 0.0).classification == Stability::Unstable;
    };
    if (unstable(0.0))
        return 0.0;
    double lo = 0.0;
    double hi = 1e-3;
    while (!unstable(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3)
            throw std::runtime_error("floquet_critical_coupling: no instability found");
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (unstable(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double ChartSpec::delta_resolution() const
{
    return delta_points > 1 ? (delta_max - delta_min) / (delta_points - 1) : 0.0;
}

std::vector<ChartCell> stability_chart(const ChartSpec& spec)
{
    if (spec.eps_points < 1 || spec.delta_points < 1)
        throw std::invalid_argument("stability_chart: grid must have at least one point per axis");
    std::vector<ChartCell> cells;
    cells.reserve(static_cast<std::size_t>(spec.eps_points) * spec.delta_points);
    auto axis = [](double lo, double hi, int n, int i) {
        return n > 1 ? lo + (hi - lo) * i / (n - 1) : lo;
    };
    for (int i = 0; i < spec.eps_points; ++i) {
        const double eps = axis(spec.eps_min, spec.eps_max, spec.eps_points, i);
        for (int j = 0; j < spec.delta_points; ++j) {
            const double delta = axis(spec.delta_min, spec.delta_max, spec.delta_points, j);
            cells.push_back({eps, delta, classify_stability(delta, eps, spec.order)});
        }
    }
    return cells;
}

std::vector<ChartMarker> chart_markers(const SystemParams& base, const std::vector<double>& lambdas,
                                       const ChartSpec& spec)
{
    std::vector<ChartMarker> out;
    for (double lambda : lambdas) {
        SystemParams p = base;
        p.lambda0 = lambda;
        MathieuPoint pt = mathieu_params(p);
        pt.classification = classify_stability(pt, spec.order, spec.delta_resolution());
        out.push_back({lambda, pt});
    }
    return out;
}

} // namespace mechent
