#pragma once

#include "mechent/params.hpp"
#include "mechent/types.hpp"

#include <string>
#include <vector>

namespace mechent {

enum class Stability { Stable, Boundary, Unstable };
enum class SeriesOrder { First, Third };

const char* to_string(Stability s);

// Boundary tolerance in delta units.
inline constexpr double kBoundaryTolerance = 1e-9;

/// Point (delta, epsilon) of the canonical Mathieu equation
///   y'' + (delta - 2 epsilon cos 2s) y = 0
/// that the damped difference mode maps onto.
struct MathieuPoint {
    double delta = 0;
    double epsilon = 0;
    Stability classification = Stability::Stable;
};

/// delta = (4 w^2 - gamma^2) / Omega^2, epsilon = 2 w |lambda0| / Omega^2;
/// classified with the first-order tongue.
MathieuPoint mathieu_params(const SystemParams& p);

/// Edges of the first instability tongue, alpha1 (upper) and beta1 (lower).
struct TongueEdges {
    double alpha1 = 1;
    double beta1 = 1;
};

TongueEdges mathieu_eigenvalues(double epsilon, SeriesOrder order = SeriesOrder::First);

/// Lowest characteristic value a0(epsilon) to fourth order.
double mathieu_alpha0(double epsilon);

/// Unstable strictly inside beta1 < delta < alpha1, Boundary within `tol`
/// of either edge, Stable outside.
Stability classify_stability(double delta, double epsilon, SeriesOrder order = SeriesOrder::First,
                             double tol = kBoundaryTolerance);
Stability classify_stability(const MathieuPoint& point, SeriesOrder order = SeriesOrder::First,
                             double tol = kBoundaryTolerance);

/// First-order critical coupling: the lambda0 at which delta meets the tongue
/// edge. Above resonance (Omega^2 + gamma^2 > 4 w^2) this is
/// (Omega^2 - 4 w^2 + gamma^2) / (2 w); below it the mirror edge is used.
double critical_coupling(const SystemParams& p);

/// Monodromy of the undamped canonical equation over one period, and the
/// damping-adjusted verdict for the physical difference mode.
struct FloquetResult {
    Matrix2 monodromy = Matrix2::Identity();
    double spectral_radius = 1;      // of the undamped monodromy
    double damping_factor = 1;       // exp(-gamma~ pi / 2), gamma~ = 2 gamma / Omega
    double growth_rate = 0;          // net amplitude growth rate in physical time (negative = decay)
    Stability classification = Stability::Stable;
};

FloquetResult floquet_analysis(const SystemParams& p, double tol = kBoundaryTolerance);
Stability floquet_classify(const SystemParams& p, double tol = kBoundaryTolerance);

/// Smallest lambda0 >= 0 at which the Floquet verdict turns unstable, by bisection.
double floquet_critical_coupling(const SystemParams& p, double rel_tol = 1e-10);

struct ChartSpec {
    double eps_min = 0.0;
    double eps_max = 0.005;
    int eps_points = 101;
    double delta_min = 0.99;
    double delta_max = 1.01;
    int delta_points = 201;
    SeriesOrder order = SeriesOrder::First;

    /// Grid spacing in delta; used as the boundary tolerance for marker points.
    double delta_resolution() const;
};

struct ChartCell {
    double epsilon;
    double delta;
    Stability classification;
};

std::vector<ChartCell> stability_chart(const ChartSpec& spec);

struct ChartMarker {
    double lambda0;
    MathieuPoint point; // classified at the chart's delta resolution
};

std::vector<ChartMarker> chart_markers(const SystemParams& base, const std::vector<double>& lambdas,
                                       const ChartSpec& spec);

} // namespace mechent
