#include "mechent/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mechent {

double SystemParams::period() const { return 2.0 * std::numbers::pi / omega_mod; }

std::vector<std::string> SystemParams::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw ConfigError(what);
    };
    require(std::isfinite(omega_m) && omega_m > 0.0, "omega_m must be positive");
    require(std::isfinite(kappa) && kappa > 0.0, "kappa must be positive");
    require(std::isfinite(gamma_m) && gamma_m > 0.0, "gamma_m must be positive");
    require(std::isfinite(omega_mod) && omega_mod > 0.0, "omega_mod must be positive");
    require(std::isfinite(temp_ratio) && temp_ratio >= 0.0, "temp_ratio must be non-negative");
    for (double v : {delta0, g, e0, e1, lambda0})
        require(std::isfinite(v), "parameters must be finite");

    std::vector<std::string> warnings;
    if (omega_m / gamma_m < 100.0) {
        std::ostringstream os;
        os << "mechanical quality factor " << omega_m / gamma_m
           << " is below 100; the white-noise bath model is questionable";
        warnings.push_back(os.str());
    }
    return warnings;
}

double periodic_cos(double omega, double t)
{
    if (omega == 0.0)
        return 1.0;
    const double cycles = omega * t / (2.0 * std::numbers::pi);
    const double frac = cycles - std::nearbyint(cycles);
    return std::cos(2.0 * std::numbers::pi * frac);
}

double drive_amplitude(double t, const SystemParams& p)
{
    return p.e0 + p.e1 * periodic_cos(p.omega_mod, t);
}

double mechanical_coupling(double t, const SystemParams& p)
{
    return p.lambda0 * periodic_cos(p.omega_mod, t);
}

double thermal_occupancy(double temp_ratio)
{
    if (!(temp_ratio >= 0.0))
        throw std::domain_error("thermal_occupancy: temperature ratio must be non-negative");
    if (temp_ratio == 0.0)
        return 0.0;
    // expm1 overflows to +inf for tiny temperatures, which correctly yields 0.
    return 1.0 / std::expm1(1.0 / temp_ratio);
}

Matrix6 initial_covariance(double n_th)
{
    Vector6 d;
    d << n_th + 0.5, n_th + 0.5, n_th + 0.5, n_th + 0.5, 0.5, 0.5;
    return d.asDiagonal();
}

NoiseMatrix noise_matrix(const SystemParams& p, double n_th)
{
    const double mech = p.gamma_m * (2.0 * n_th + 1.0);
    NoiseMatrix d;
    d.diagonal << 0.0, mech, 0.0, mech, p.kappa, p.kappa;
    return d;
}

} // namespace mechent
