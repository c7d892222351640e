#pragma once

#include "mechent/types.hpp"

#include <string>
#include <vector>

namespace mechent {

/// Physical parameters, every rate in units of the mechanical frequency.
/// Defaults are the reference operating point: resonant modulation slightly
/// above twice the mechanical frequency, weak mechanical coupling, T = 0.
struct SystemParams {
    double omega_m = 1.0;     // mechanical frequency (unit of all rates)
    double delta0 = 1.0;      // bare optical detuning
    double kappa = 0.1;       // cavity decay rate
    double gamma_m = 5e-4;    // mechanical damping rate
    double g = 1e-5;          // single-photon radiation-pressure coupling
    double e0 = 1e4;          // static drive amplitude
    double e1 = 1e3;          // modulated drive amplitude
    double omega_mod = 2.003; // modulation frequency
    double lambda0 = 0.005;   // mechanical-coupling modulation amplitude
    double temp_ratio = 0.0;  // T / T0 with T0 = hbar omega_m / k_B

    /// Modulation period 2 pi / omega_mod.
    double period() const;

    /// Throws ConfigError on a hard invariant violation; returns soft warnings.
    std::vector<std::string> validate() const;
};

double drive_amplitude(double t, const SystemParams& p);
double mechanical_coupling(double t, const SystemParams& p);

/// cos(omega t) with the argument reduced modulo one period first, so that
/// long integrations keep the waveform exactly periodic.
double periodic_cos(double omega, double t);

/// Bose occupancy 1 / (exp(1/temp_ratio) - 1); zero at temp_ratio = 0.
double thermal_occupancy(double temp_ratio);

/// Thermal mechanical modes and vacuum cavity (variance 1/2 per quadrature).
Matrix6 initial_covariance(double n_th);

struct NoiseMatrix {
    Vector6 diagonal = Vector6::Zero();

    Matrix6 matrix() const { return diagonal.asDiagonal(); }
};

NoiseMatrix noise_matrix(const SystemParams& p, double n_th);

} // namespace mechent
