#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "optocool/core_model.hpp"

namespace optocool {

/// Sampled phase-derivative path phidot(t_k), t_k = k dt.
struct NoisePath {
    double dt = 0.0;
    std::vector<double> samples;
    std::uint64_t seed = 0;
};

/// Spectral density of phidot, S(w) = integral C(tau) e^{i w tau} dtau.
/// White: 2 Gamma_l. FiniteCorrelation: 2 Gamma_l gamma_c^2/(gamma_c^2 + w^2).
double psd_phase_derivative(const NoiseModel& model, double omega);

/// Autocorrelation <phidot(t) phidot(t+tau)> for the finite-correlation model.
double correlation_finite(const NoiseModel& model, double tau);

/// White: i.i.d. N(0, 2 Gamma_l/dt). FiniteCorrelation: exact OU update
/// started from the stationary law. Requires dt < 0.1/gamma_c for the OU case.
NoisePath sample_path(const NoiseModel& model, double dt, std::size_t n, std::uint64_t seed);

/// (2 omega_m / gamma_1)^2
double suppression_factor_two_mode(double omega_m, double gamma_1);

/// Ratio S(omega_m)/S(0); gamma_c^2/(gamma_c^2 + omega_m^2) for the OU model, 1 for white.
double noise_reduction_at(const NoiseModel& model, double omega_m);

/// Writes `t,phidot` rows.
void write_csv(std::ostream& os, const NoisePath& path);

}  // namespace optocool
