#pragma once

#include <optional>

#include "optocool/core_model.hpp"
#include "optocool/steady_state.hpp"

namespace optocool {

/// Phonon-number budget of the cooled oscillator.
struct CoolingReport {
    SteadyState steady_state;
    double coupling_g = 0.0;
    double gamma_tilde = 0.0;
    bool adiabatic_ok = false;
    double n_mi = 0.0;
    double n_phase = 0.0;           // phase-noise phonons (closed form)
    double q_limit_bound = 0.0;     // k_B T / (hbar omega_m Q)
    double n_q_limit = 0.0;         // max(gamma_m n_mi/(gamma_m + gamma_tilde), q_limit_bound)
    double n_total_estimate = 0.0;  // n_q_limit + n_phase
    double n_lyapunov = 0.0;        // exact two-mode linear model
    std::optional<double> n_lyapunov_with_a1;  // three-mode build, reported only
    bool stable = false;
    double max_re = 0.0;
    double suppression_factor = 0.0;
    double noise_reduction = 1.0;   // S(omega_m)/S(0)
    double lyapunov_residual = 0.0;
    double min_physical_eigenvalue = 0.0;
};

/// Solves the classical steady state, then assembles the report.
CoolingReport cooling_report(const SystemParams& p, const NoiseModel& noise);

/// Same, for a given (possibly hand-built) steady state. Throws Unstable if
/// the two-mode cooling model is unstable.
CoolingReport cooling_report(const SystemParams& p, const SteadyState& ss, const NoiseModel& noise);

}  // namespace optocool
