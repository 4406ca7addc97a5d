#pragma once

#include "optocool/core_model.hpp"
#include "optocool/steady_state.hpp"

namespace optocool {

/// g = eta omega_m |alpha_1|, the a2-mechanics coupling.
double coupling_strength(const SystemParams& p, const SteadyState& ss);

/// Optomechanical damping 4 eta^2 omega_m^2 |alpha_1|^2 / gamma_2.
double gamma_tilde(const SystemParams& p, const SteadyState& ss);

/// a2 can be eliminated adiabatically: g <= gamma_2/5 and gamma_2 <= omega_m/5.
bool adiabatic_regime(const SystemParams& p, const SteadyState& ss);

/// Phonons from phase noise after eliminating a2: the drive
/// -sqrt(gamma_tilde) alpha_2/sqrt(gamma_2) phidot balanced against damping
/// gamma_tilde gives 2 Gamma_l |alpha_2|^2 / gamma_2, reduced by
/// gamma_c^2/(gamma_c^2 + omega_m^2) for finite correlation.
double phase_noise_phonons(const SystemParams& p, const SteadyState& ss, const NoiseModel& noise);

/// k_B T / (hbar omega_m Q)
double q_limit(double temperature, double omega_m, double Q);

}  // namespace optocool
