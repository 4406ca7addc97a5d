#include "optocool/rates.hpp"

#include <cmath>

#include "optocool/errors.hpp"
#include "optocool/noise.hpp"

namespace optocool {

double coupling_strength(const SystemParams& p, const SteadyState& ss) {
    return p.eta * p.omega_m * std::abs(ss.alpha_1);
}

double gamma_tilde(const SystemParams& p, const SteadyState& ss) {
    const double g = coupling_strength(p, ss);
    return 4.0 * g * g / p.gamma_2;
}

bool adiabatic_regime(const SystemParams& p, const SteadyState& ss) {
    return 5.0 * coupling_strength(p, ss) <= p.gamma_2 && 5.0 * p.gamma_2 <= p.omega_m;
}

double phase_noise_phonons(const SystemParams& p, const SteadyState& ss, const NoiseModel& noise) {
    const double white = 2.0 * noise.Gamma_l * std::norm(ss.alpha_2) / p.gamma_2;
    return white * noise_reduction_at(noise, p.omega_m);
}

double q_limit(double temperature, double omega_m, double Q) {
    if (!(temperature >= 0.0) || !(omega_m > 0.0) || !(Q > 0.0)) {
        throw Error(ErrorKind::InvalidParameter, "q_limit needs T >= 0, omega_m > 0, Q > 0");
    }
    return constants::k_B * temperature / (constants::hbar * omega_m * Q);
}

}  // namespace optocool
