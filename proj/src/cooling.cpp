#include "optocool/cooling.hpp"

#include <algorithm>
#include <string>

#include "optocool/covariance.hpp"
#include "optocool/errors.hpp"
#include "optocool/linear_model.hpp"
#include "optocool/noise.hpp"
#include "optocool/rates.hpp"

namespace optocool {

CoolingReport cooling_report(const SystemParams& p, const NoiseModel& noise) {
    return cooling_report(p, solve_classical_steady_state(p), noise);
}

CoolingReport cooling_report(const SystemParams& p, const SteadyState& ss, const NoiseModel& noise) {
    CoolingReport r;
    r.steady_state = ss;
    r.coupling_g = coupling_strength(p, ss);
    r.gamma_tilde = gamma_tilde(p, ss);
    r.adiabatic_ok = adiabatic_regime(p, ss);
    r.n_mi = p.n_mi();
    r.n_phase = phase_noise_phonons(p, ss, noise);
    r.q_limit_bound = q_limit(p.temperature, p.omega_m, p.quality_factor);
    r.n_q_limit = std::max(p.gamma_m * r.n_mi / (p.gamma_m + r.gamma_tilde), r.q_limit_bound);
    r.n_total_estimate = r.n_q_limit + r.n_phase;
    r.suppression_factor = suppression_factor_two_mode(p.omega_m, p.gamma_1);
    r.noise_reduction = noise_reduction_at(noise, p.omega_m);

    const LinearModel model = build_cooling_model(p, ss, noise);
    const auto st = stability_eigen(model);
    r.stable = st.stable;
    r.max_re = st.max_re;
    if (!st.stable) {
        throw Error(ErrorKind::Unstable,
                    "cooling model unstable (max Re lambda = " + std::to_string(st.max_re) + ")");
    }
    const auto cov = solve_lyapunov(model);
    r.n_lyapunov = cov.n_per_mode[model.mode_index("am")];
    r.lyapunov_residual = cov.lyapunov_residual;
    r.min_physical_eigenvalue = cov.min_physical_eigenvalue;

    try {
        const LinearModel three = build_cooling_model(p, ss, noise, {.include_a1 = true});
        const auto cov3 = solve_lyapunov(three);
        r.n_lyapunov_with_a1 = cov3.n_per_mode[three.mode_index("am")];
    } catch (const Error&) {
        r.n_lyapunov_with_a1.reset();
    }
    return r;
}

}  // namespace optocool
