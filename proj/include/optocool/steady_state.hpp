#pragma once

#include <array>
#include <complex>

#include "optocool/core_model.hpp"

namespace optocool {

using cplx = std::complex<double>;

/// Classical steady state of the driven a1/a2/mechanics system.
struct SteadyState {
    cplx alpha_1{};
    cplx alpha_2{};
    cplx beta{};
    double Delta_L = 0.0;   // eta * omega_m * (beta + beta*)
    double residual = 0.0;  // max scaled residual, see steady_state_residual
    int iterations = 0;
};

struct SteadyStateOptions {
    double tolerance = 1e-12;
    int max_iterations = 200;
    bool probe_bistability = true;
    int probe_starts = 8;
};

/// Residuals of the two complex field equations and the beta constraint,
/// as six real numbers. Field equations are divided by Omega_c; the beta
/// constraint is multiplied by omega_m first so all entries are in the
/// same (rate / Omega_c) units. Delta_L is substituted from beta.
std::array<double, 6> steady_state_residual(const SystemParams& p, cplx alpha_1, cplx alpha_2,
                                            cplx beta);

/// Damped Newton solve in (Re, Im) of alpha_1, alpha_2, beta, seeded from
/// approximate_steady_state. Throws NoConvergence or MultipleRoots.
SteadyState solve_classical_steady_state(const SystemParams& p, const SteadyStateOptions& opts = {});

/// Resolved-sideband closed forms: alpha_1 ~ i Omega_c/gamma_1,
/// beta ~ -eta |alpha_1|^2, alpha_2 = i(Omega_c - 2 Delta_L alpha_1)/(2 i omega_m + gamma_2).
SteadyState approximate_steady_state(const SystemParams& p);

struct MeasurementSteadyState {
    cplx alpha_3{};
    cplx beta_p{};
    double Delta_Lp = 0.0;       // bare detection detuning omega_L' - omega_3
    double effective_detuning = 0.0;  // Delta_Lp + 2 eta^2 omega_m |alpha_3|^2
    double residual = 0.0;       // relative to Omega_d
};

/// Detection-mode steady state with the effective detuning pinned to the
/// chosen sideband: +omega_m for Blue (Stokes resonant), -omega_m for Red.
MeasurementSteadyState measurement_steady_state(const SystemParams& p, const MeasurementParams& mp);

/// Effective detuning of the detection drive for a sideband.
double sideband_detuning(Sideband s, double omega_m) noexcept;

}  // namespace optocool
