#pragma once

// Linearised Langevin models over quadratures.
//
// Bosonic modes are written as c_dot = M c + N c^dagger + f phidot + sqrt(gamma) c_in.
// The real state vector interleaves x_j = (a_j + a_j^+)/sqrt2 and
// p_j = -i(a_j - a_j^+)/sqrt2 for each mode, optionally followed by one
// Ornstein-Uhlenbeck auxiliary variable (unit stationary variance) that
// carries finite-correlation phase noise.

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "optocool/core_model.hpp"
#include "optocool/steady_state.hpp"

namespace optocool {

struct LinearModel {
    std::vector<std::string> labels;       // bosonic modes, then "ou_aux" if present
    std::size_t n_modes = 0;
    bool has_aux = false;
    Eigen::MatrixXd A;                     // drift, rad/s
    Eigen::MatrixXd D;                     // diffusion, rad/s
    Eigen::MatrixXcd M;                    // complex drift (n_modes x n_modes)
    Eigen::MatrixXcd N;                    // conjugate-coupling drift
    std::vector<double> decay_rates;       // input-channel rate per mode
    std::vector<double> bath_occupations;  // input-channel occupation per mode
    Eigen::VectorXcd phase_drive;          // coefficient of phidot per mode
    NoiseModel noise;

    std::size_t dimension() const noexcept { return 2 * n_modes + (has_aux ? 1 : 0); }
    /// Index of a bosonic mode by label; throws InvalidParameter if absent.
    std::size_t mode_index(const std::string& label) const;
};

/// Assemble a model from complex drift, input channels and phase drive.
/// White noise is folded into D as 2 Gamma_l u u^T; finite-correlation noise
/// appends the OU auxiliary state.
LinearModel assemble_model(std::vector<std::string> labels, const Eigen::MatrixXcd& M,
                           const Eigen::MatrixXcd& N, std::vector<double> decay_rates,
                           std::vector<double> bath_occupations, const Eigen::VectorXcd& phase_drive,
                           const NoiseModel& noise);

/// Real quadrature drift from (M, N).
Eigen::MatrixXd quadrature_drift(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& N);

enum class PhaseDriveSource {
    TwoMode,               // i alpha_2 on a_2
    SingleModeSurrogate,   // i alpha_1 on a_2: what a single-mode scheme would inject
};

struct CoolingModelOptions {
    bool include_a1 = false;
    PhaseDriveSource drive = PhaseDriveSource::TwoMode;
};

/// Cooling configuration in the non-rotating frame with counter-rotating
/// terms kept. Two-mode build: [a2, am]. include_a1: full linearisation over
/// [a1, a2, am] with sigma = alpha_1 + alpha_2 and the Delta_L cross terms.
LinearModel build_cooling_model(const SystemParams& p, const SteadyState& ss, const NoiseModel& noise,
                                const CoolingModelOptions& opts = {});

/// Mechanics alone after eliminating a2: damping gamma_m + gamma_tilde,
/// vacuum input at gamma_tilde, phase drive -sqrt(gamma_tilde/gamma_2) alpha_2.
LinearModel build_adiabatic_model(const SystemParams& p, const SteadyState& ss, const NoiseModel& noise);

/// Detection configuration [a3, am]. Full build keeps the free rotation at
/// the sideband detuning and both coupling terms; rwa=true keeps only the
/// resonant pair (a3 <-> am^+ on the blue sideband, a3 <-> am on the red).
LinearModel build_measurement_model(const SystemParams& p, const MeasurementParams& mp, cplx alpha_3,
                                    bool rwa = false);

}  // namespace optocool
