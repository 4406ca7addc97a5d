#pragma once

// Physical parameter records for the double-cavity-mode cooling setup.
//
// Unit convention: every frequency and rate is angular (rad/s). The laser
// linewidth Gamma_l is a plain rate in s^-1 and is never rescaled by 2*pi.

#include <optional>
#include <string_view>

namespace optocool {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J/K
inline constexpr double two_pi = 6.283185307179586476925286766559;
}  // namespace constants

/// Raw system inputs. Optional fields are derived during validation when
/// possible (gamma_m <-> quality_factor, eta from omega_1/mass/radius).
struct SystemParamsInput {
    double omega_m = 0.0;
    double gamma_1 = 0.0;
    double gamma_2 = 0.0;
    std::optional<double> gamma_m;
    std::optional<double> quality_factor;
    std::optional<double> eta;
    double Omega_c = 0.0;
    std::optional<double> omega_1;
    std::optional<double> mass;
    std::optional<double> radius;
    double temperature = 0.0;
};

/// Validated, immutable system parameters.
struct SystemParams {
    double omega_m;
    double gamma_1;
    double gamma_2;
    double gamma_m;
    double quality_factor;
    double eta;
    double Omega_c;
    double temperature;
    std::optional<double> omega_1;
    std::optional<double> mass;
    std::optional<double> radius;

    bool resolved_sideband() const noexcept { return gamma_1 < omega_m && gamma_2 < omega_m; }
    /// Bose-Einstein occupation of the mechanical bath.
    double n_mi() const noexcept;
};

SystemParams validate_params(const SystemParamsInput& raw);

double zero_point_motion(double mass, double omega_m);
/// eta = (omega_1/omega_m) * sqrt(hbar/(m omega_m)) / R
double compute_eta(double omega_1, double omega_m, double mass, double radius);
/// 1/(exp(hbar omega / k_B T) - 1); zero at T = 0.
double thermal_occupation(double temperature, double omega_m);

enum class Sideband { Blue, Red };
std::string_view to_string(Sideband s) noexcept;

struct MeasurementParams {
    double omega_3 = 0.0;
    double gamma_3p = 0.0;
    double Omega_d = 0.0;
    Sideband sideband = Sideband::Blue;
    double gamma_mp = 0.0;  // gamma'_m = gamma_m + gamma_tilde
    double n_mf = 0.0;
};

MeasurementParams validate_measurement(const MeasurementParams& mp);

enum class NoiseKind { White, FiniteCorrelation };

/// Laser phase-derivative noise. White: <phidot phidot> = 2 Gamma_l delta(t-s).
/// FiniteCorrelation: <phidot(t) phidot(s)> = Gamma_l gamma_c exp(-gamma_c |t-s|).
struct NoiseModel {
    NoiseKind kind = NoiseKind::White;
    double Gamma_l = 0.0;
    double gamma_c = 0.0;

    static NoiseModel white(double Gamma_l);
    static NoiseModel finite_correlation(double Gamma_l, double gamma_c);
};

std::string_view to_string(NoiseKind k) noexcept;

}  // namespace optocool
