#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "optocool/core_model.hpp"
#include "optocool/linear_model.hpp"
#include "optocool/steady_state.hpp"

namespace optocool {

struct Denominators {
    cplx delta;        // (gamma_m'/2 - i w)(gamma_3'/2 - i w) - g3^2
    cplx delta_prime;  // (gamma_m'/2 - i w)(gamma_3'/2 - i w) + g3^2
};

Denominators transfer_denominators(double g3, double gamma_3p, double gamma_mp, double omega);

/// Output photon-flux density of the detection mode on a grid of offsets
/// from the sideband centre, normalised so <a_out^+(w) a_out(w')> = psd(w) delta(w - w').
struct SpectrumResult {
    std::vector<double> omega_grid;
    std::vector<double> psd;
    double peak_intensity = 0.0;  // psd at the grid point nearest 0
    Sideband sideband = Sideband::Blue;
};

/// 1001 points over +-10 max(gamma_3', gamma_m').
std::vector<double> default_omega_grid(const MeasurementParams& mp, std::size_t points = 1001);

/// Closed-form rotating-wave spectra:
///   blue  g3^2 gamma_m' gamma_3' (n_mf + 1) / |Delta(w)|^2
///   red   g3^2 gamma_m' gamma_3' n_mf / |Delta'(w)|^2
/// Throws Unstable on the blue sideband at or above g3^2 = gamma_3' gamma_m'/4.
SpectrumResult output_spectrum(const SystemParams& p, const MeasurementParams& mp, cplx alpha_3,
                               std::span<const double> omega_grid);

/// Output spectrum of any linear model at absolute frame frequency omega,
/// computed from the input-output relation a_out = sqrt(gamma) a - a_in
/// with thermal inputs and the model's phase drive.
double model_output_spectrum(const LinearModel& model, std::size_t mode, double omega);

/// Same quantity for the full (non-RWA) detection model, evaluated at the
/// given offsets from the sideband centre.
SpectrumResult output_spectrum_full(const SystemParams& p, const MeasurementParams& mp, cplx alpha_3,
                                    std::span<const double> omega_grid);

/// n/(n+1)
double sideband_ratio(double n_mf);

struct PhononEstimate {
    double n = 0.0;
    double sigma = 0.0;  // first-order propagated, zero without input uncertainties
    double ratio = 0.0;
};

/// n = r/(1 - r) with r = I_r/I_b. Throws RatioOutOfRange for r >= 1 - 1e-9.
PhononEstimate infer_phonon(double I_r, double I_b, double sigma_r = 0.0, double sigma_b = 0.0);

struct BackactionFlags {
    bool weak_measurement = false;     // 8 g3^2 < 0.1 gamma_m' gamma_3'
    bool amplitude_hierarchy = false;  // |alpha_3| < 0.1 |alpha_1|
    bool stable = false;               // below the blue-sideband threshold
    double stability_margin = 0.0;     // 1 - 4 g3^2/(gamma_3' gamma_m')
};

BackactionFlags backaction_check(const SystemParams& p, const MeasurementParams& mp, cplx alpha_3,
                                 const SteadyState& cooling);

/// `omega_rad_s,psd_blue,psd_red`
void write_spectra_csv(std::ostream& os, const SpectrumResult& blue, const SpectrumResult& red);

}  // namespace optocool
