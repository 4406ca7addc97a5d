#include "optocool/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "optocool/covariance.hpp"
#include "optocool/errors.hpp"
#include "optocool/format.hpp"
#include "optocool/noise.hpp"

namespace optocool {

namespace {

constexpr cplx I{0.0, 1.0};

double coupling_g3(const SystemParams& p, cplx alpha_3) { return p.eta * p.omega_m * std::abs(alpha_3); }

double peak_at_zero(const std::vector<double>& grid, const std::vector<double>& psd) {
    if (grid.empty()) return 0.0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::abs(grid[i]) < std::abs(grid[best])) best = i;
    }
    return psd[best];
}

}  // namespace

Denominators transfer_denominators(double g3, double gamma_3p, double gamma_mp, double omega) {
    const cplx common = (gamma_mp / 2.0 - I * omega) * (gamma_3p / 2.0 - I * omega);
    return {common - g3 * g3, common + g3 * g3};
}

std::vector<double> default_omega_grid(const MeasurementParams& mp, std::size_t points) {
    const double span = 10.0 * std::max(mp.gamma_3p, mp.gamma_mp);
    std::vector<double> grid(points);
    if (points == 1) {
        grid[0] = 0.0;
        return grid;
    }
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = -span + 2.0 * span * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    // Pin the centre exactly so the lineshape symmetry and the peak read-out are exact.
    if (points % 2 == 1) grid[points / 2] = 0.0;
    return grid;
}

SpectrumResult output_spectrum(const SystemParams& p, const MeasurementParams& mp, cplx alpha_3,
                               std::span<const double> omega_grid) {
    const double g3 = coupling_g3(p, alpha_3);
    if (mp.sideband == Sideband::Blue && !(4.0 * g3 * g3 < mp.gamma_3p * mp.gamma_mp)) {
        throw Error(ErrorKind::Unstable, "blue-sideband detection above the parametric threshold");
    }
    SpectrumResult out;
    out.sideband = mp.sideband;
    out.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    out.psd.resize(omega_grid.size());
    const double prefactor = g3 * g3 * mp.gamma_mp * mp.gamma_3p;
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        const auto d = transfer_denominators(g3, mp.gamma_3p, mp.gamma_mp, omega_grid[i]);
        out.psd[i] = mp.sideband == Sideband::Blue ? prefactor * (mp.n_mf + 1.0) / std::norm(d.delta)
                                                   : prefactor * mp.n_mf / std::norm(d.delta_prime);
    }
    out.peak_intensity = peak_at_zero(out.omega_grid, out.psd);
    return out;
}

double model_output_spectrum(const LinearModel& model, std::size_t mode, double omega) {
    const auto n = static_cast<Eigen::Index>(model.n_modes);
    const auto j = static_cast<Eigen::Index>(mode);
    // c = (a, a^+):  c_dot = K c + sqrt(Gamma) c_in + F phidot
    Eigen::MatrixXcd K(2 * n, 2 * n);
    K << model.M, model.N, model.N.conjugate(), model.M.conjugate();
    Eigen::VectorXcd F(2 * n);
    F << model.phase_drive, model.phase_drive.conjugate();
    Eigen::VectorXd root_gamma(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        root_gamma(k) = root_gamma(k + n) = std::sqrt(model.decay_rates[static_cast<std::size_t>(k)]);
    }

    const Eigen::MatrixXcd resolvent = -I * omega * Eigen::MatrixXcd::Identity(2 * n, 2 * n) - K;
    // Row j of the inverse: solve resolvent^T h = e_j.
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(2 * n);
    e(j) = 1.0;
    const Eigen::VectorXcd h = resolvent.transpose().partialPivLu().solve(e);

    double s = 0.0;
    for (Eigen::Index k = 0; k < 2 * n; ++k) {
        cplx t = root_gamma(j) * h(k) * root_gamma(k);
        if (k == j) t -= 1.0;
        const double occ = model.bath_occupations[static_cast<std::size_t>(k % n)];
        s += std::norm(t) * (k < n ? occ : occ + 1.0);
    }
    const cplx t_phase = root_gamma(j) * h.dot(F.conjugate());
    s += std::norm(t_phase) * psd_phase_derivative(model.noise, omega);
    return s;
}

SpectrumResult output_spectrum_full(const SystemParams& p, const MeasurementParams& mp, cplx alpha_3,
                                    std::span<const double> omega_grid) {
    const LinearModel model = build_measurement_model(p, mp, alpha_3, false);
    if (!stability_eigen(model).stable) {
        throw Error(ErrorKind::Unstable, "full detection model is unstable");
    }
    const double centre = -sideband_detuning(mp.sideband, p.omega_m);
    const std::size_t a3 = model.mode_index("a3");
    SpectrumResult out;
    out.sideband = mp.sideband;
    out.omega_grid.assign(omega_grid.begin(), omega_grid.end());
    out.psd.resize(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i) {
        out.psd[i] = model_output_spectrum(model, a3, centre + omega_grid[i]);
    }
    out.peak_intensity = peak_at_zero(out.omega_grid, out.psd);
    return out;
}

double sideband_ratio(double n_mf) {
    if (!(n_mf >= 0.0)) throw Error(ErrorKind::InvalidParameter, "n_mf must be >= 0");
    return n_mf / (n_mf + 1.0);
}

PhononEstimate infer_phonon(double I_r, double I_b, double sigma_r, double sigma_b) {
    if (!(I_b > 0.0)) throw Error(ErrorKind::InvalidParameter, "I_b must be > 0");
    if (!(I_r >= 0.0)) throw Error(ErrorKind::InvalidParameter, "I_r must be >= 0");
    const double r = I_r / I_b;
    if (!(r < 1.0 - 1e-9)) {
        throw Error(ErrorKind::RatioOutOfRange, "I_r/I_b = " + fmt_double(r) + " is not below 1");
    }
    PhononEstimate est;
    est.ratio = r;
    est.n = r / (1.0 - r);
    const double dr_r = sigma_r / I_b;
    const double dr_b = I_r * sigma_b / (I_b * I_b);
    est.sigma = std::hypot(dr_r, dr_b) / ((1.0 - r) * (1.0 - r));
    return est;
}

BackactionFlags backaction_check(const SystemParams& p, const MeasurementParams& mp, cplx alpha_3,
                                 const SteadyState& cooling) {
    const double g3 = coupling_g3(p, alpha_3);
    const double product = mp.gamma_mp * mp.gamma_3p;
    BackactionFlags f;
    f.weak_measurement = 8.0 * g3 * g3 < 0.1 * product;
    f.amplitude_hierarchy = std::abs(alpha_3) <= 0.1 * std::abs(cooling.alpha_1);
    f.stability_margin = 1.0 - 4.0 * g3 * g3 / product;
    f.stable = f.stability_margin > 0.0;
    return f;
}

void write_spectra_csv(std::ostream& os, const SpectrumResult& blue, const SpectrumResult& red) {
    if (blue.omega_grid != red.omega_grid) {
        throw Error(ErrorKind::InvalidParameter, "blue and red spectra use different grids");
    }
    os << "omega_rad_s,psd_blue,psd_red\n";
    for (std::size_t i = 0; i < blue.omega_grid.size(); ++i) {
        os << fmt_double(blue.omega_grid[i]) << ',' << fmt_double(blue.psd[i]) << ','
           << fmt_double(red.psd[i]) << '\n';
    }
}

}  // namespace optocool
