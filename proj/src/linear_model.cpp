#include "optocool/linear_model.hpp"

#include <cmath>
#include <utility>

#include "optocool/errors.hpp"
#include "optocool/rates.hpp"

namespace optocool {

namespace {
constexpr cplx I{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

std::size_t LinearModel::mode_index(const std::string& label) const {
    for (std::size_t j = 0; j < n_modes; ++j) {
        if (labels[j] == label) return j;
    }
    throw Error(ErrorKind::InvalidParameter, "model has no mode '" + label + "'");
}

Eigen::MatrixXd quadrature_drift(const Eigen::MatrixXcd& M, const Eigen::MatrixXcd& N) {
    const Eigen::Index n = M.rows();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const cplx plus = M(j, k) + N(j, k);
            const cplx minus = M(j, k) - N(j, k);
            A(2 * j, 2 * k) = plus.real();
            A(2 * j, 2 * k + 1) = -minus.imag();
            A(2 * j + 1, 2 * k) = plus.imag();
            A(2 * j + 1, 2 * k + 1) = minus.real();
        }
    }
    return A;
}

LinearModel assemble_model(std::vector<std::string> labels, const Eigen::MatrixXcd& M,
                           const Eigen::MatrixXcd& N, std::vector<double> decay_rates,
                           std::vector<double> bath_occupations, const Eigen::VectorXcd& phase_drive,
                           const NoiseModel& noise) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    if (M.rows() != n || M.cols() != n || N.rows() != n || N.cols() != n ||
        phase_drive.size() != n || decay_rates.size() != labels.size() ||
        bath_occupations.size() != labels.size()) {
        throw Error(ErrorKind::InvalidParameter, "inconsistent model dimensions");
    }

    LinearModel m;
    m.n_modes = labels.size();
    m.has_aux = noise.kind == NoiseKind::FiniteCorrelation;
    m.labels = std::move(labels);
    if (m.has_aux) m.labels.emplace_back("ou_aux");
    m.M = M;
    m.N = N;
    m.decay_rates = std::move(decay_rates);
    m.bath_occupations = std::move(bath_occupations);
    m.phase_drive = phase_drive;
    m.noise = noise;

    const auto dim = static_cast<Eigen::Index>(m.dimension());
    m.A = Eigen::MatrixXd::Zero(dim, dim);
    m.D = Eigen::MatrixXd::Zero(dim, dim);
    m.A.topLeftCorner(2 * n, 2 * n) = quadrature_drift(M, N);

    Eigen::VectorXd u(2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double diff = m.decay_rates[static_cast<std::size_t>(j)] *
                            (m.bath_occupations[static_cast<std::size_t>(j)] + 0.5);
        m.D(2 * j, 2 * j) = diff;
        m.D(2 * j + 1, 2 * j + 1) = diff;
        u(2 * j) = kSqrt2 * phase_drive(j).real();
        u(2 * j + 1) = kSqrt2 * phase_drive(j).imag();
    }

    if (noise.kind == NoiseKind::White) {
        m.D.topLeftCorner(2 * n, 2 * n) += 2.0 * noise.Gamma_l * u * u.transpose();
    } else {
        const double scale = std::sqrt(noise.Gamma_l * noise.gamma_c);
        m.A.block(0, 2 * n, 2 * n, 1) = scale * u;
        m.A(2 * n, 2 * n) = -noise.gamma_c;
        m.D(2 * n, 2 * n) = 2.0 * noise.gamma_c;
    }
    return m;
}

LinearModel build_cooling_model(const SystemParams& p, const SteadyState& ss, const NoiseModel& noise,
                                const CoolingModelOptions& opts) {
    const double wm = p.omega_m;
    const double n_mi = p.n_mi();
    const cplx drive_amp = opts.drive == PhaseDriveSource::TwoMode ? ss.alpha_2 : ss.alpha_1;

    if (!opts.include_a1) {
        const cplx G = p.eta * wm * ss.alpha_1;
        Eigen::MatrixXcd M(2, 2), N = Eigen::MatrixXcd::Zero(2, 2);
        M << -I * wm - p.gamma_2 / 2.0, -I * G,
             -I * std::conj(G), -I * wm - p.gamma_m / 2.0;
        N(0, 1) = -I * G;
        N(1, 0) = -I * G;
        Eigen::VectorXcd f(2);
        f << I * drive_amp, 0.0;
        return assemble_model({"a2", "am"}, M, N, {p.gamma_2, p.gamma_m}, {0.0, n_mi}, f, noise);
    }

    const cplx Gs = p.eta * wm * (ss.alpha_1 + ss.alpha_2);
    const double dL = ss.Delta_L;
    Eigen::MatrixXcd M(3, 3), N = Eigen::MatrixXcd::Zero(3, 3);
    M << -p.gamma_1 / 2.0, -I * dL, -I * Gs,
         -I * dL, -I * wm - p.gamma_2 / 2.0, -I * Gs,
         -I * std::conj(Gs), -I * std::conj(Gs), -I * wm - p.gamma_m / 2.0;
    N(0, 2) = -I * Gs;
    N(1, 2) = -I * Gs;
    N(2, 0) = -I * Gs;
    N(2, 1) = -I * Gs;
    Eigen::VectorXcd f(3);
    f << I * ss.alpha_1, I * drive_amp, 0.0;
    return assemble_model({"a1", "a2", "am"}, M, N, {p.gamma_1, p.gamma_2, p.gamma_m},
                          {0.0, 0.0, n_mi}, f, noise);
}

LinearModel build_adiabatic_model(const SystemParams& p, const SteadyState& ss, const NoiseModel& noise) {
    const double gt = gamma_tilde(p, ss);
    const double total = p.gamma_m + gt;
    const double n_eff = p.gamma_m * p.n_mi() / total;
    Eigen::MatrixXcd M(1, 1), N = Eigen::MatrixXcd::Zero(1, 1);
    M(0, 0) = -I * p.omega_m - total / 2.0;
    Eigen::VectorXcd f(1);
    f(0) = -std::sqrt(gt / p.gamma_2) * ss.alpha_2;
    return assemble_model({"am"}, M, N, {total}, {n_eff}, f, noise);
}

LinearModel build_measurement_model(const SystemParams& p, const MeasurementParams& mp, cplx alpha_3,
                                    bool rwa) {
    const double wm = p.omega_m;
    const cplx G = p.eta * wm * alpha_3;
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2, 2), N = Eigen::MatrixXcd::Zero(2, 2);
    if (rwa) {
        M(0, 0) = -mp.gamma_3p / 2.0;
        M(1, 1) = -mp.gamma_mp / 2.0;
        if (mp.sideband == Sideband::Blue) {
            N(0, 1) = -I * G;
            N(1, 0) = -I * G;
        } else {
            M(0, 1) = -I * G;
            M(1, 0) = -I * std::conj(G);
        }
    } else {
        M(0, 0) = I * sideband_detuning(mp.sideband, wm) - mp.gamma_3p / 2.0;
        M(1, 1) = -I * wm - mp.gamma_mp / 2.0;
        M(0, 1) = -I * G;
        N(0, 1) = -I * G;
        M(1, 0) = -I * std::conj(G);
        N(1, 0) = -I * G;
    }
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(2);
    return assemble_model({"a3", "am"}, M, N, {mp.gamma_3p, mp.gamma_mp}, {0.0, mp.n_mf}, f,
                          NoiseModel::white(0.0));
}

}  // namespace optocool
