#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "optocool/linear_model.hpp"

namespace optocool {

struct CovarianceResult {
    Eigen::MatrixXd Sigma;
    std::vector<double> n_per_mode;     // (<x^2> + <p^2> - 1)/2
    double lyapunov_residual = 0.0;     // max |A Sigma + Sigma A^T + D|
    double min_physical_eigenvalue = 0.0;  // of Sigma + (i/2) Omega on the bosonic block
};

/// Steady covariance: A Sigma + Sigma A^T + D = 0 via the vectorised
/// (I (x) A + A (x) I) vec(Sigma) = -vec(D) system. Throws Unstable if any
/// eigenvalue of A has Re >= 0, IllConditioned if the solve cannot reach
/// residual < 1e-9 max|D|.
CovarianceResult solve_lyapunov(const LinearModel& model);

struct StabilityResult {
    bool stable = false;
    double max_re = 0.0;
    std::vector<std::complex<double>> eigenvalues;
};

StabilityResult stability_eigen(const Eigen::MatrixXd& A);
inline StabilityResult stability_eigen(const LinearModel& m) { return stability_eigen(m.A); }

/// Smallest |Re lambda| over the spectrum of A (slowest relaxation).
double slowest_decay_rate(const Eigen::MatrixXd& A);

struct RouthHurwitzReport {
    bool full_inequality = false;  // full algebraic inequality, evaluated verbatim
    bool simplified = false;       // 2 gamma_m' gamma_3' > eta^2 omega_m^2 |alpha_3|^2
    bool eigen_stable_full = false;
    bool eigen_stable_rwa = false;
    double max_re_full = 0.0;
    double max_re_rwa = 0.0;
    double g3 = 0.0;
    double rwa_threshold_g3 = 0.0;  // sqrt(gamma_3' gamma_m')/2
    bool disagreement = false;      // any algebraic verdict differs from the full-model eigenvalues
};

RouthHurwitzReport routh_hurwitz_measurement(const SystemParams& p, const MeasurementParams& mp,
                                             std::complex<double> alpha_3);

}  // namespace optocool
