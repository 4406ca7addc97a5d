#include "optocool/covariance.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "optocool/errors.hpp"

namespace optocool {

StabilityResult stability_eigen(const Eigen::MatrixXd& A) {
    StabilityResult out;
    if (A.size() == 0) {
        out.stable = true;
        out.max_re = -std::numeric_limits<double>::infinity();
        return out;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    out.max_re = -std::numeric_limits<double>::infinity();
    for (const auto& l : out.eigenvalues) out.max_re = std::max(out.max_re, l.real());
    out.stable = out.max_re < 0.0;
    return out;
}

double slowest_decay_rate(const Eigen::MatrixXd& A) {
    const auto st = stability_eigen(A);
    double slowest = std::numeric_limits<double>::infinity();
    for (const auto& l : st.eigenvalues) slowest = std::min(slowest, std::abs(l.real()));
    return slowest;
}

CovarianceResult solve_lyapunov(const LinearModel& model) {
    const Eigen::MatrixXd& A = model.A;
    const Eigen::MatrixXd& D = model.D;
    const auto st = stability_eigen(A);
    if (!st.stable) {
        throw Error(ErrorKind::Unstable,
                    "drift has eigenvalue with Re = " + std::to_string(st.max_re) + " >= 0");
    }

    const Eigen::Index n = A.rows();
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    // Column-major vec: vec(A S) = (I (x) A) vec S, vec(S A^T) = (A (x) I) vec S.
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            K.block(i * n, j * n, n, n) += id(i, j) * A;
            K.block(i * n, j * n, n, n) += A(i, j) * id;
        }
    }
    const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(D.data(), n * n);

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
    if (!(lu.rcond() > 1e-15)) {
        throw Error(ErrorKind::IllConditioned,
                    "Lyapunov operator reciprocal condition " + std::to_string(lu.rcond()));
    }
    Eigen::VectorXd v = lu.solve(rhs);
    for (int refine = 0; refine < 2; ++refine) v += lu.solve(rhs - K * v);

    CovarianceResult out;
    out.Sigma = Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
    out.Sigma = 0.5 * (out.Sigma + out.Sigma.transpose()).eval();

    const double dmax = D.cwiseAbs().maxCoeff();
    out.lyapunov_residual = (A * out.Sigma + out.Sigma * A.transpose() + D).cwiseAbs().maxCoeff();
    if (!(out.lyapunov_residual <= 1e-9 * dmax)) {
        throw Error(ErrorKind::IllConditioned,
                    "Lyapunov residual " + std::to_string(out.lyapunov_residual) +
                        " exceeds 1e-9 max|D| = " + std::to_string(1e-9 * dmax));
    }

    const auto nb = static_cast<Eigen::Index>(2 * model.n_modes);
    out.n_per_mode.resize(model.n_modes);
    for (std::size_t j = 0; j < model.n_modes; ++j) {
        const auto k = static_cast<Eigen::Index>(2 * j);
        out.n_per_mode[j] = 0.5 * (out.Sigma(k, k) + out.Sigma(k + 1, k + 1) - 1.0);
    }

    if (nb == 0) return out;
    Eigen::MatrixXcd H = out.Sigma.topLeftCorner(nb, nb).cast<std::complex<double>>();
    for (Eigen::Index j = 0; j < nb; j += 2) {
        H(j, j + 1) += std::complex<double>(0.0, 0.5);
        H(j + 1, j) -= std::complex<double>(0.0, 0.5);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(H, Eigen::EigenvaluesOnly);
    out.min_physical_eigenvalue = hs.eigenvalues().minCoeff();
    return out;
}

RouthHurwitzReport routh_hurwitz_measurement(const SystemParams& p, const MeasurementParams& mp,
                                             std::complex<double> alpha_3) {
    const double gm = mp.gamma_mp;
    const double g3 = mp.gamma_3p;
    const double wm = p.omega_m;
    const double coupling = p.eta * std::abs(alpha_3) * wm;

    RouthHurwitzReport r;
    r.g3 = coupling;
    r.rwa_threshold_g3 = 0.5 * std::sqrt(g3 * gm);

    // Full inequality, with omega_m' taken as omega_m.
    const double lhs = 2.0 * gm * g3 *
                       ((g3 * g3 + 4.0 * wm * wm) * g3 * g3 +
                        gm * ((gm + 2.0 * g3) * (g3 * g3 + wm * wm) + 2.0 * g3 * wm * wm));
    const double rhs = wm * wm * coupling * coupling * (gm + 2.0 * g3) * (gm + 2.0 * g3);
    r.full_inequality = lhs > rhs;
    r.simplified = 2.0 * gm * g3 > coupling * coupling;

    const auto full = stability_eigen(build_measurement_model(p, mp, alpha_3, false));
    const auto rwa = stability_eigen(build_measurement_model(p, mp, alpha_3, true));
    r.eigen_stable_full = full.stable;
    r.eigen_stable_rwa = rwa.stable;
    r.max_re_full = full.max_re;
    r.max_re_rwa = rwa.max_re;
    r.disagreement = r.full_inequality != full.stable || r.simplified != full.stable;
    return r;
}

}  // namespace optocool
