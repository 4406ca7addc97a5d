#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "optocool/cooling.hpp"
#include "optocool/covariance.hpp"
#include "optocool/errors.hpp"
#include "optocool/linear_model.hpp"
#include "optocool/noise.hpp"
#include "optocool/rates.hpp"

using namespace optocool;

namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr cplx I{0.0, 1.0};

SystemParams params(double alpha1, double temperature = 0.6, double gamma_2_hz = 1e6) {
    SystemParamsInput in;
    in.omega_m = kTwoPi * 100e6;
    in.gamma_1 = kTwoPi * 1e6;
    in.gamma_2 = kTwoPi * gamma_2_hz;
    in.quality_factor = 2e5;
    in.eta = 1e-4;
    in.Omega_c = in.gamma_1 * alpha1;
    in.temperature = temperature;
    return validate_params(in);
}

// Sigma = V X V^T with X_ij = -(V^-1 D V^-T)_ij / (l_i + l_j) in the eigenbasis of A.
Eigen::MatrixXd eigenbasis_lyapunov(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    const Eigen::MatrixXcd V = es.eigenvectors();
    const Eigen::VectorXcd l = es.eigenvalues();
    const Eigen::MatrixXcd Vi = V.inverse();
    Eigen::MatrixXcd X = Vi * D.cast<cplx>() * Vi.transpose();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) X(i, j) /= -(l(i) + l(j));
    }
    return (V * X * V.transpose()).real();
}

double rel_max(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
}

LinearModel thermal_mode(double w, double gamma, double n, const NoiseModel& noise = NoiseModel::white(0.0),
                         cplx f = 0.0) {
    Eigen::MatrixXcd M(1, 1), N = Eigen::MatrixXcd::Zero(1, 1);
    M(0, 0) = -I * w - gamma / 2.0;
    Eigen::VectorXcd fv(1);
    fv(0) = f;
    return assemble_model({"m"}, M, N, {gamma}, {n}, fv, noise);
}

}  // namespace

TEST_CASE("quadrature drift reproduces the complex equations of motion") {
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 3;
        Eigen::MatrixXcd M(n, n), N(n, n);
        Eigen::VectorXcd c(n);
        for (int i = 0; i < n; ++i) {
            c(i) = {nd(gen), nd(gen)};
            for (int j = 0; j < n; ++j) {
                M(i, j) = {nd(gen), nd(gen)};
                N(i, j) = {nd(gen), nd(gen)};
            }
        }
        const Eigen::VectorXcd cdot = M * c + N * c.conjugate();
        Eigen::VectorXd X(2 * n), Xdot(2 * n);
        for (int j = 0; j < n; ++j) {
            X(2 * j) = std::sqrt(2.0) * c(j).real();
            X(2 * j + 1) = std::sqrt(2.0) * c(j).imag();
            Xdot(2 * j) = std::sqrt(2.0) * cdot(j).real();
            Xdot(2 * j + 1) = std::sqrt(2.0) * cdot(j).imag();
        }
        CHECK((quadrature_drift(M, N) * X - Xdot).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("Lyapunov solve matches the eigenbasis oracle") {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> nd;
    for (int dim : {2, 4, 5}) {
        Eigen::MatrixXd A(dim, dim), B(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                A(i, j) = nd(gen);
                B(i, j) = nd(gen);
            }
        A -= (Eigen::EigenSolver<Eigen::MatrixXd>(A).eigenvalues().real().maxCoeff() + 0.5) *
             Eigen::MatrixXd::Identity(dim, dim);
        LinearModel m;
        m.A = A;
        m.D = B * B.transpose();
        m.n_modes = 0;
        const auto cov = solve_lyapunov(m);
        CHECK(rel_max(cov.Sigma, eigenbasis_lyapunov(m.A, m.D)) < 1e-10);
        CHECK(cov.lyapunov_residual < 1e-9 * m.D.cwiseAbs().maxCoeff());
    }

    const auto p = params(20.0);
    const auto ss = solve_classical_steady_state(p);
    for (const auto& noise : {NoiseModel::white(1e3), NoiseModel::finite_correlation(1e3, 0.1 * p.omega_m)}) {
        const auto model = build_cooling_model(p, ss, noise);
        const auto cov = solve_lyapunov(model);
        CHECK(rel_max(cov.Sigma, eigenbasis_lyapunov(model.A, model.D)) < 1e-8);
    }
}

TEST_CASE("single damped mode relaxes to its bath") {
    for (double n : {0.0, 0.3, 125.0}) {
        const auto cov = solve_lyapunov(thermal_mode(kTwoPi * 1e6, 1e4, n));
        CHECK(cov.n_per_mode[0] == doctest::Approx(n).epsilon(1e-10).scale(1.0));
        CHECK(cov.min_physical_eigenvalue == doctest::Approx(n).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("white and coloured phase drive on one mode match closed forms") {
    const double w = kTwoPi * 1e6, gamma = 2e4, G = 50.0;
    const cplx f{0.3, -0.7};
    const auto white = solve_lyapunov(thermal_mode(w, gamma, 0.2, NoiseModel::white(G), f));
    CHECK(white.n_per_mode[0] == doctest::Approx(0.2 + 2.0 * G * std::norm(f) / gamma).epsilon(1e-10));

    // Lorentzian convolution: n = |f|^2 G gc (gc + b) / (b ((gc + b)^2 + w^2)), b = gamma/2
    for (double gc : {0.01 * w, 0.1 * w, w}) {
        const auto ou = solve_lyapunov(thermal_mode(w, gamma, 0.2, NoiseModel::finite_correlation(G, gc), f));
        const double b = gamma / 2.0;
        const double ref = 0.2 + std::norm(f) * G * gc * (gc + b) / (b * ((gc + b) * (gc + b) + w * w));
        CHECK(ou.n_per_mode[0] == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("adiabatic model: phase-noise phonons equal the closed form") {
    const auto p = params(10.0);
    const auto ss = solve_classical_steady_state(p);
    const auto noise = NoiseModel::white(1e3);
    const auto m = build_adiabatic_model(p, ss, noise);
    const auto cov = solve_lyapunov(m);
    const double gt = gamma_tilde(p, ss);
    const double n_eff = p.gamma_m * p.n_mi() / (p.gamma_m + gt);
    CHECK(cov.n_per_mode[0] ==
          doctest::Approx(n_eff + 2.0 * 1e3 * std::norm(ss.alpha_2) * gt / p.gamma_2 / (p.gamma_m + gt))
              .epsilon(1e-9));
    // The closed form drops gamma_m against gamma_tilde.
    CHECK(std::abs(cov.n_per_mode[0] - n_eff - phase_noise_phonons(p, ss, noise)) <=
          1.0001 * p.gamma_m / gt * phase_noise_phonons(p, ss, noise));
}

TEST_CASE("rates at frozen points") {
    auto p = params(10.0);
    SteadyState ss;
    ss.alpha_1 = I * 10.0;
    // g = eta w_m |alpha_1| = 2 pi 0.1 MHz
    CHECK(coupling_strength(p, ss) == doctest::Approx(kTwoPi * 1e5).epsilon(1e-12));
    CHECK(gamma_tilde(p, ss) == doctest::Approx(2.513274e5).epsilon(1e-6));
    CHECK(adiabatic_regime(p, ss));
    ss.alpha_1 = I * 30.0;
    CHECK_FALSE(adiabatic_regime(p, ss));

    ss.alpha_2 = std::sqrt(1e3);
    const double white = phase_noise_phonons(p, ss, NoiseModel::white(1e3));
    CHECK(white == doctest::Approx(2.0 * 1e3 * 1e3 / p.gamma_2).epsilon(1e-12));
    CHECK(white < 1.0);
    const auto ou = NoiseModel::finite_correlation(1e3, p.omega_m);
    CHECK(phase_noise_phonons(p, ss, ou) == doctest::Approx(0.5 * white).epsilon(1e-12));
}

TEST_CASE("cooling report: consistency and limits") {
    const auto p = params(20.0);
    const auto r = cooling_report(p, NoiseModel::white(1e3));
    CHECK(r.stable);
    CHECK(r.max_re < 0.0);
    CHECK(r.suppression_factor == doctest::Approx(4e4).epsilon(1e-12));
    CHECK(r.n_total_estimate == doctest::Approx(r.n_q_limit + r.n_phase));
    CHECK(r.n_lyapunov > 0.0);
    CHECK(r.n_lyapunov < 1.0);
    CHECK(r.min_physical_eigenvalue > -1e-9);
    REQUIRE(r.n_lyapunov_with_a1.has_value());
    CHECK(*r.n_lyapunov_with_a1 == doctest::Approx(r.n_lyapunov).epsilon(0.01));

    // No bath and no phase noise: only the counter-rotating backaction floor remains.
    const auto q = params(20.0, 0.0);
    const auto cold = cooling_report(q, NoiseModel::white(0.0));
    CHECK(cold.n_lyapunov >= -1e-12);
    CHECK(cold.n_lyapunov < 1e-3);
}

TEST_CASE("two-mode and three-mode builds agree in the resolved regime") {
    const auto p = params(10.0);
    const auto ss = solve_classical_steady_state(p);
    const auto noise = NoiseModel::white(1e3);
    const auto two = solve_lyapunov(build_cooling_model(p, ss, noise));
    const auto three_model = build_cooling_model(p, ss, noise, {.include_a1 = true});
    const auto three = solve_lyapunov(three_model);
    CHECK(three_model.dimension() == 6);
    CHECK(three.n_per_mode[three_model.mode_index("am")] == doctest::Approx(two.n_per_mode[1]).epsilon(0.01));
}

TEST_CASE("OU augmentation adds exactly one auxiliary state") {
    const auto p = params(10.0);
    const auto ss = solve_classical_steady_state(p);
    const auto m = build_cooling_model(p, ss, NoiseModel::finite_correlation(1e3, p.omega_m));
    CHECK(m.dimension() == 5);
    CHECK(m.labels.back() == "ou_aux");
    CHECK(m.has_aux);
    CHECK_THROWS_AS(m.mode_index("ou_aux"), Error);
}

TEST_CASE("detection model stability and the Routh-Hurwitz report") {
    const auto p = params(10.0);
    MeasurementParams mp{kTwoPi * 2e14, kTwoPi * 1e6, 0.0, Sideband::Blue, kTwoPi * 2e5, 0.3};
    const double threshold = 0.5 * std::sqrt(mp.gamma_3p * mp.gamma_mp);
    const auto alpha_for = [&](double g3) { return cplx(g3 / (p.eta * p.omega_m), 0.0); };

    const auto below = routh_hurwitz_measurement(p, mp, alpha_for(0.5 * threshold));
    CHECK(below.eigen_stable_rwa);
    CHECK(below.eigen_stable_full);
    CHECK(below.simplified);
    CHECK(below.rwa_threshold_g3 == doctest::Approx(threshold));

    const auto above = routh_hurwitz_measurement(p, mp, alpha_for(1.5 * threshold));
    CHECK_FALSE(above.eigen_stable_rwa);
    try {
        solve_lyapunov(build_measurement_model(p, mp, alpha_for(1.5 * threshold), true));
        FAIL("expected Unstable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Unstable);
    }

    // The red sideband is a beam-splitter coupling and never goes unstable.
    mp.sideband = Sideband::Red;
    CHECK(stability_eigen(build_measurement_model(p, mp, alpha_for(10.0 * threshold), true)).stable);
}

TEST_CASE("physicality of Gaussian states from every model") {
    const auto p = params(20.0);
    const auto ss = solve_classical_steady_state(p);
    for (const auto& noise : {NoiseModel::white(1e3), NoiseModel::finite_correlation(1e3, 0.1 * p.omega_m)}) {
        for (bool a1 : {false, true}) {
            const auto cov = solve_lyapunov(build_cooling_model(p, ss, noise, {.include_a1 = a1}));
            CHECK(cov.min_physical_eigenvalue > -1e-9);
        }
    }
}
