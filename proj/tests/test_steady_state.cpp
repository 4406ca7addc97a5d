#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "optocool/errors.hpp"
#include "optocool/steady_state.hpp"

using namespace optocool;

namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr cplx I{0.0, 1.0};

SystemParams params(double alpha1_target, double eta = 1e-4, double wm_over_g1 = 100.0) {
    SystemParamsInput in;
    in.gamma_1 = kTwoPi * 1e6;
    in.omega_m = wm_over_g1 * in.gamma_1;
    in.gamma_2 = kTwoPi * 1e6;
    in.quality_factor = 2e5;
    in.eta = eta;
    in.Omega_c = in.gamma_1 * alpha1_target;
    in.temperature = 0.6;
    return validate_params(in);
}

// With beta fixed the field equations are linear in (alpha_1, alpha_2):
//   -gamma_1/2 a1 - i D a2          = -i Omega_c/2
//   -i D a1 + (-i w_m - gamma_2/2) a2 = -i Omega_c/2,   D = 2 eta w_m Re beta
// Alternate with beta = -eta |a1 + a2|^2 until nothing moves.
SteadyState fixed_point_oracle(const SystemParams& p) {
    cplx beta = 0.0;
    Eigen::Vector2cd a = Eigen::Vector2cd::Zero();
    for (int it = 0; it < 10000; ++it) {
        const double D = 2.0 * p.eta * p.omega_m * beta.real();
        Eigen::Matrix2cd M;
        M << -p.gamma_1 / 2.0, -I * D, -I * D, -I * p.omega_m - p.gamma_2 / 2.0;
        const Eigen::Vector2cd rhs(-I * p.Omega_c / 2.0, -I * p.Omega_c / 2.0);
        a = M.partialPivLu().solve(rhs);
        const cplx next = -p.eta * std::norm(a(0) + a(1));
        const bool done = std::abs(next - beta) <= 1e-15 * std::abs(next);
        beta = next;
        if (done) break;
    }
    SteadyState s;
    s.alpha_1 = a(0);
    s.alpha_2 = a(1);
    s.beta = beta;
    s.Delta_L = 2.0 * p.eta * p.omega_m * beta.real();
    return s;
}

double rel(cplx x, cplx ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

TEST_CASE("Newton steady state agrees with the fixed-point oracle") {
    for (double a1 : {1.0, 20.0, 100.0}) {
        for (double eta : {1e-5, 1e-4}) {
            for (double ratio : {20.0, 100.0}) {
                const auto p = params(a1, eta, ratio);
                const auto ss = solve_classical_steady_state(p);
                const auto ref = fixed_point_oracle(p);
                CAPTURE(a1);
                CAPTURE(eta);
                CAPTURE(ratio);
                CHECK(rel(ss.alpha_1, ref.alpha_1) < 1e-9);
                CHECK(rel(ss.alpha_2, ref.alpha_2) < 1e-9);
                CHECK(rel(ss.beta, ref.beta) < 1e-9);
                CHECK(ss.Delta_L == doctest::Approx(ref.Delta_L).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("steady state residual and self-consistency") {
    const auto p = params(20.0);
    const auto ss = solve_classical_steady_state(p);
    CHECK(ss.residual < 1e-10);
    const auto r = steady_state_residual(p, ss.alpha_1, ss.alpha_2, ss.beta);
    for (double v : r) CHECK(std::abs(v) < 1e-10);

    const double dl = p.eta * p.omega_m * (ss.beta + std::conj(ss.beta)).real();
    CHECK(std::abs(ss.Delta_L - dl) <= 1e-12 * std::abs(dl));
    const double b = -p.eta * std::norm(ss.alpha_1 + ss.alpha_2);
    CHECK(std::abs(ss.beta - b) <= 1e-10 * std::abs(b));
}

TEST_CASE("drive phase: alpha_1 is close to +i Omega_c / gamma_1") {
    const auto p = params(20.0);
    const auto ss = solve_classical_steady_state(p);
    CHECK(rel(ss.alpha_1, I * p.Omega_c / p.gamma_1) < 1e-4);
}

TEST_CASE("undriven system sits at the origin") {
    auto p = params(20.0);
    p.Omega_c = 0.0;
    const auto ss = solve_classical_steady_state(p);
    CHECK(ss.alpha_1 == cplx{});
    CHECK(ss.alpha_2 == cplx{});
    CHECK(ss.beta == cplx{});
    CHECK(ss.Delta_L == 0.0);
    const auto ap = approximate_steady_state(p);
    CHECK(ap.alpha_1 == cplx{});
}

TEST_CASE("closed-form approximation tracks the exact root in the resolved regime") {
    for (double ratio : {50.0, 100.0, 200.0}) {
        const auto p = params(20.0, 1e-4, ratio);
        const auto ex = solve_classical_steady_state(p);
        const auto ap = approximate_steady_state(p);
        CHECK(rel(ap.alpha_1, ex.alpha_1) < 1e-3);
        CHECK(rel(ap.alpha_2, ex.alpha_2) < 1e-3);
        CHECK(rel(ap.beta, ex.beta) < 1e-3);
        // |alpha_2/alpha_1| ~ gamma_1/(2 omega_m)
        const double r = std::abs(ex.alpha_2) / std::abs(ex.alpha_1);
        CHECK(r == doctest::Approx(p.gamma_1 / (2.0 * p.omega_m)).epsilon(0.01));
    }
}

TEST_CASE("iteration cap reports non-convergence") {
    const auto p = params(20.0);
    SteadyStateOptions opts;
    opts.max_iterations = 0;
    try {
        solve_classical_steady_state(p, opts);
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoConvergence);
    }
}

TEST_CASE("measurement steady state pins the effective detuning") {
    const auto p = params(20.0);
    for (Sideband sb : {Sideband::Blue, Sideband::Red}) {
        MeasurementParams mp{kTwoPi * 2e14, kTwoPi * 1e6, kTwoPi * 2e5, sb, kTwoPi * 1e5, 0.3};
        const auto ms = measurement_steady_state(p, mp);
        const double d = sideband_detuning(sb, p.omega_m);
        CHECK(ms.effective_detuning == d);
        // i D a3 - gamma_3'/2 a3 + i Omega_d/2 = 0
        const cplx e = I * d * ms.alpha_3 - mp.gamma_3p / 2.0 * ms.alpha_3 + I * mp.Omega_d / 2.0;
        CHECK(std::abs(e) < 1e-12 * mp.Omega_d);
        CHECK(ms.beta_p.real() == doctest::Approx(-p.eta * std::norm(ms.alpha_3)));
        CHECK(ms.residual <= 1e-10);
    }
    CHECK(sideband_detuning(Sideband::Blue, 1.0) == 1.0);
    CHECK(sideband_detuning(Sideband::Red, 1.0) == -1.0);
}
